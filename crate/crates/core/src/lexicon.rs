//! Gendered term dictionaries: pronoun paradigms with case slots,
//! definitionally gendered common-noun pairs, and a name bijection.
//!
//! A small demo lexicon ships compiled into the crate ([`Lexicon::builtin`]);
//! production dictionaries are user-supplied TSV files with the same shape.
//! All lookups are exact-match on the lowercased form.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

use crate::caps;
use crate::corpus::Number;
use crate::inflect;

/// Pronoun case slot. `her` is syncretic between [`CaseSlot::Acc`] and
/// [`CaseSlot::PossDet`]; `his` between [`CaseSlot::PossDet`] and
/// [`CaseSlot::PossInd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseSlot {
    Nom,
    Acc,
    PossDet,
    PossInd,
    Refl,
}

impl CaseSlot {
    pub const ALL: [CaseSlot; 5] = [
        CaseSlot::Nom,
        CaseSlot::Acc,
        CaseSlot::PossDet,
        CaseSlot::PossInd,
        CaseSlot::Refl,
    ];

    fn idx(self) -> usize {
        match self {
            CaseSlot::Nom => 0,
            CaseSlot::Acc => 1,
            CaseSlot::PossDet => 2,
            CaseSlot::PossInd => 3,
            CaseSlot::Refl => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseSlot::Nom => "NOM",
            CaseSlot::Acc => "ACC",
            CaseSlot::PossDet => "POSS_DET",
            CaseSlot::PossInd => "POSS_IND",
            CaseSlot::Refl => "REFL",
        }
    }
}

/// Pronoun paradigm gender. `They` is the singular-*they* paradigm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gender {
    Masc,
    Fem,
    They,
}

impl Gender {
    /// Counterpart for masculine/feminine swapping; `They` has none.
    pub fn opposite(self) -> Option<Gender> {
        match self {
            Gender::Masc => Some(Gender::Fem),
            Gender::Fem => Some(Gender::Masc),
            Gender::They => None,
        }
    }

    fn idx(self) -> usize {
        match self {
            Gender::Masc => 0,
            Gender::Fem => 1,
            Gender::They => 2,
        }
    }
}

/// The three fixed pronoun paradigms, one surface form per case slot.
/// The reflexive of the *they* paradigm is `themself`, never `themselves`.
const PARADIGMS: [(Gender, [&str; 5]); 3] = [
    (Gender::Masc, ["he", "him", "his", "his", "himself"]),
    (Gender::Fem, ["she", "her", "her", "hers", "herself"]),
    (
        Gender::They,
        ["they", "them", "their", "theirs", "themself"],
    ),
];

/// One gender's pronoun forms, indexed by case slot.
#[derive(Debug, Clone)]
pub struct PronounParadigm {
    pub gender: Gender,
    forms: [&'static str; 5],
}

impl PronounParadigm {
    pub fn form(&self, slot: CaseSlot) -> &'static str {
        self.forms[slot.idx()]
    }

    /// Slots the (lowercased) form occupies in this paradigm.
    pub fn slots_of(&self, lower_form: &str) -> Vec<CaseSlot> {
        CaseSlot::ALL
            .iter()
            .copied()
            .filter(|s| self.forms[s.idx()] == lower_form)
            .collect()
    }
}

/// Errors raised while loading or querying dictionaries.
#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{file} line {line}: expected {expected}, found {found:?}")]
    MalformedRow {
        file: &'static str,
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("noun table: duplicate lemma {0:?}")]
    DuplicateNounLemma(String),
    #[error("noun table is not a bijection: {0:?} appears on both sides")]
    NonBijectiveNoun(String),
    #[error("pronoun file row for {gender:?} does not match the fixed paradigm")]
    WrongParadigm { gender: String },
    #[error("pronoun file must define masc, fem and they rows exactly once")]
    IncompleteParadigms,
    #[error("form {form:?} does not fill slot {slot} in its paradigm")]
    FormSlotMismatch { form: String, slot: &'static str },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Bidirectional map of definitionally gendered common-noun lemmas.
#[derive(Debug, Clone, Default)]
pub struct NounPairTable {
    // lemma -> (counterpart lemma, gender of the lemma itself)
    entries: HashMap<String, (String, Gender)>,
}

impl NounPairTable {
    pub fn from_pairs<I>(pairs: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut table = NounPairTable::default();
        for (masc, fem) in pairs {
            if masc == fem {
                return Err(LexiconError::NonBijectiveNoun(masc));
            }
            for (lemma, other, gender) in [
                (masc.clone(), fem.clone(), Gender::Masc),
                (fem, masc, Gender::Fem),
            ] {
                match table.entries.get(&lemma) {
                    None => {
                        table.entries.insert(lemma, (other, gender));
                    }
                    Some((_, existing)) if *existing != gender => {
                        return Err(LexiconError::NonBijectiveNoun(lemma));
                    }
                    Some(_) => return Err(LexiconError::DuplicateNounLemma(lemma)),
                }
            }
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The counterpart lemma and the gender of the queried lemma.
    pub fn lookup(&self, lemma: &str) -> Option<(&str, Gender)> {
        self.entries.get(lemma).map(|(c, g)| (c.as_str(), *g))
    }
}

/// Masculine/feminine first-name sets and the involutional swap map built
/// from them. Names listed under both genders are excluded from swapping.
#[derive(Debug, Clone, Default)]
pub struct NameTable {
    pub masc_names: HashSet<String>,
    pub fem_names: HashSet<String>,
    pub excluded: HashSet<String>,
    mapping: HashMap<String, String>,
}

impl NameTable {
    /// Build the table from names in file order. The i-th masculine name is
    /// paired with the i-th feminine name (after dropping dual-listed
    /// names); the shorter list truncates the pairing.
    pub fn from_lists(masc_in_order: &[String], fem_in_order: &[String]) -> Self {
        let masc_set: HashSet<String> = masc_in_order.iter().cloned().collect();
        let fem_set: HashSet<String> = fem_in_order.iter().cloned().collect();
        let excluded: HashSet<String> = masc_set.intersection(&fem_set).cloned().collect();
        let masc: Vec<&String> = masc_in_order
            .iter()
            .filter(|n| !excluded.contains(*n))
            .collect();
        let fem: Vec<&String> = fem_in_order
            .iter()
            .filter(|n| !excluded.contains(*n))
            .collect();
        let mut mapping = HashMap::new();
        for (m, f) in masc.iter().zip(fem.iter()) {
            mapping.insert((*m).clone(), (*f).clone());
            mapping.insert((*f).clone(), (*m).clone());
        }
        NameTable {
            masc_names: masc_set,
            fem_names: fem_set,
            excluded,
            mapping,
        }
    }

    pub fn lookup(&self, lower_name: &str) -> Option<&str> {
        self.mapping.get(lower_name).map(String::as_str)
    }

    /// Which gender list a (non-excluded) name belongs to.
    pub fn gender_of(&self, lower_name: &str) -> Option<Gender> {
        if self.excluded.contains(lower_name) {
            None
        } else if self.masc_names.contains(lower_name) {
            Some(Gender::Masc)
        } else if self.fem_names.contains(lower_name) {
            Some(Gender::Fem)
        } else {
            None
        }
    }
}

/// The full lexicon: pronoun paradigms, noun pairs, and the name map.
#[derive(Debug, Clone)]
pub struct Lexicon {
    paradigms: [PronounParadigm; 3],
    pub nouns: NounPairTable,
    pub names: NameTable,
}

fn fixed_paradigms() -> [PronounParadigm; 3] {
    PARADIGMS.map(|(gender, forms)| PronounParadigm { gender, forms })
}

/// Which fixed paradigm contains this surface form (case-insensitive), plus
/// the slots it fills. The paradigms are compiled-in, so this needs no
/// loaded [`Lexicon`]. Forms are unique across paradigms.
pub fn paradigm_member(form: &str) -> Option<(Gender, Vec<CaseSlot>)> {
    let lower = form.to_lowercase();
    for (gender, forms) in PARADIGMS {
        let slots: Vec<CaseSlot> = CaseSlot::ALL
            .iter()
            .copied()
            .filter(|s| forms[s.idx()] == lower)
            .collect();
        if !slots.is_empty() {
            return Some((gender, slots));
        }
    }
    None
}

impl Lexicon {
    /// The demo lexicon compiled into the crate (~50 noun pairs, ~200
    /// names). Suitable for tests and small experiments; real runs should
    /// load curated dictionaries.
    pub fn builtin() -> &'static Lexicon {
        static BUILTIN: OnceLock<Lexicon> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            Lexicon::from_strs(
                include_str!("../data/pronouns.tsv"),
                include_str!("../data/nouns.tsv"),
                include_str!("../data/names.tsv"),
            )
            .expect("builtin lexicon data is valid")
        })
    }

    /// Load the three dictionary files. Formats:
    ///
    /// * pronoun file: `gender<TAB>nom<TAB>acc<TAB>poss_det<TAB>poss_ind<TAB>refl`
    /// * noun file: `masc_lemma<TAB>fem_lemma`
    /// * name file: `name<TAB>M|F`
    pub fn load(
        pronoun_path: &Path,
        noun_path: &Path,
        name_path: &Path,
    ) -> Result<Lexicon, LexiconError> {
        let read = |path: &Path| {
            std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
                path: path.display().to_string(),
                source,
            })
        };
        Lexicon::from_strs(&read(pronoun_path)?, &read(noun_path)?, &read(name_path)?)
    }

    pub fn from_strs(
        pronoun_tsv: &str,
        noun_tsv: &str,
        name_tsv: &str,
    ) -> Result<Lexicon, LexiconError> {
        let paradigms = parse_pronoun_file(pronoun_tsv)?;
        let nouns = parse_noun_file(noun_tsv)?;
        let names = parse_name_file(name_tsv)?;
        Ok(Lexicon {
            paradigms,
            nouns,
            names,
        })
    }

    pub fn paradigm(&self, gender: Gender) -> &PronounParadigm {
        &self.paradigms[gender.idx()]
    }

    /// Which paradigm contains this surface form (case-insensitive), plus
    /// the slots it fills there. Forms are unique across paradigms.
    pub fn paradigm_of(&self, form: &str) -> Option<(Gender, Vec<CaseSlot>)> {
        paradigm_member(form)
    }

    /// Map a pronoun form to the target paradigm's form for the same slot.
    ///
    /// Returns `Ok(None)` when the form is not a paradigm member (no-swap)
    /// and an error when the form does not fill the requested slot.
    /// Capitalization of the input is preserved.
    pub fn map_pronoun(
        &self,
        form: &str,
        slot: CaseSlot,
        target: Gender,
    ) -> Result<Option<String>, LexiconError> {
        let Some((_, slots)) = self.paradigm_of(form) else {
            return Ok(None);
        };
        if !slots.contains(&slot) {
            return Err(LexiconError::FormSlotMismatch {
                form: form.to_string(),
                slot: slot.name(),
            });
        }
        let mapped = self.paradigm(target).form(slot);
        Ok(Some(caps::transfer(form, mapped)))
    }

    /// Map a definitionally gendered common noun to its counterpart,
    /// reinflected to the given number. `None` when the lemma is not in the
    /// table or already has the target gender.
    pub fn map_common_noun(
        &self,
        lemma: &str,
        form: &str,
        target: Gender,
        number: Number,
    ) -> Option<String> {
        let (counterpart, own_gender) = self.nouns.lookup(&lemma.to_lowercase())?;
        if own_gender.opposite() != Some(target) {
            return None;
        }
        let inflected = inflect::match_number(counterpart, number);
        Some(caps::transfer(form, &inflected))
    }

    /// Map a first name through the involutional name table. `None` for
    /// excluded (dual-listed) or unknown names.
    pub fn map_name(&self, form: &str) -> Option<String> {
        let mapped = self.names.lookup(&form.to_lowercase())?;
        Some(caps::transfer(form, mapped))
    }
}

fn parse_pronoun_file(text: &str) -> Result<[PronounParadigm; 3], LexiconError> {
    let mut seen: HashMap<Gender, [String; 5]> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 6 {
            return Err(LexiconError::MalformedRow {
                file: "pronouns",
                line: i + 1,
                expected: "gender + five tab-separated forms",
                found: raw.to_string(),
            });
        }
        let gender = match cols[0] {
            "masc" => Gender::Masc,
            "fem" => Gender::Fem,
            "they" => Gender::They,
            other => {
                return Err(LexiconError::MalformedRow {
                    file: "pronouns",
                    line: i + 1,
                    expected: "gender in {masc, fem, they}",
                    found: other.to_string(),
                })
            }
        };
        let forms: [String; 5] = [
            cols[1].to_lowercase(),
            cols[2].to_lowercase(),
            cols[3].to_lowercase(),
            cols[4].to_lowercase(),
            cols[5].to_lowercase(),
        ];
        seen.insert(gender, forms);
    }
    if seen.len() != 3 {
        return Err(LexiconError::IncompleteParadigms);
    }
    // The paradigms are a closed system the swap laws depend on; a file
    // that deviates from them is rejected rather than silently accepted.
    for (gender, expected) in PARADIGMS {
        let got = &seen[&gender];
        if got.iter().map(String::as_str).ne(expected.iter().copied()) {
            return Err(LexiconError::WrongParadigm {
                gender: format!("{gender:?}"),
            });
        }
    }
    Ok(fixed_paradigms())
}

fn parse_noun_file(text: &str) -> Result<NounPairTable, LexiconError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('\t') {
            Some((masc, fem)) if !masc.is_empty() && !fem.is_empty() => {
                pairs.push((masc.to_lowercase(), fem.trim().to_lowercase()));
            }
            _ => {
                return Err(LexiconError::MalformedRow {
                    file: "nouns",
                    line: i + 1,
                    expected: "masc_lemma<TAB>fem_lemma",
                    found: raw.to_string(),
                })
            }
        }
    }
    NounPairTable::from_pairs(pairs)
}

fn parse_name_file(text: &str) -> Result<NameTable, LexiconError> {
    let mut masc = Vec::new();
    let mut fem = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('\t') {
            Some((name, "M")) => masc.push(name.to_lowercase()),
            Some((name, "F")) => fem.push(name.to_lowercase()),
            _ => {
                return Err(LexiconError::MalformedRow {
                    file: "names",
                    line: i + 1,
                    expected: "name<TAB>M|F",
                    found: raw.to_string(),
                })
            }
        }
    }
    Ok(NameTable::from_lists(&masc, &fem))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> &'static Lexicon {
        Lexicon::builtin()
    }

    #[test]
    fn him_maps_to_her() {
        assert_eq!(
            lex()
                .map_pronoun("him", CaseSlot::Acc, Gender::Fem)
                .unwrap(),
            Some("her".to_string())
        );
    }

    #[test]
    fn her_is_disambiguated_by_slot() {
        assert_eq!(
            lex()
                .map_pronoun("her", CaseSlot::PossDet, Gender::Masc)
                .unwrap(),
            Some("his".to_string())
        );
        assert_eq!(
            lex()
                .map_pronoun("her", CaseSlot::Acc, Gender::Masc)
                .unwrap(),
            Some("him".to_string())
        );
    }

    #[test]
    fn capitalized_he_maps_to_they() {
        assert_eq!(
            lex()
                .map_pronoun("He", CaseSlot::Nom, Gender::They)
                .unwrap(),
            Some("They".to_string())
        );
    }

    #[test]
    fn non_pronoun_is_a_no_swap() {
        assert_eq!(
            lex()
                .map_pronoun("table", CaseSlot::Nom, Gender::Fem)
                .unwrap(),
            None
        );
    }

    #[test]
    fn inconsistent_slot_is_an_error() {
        assert!(lex()
            .map_pronoun("him", CaseSlot::PossDet, Gender::Fem)
            .is_err());
        assert!(lex()
            .map_pronoun("her", CaseSlot::Nom, Gender::Masc)
            .is_err());
    }

    #[test]
    fn pronoun_swap_is_an_involution_per_slot() {
        for p in [Gender::Masc, Gender::Fem] {
            let other = p.opposite().unwrap();
            for slot in CaseSlot::ALL {
                let form = lex().paradigm(p).form(slot);
                let there = lex().map_pronoun(form, slot, other).unwrap().unwrap();
                let back = lex().map_pronoun(&there, slot, p).unwrap().unwrap();
                assert_eq!(back, form, "slot {slot:?}");
            }
        }
    }

    #[test]
    fn reflexive_they_form_is_themself() {
        assert_eq!(
            lex().paradigm(Gender::They).form(CaseSlot::Refl),
            "themself"
        );
    }

    #[test]
    fn actor_maps_to_actress_both_directions() {
        assert_eq!(
            lex().map_common_noun("actor", "actor", Gender::Fem, Number::Sing),
            Some("actress".to_string())
        );
        assert_eq!(
            lex().map_common_noun("actress", "actress", Gender::Masc, Number::Sing),
            Some("actor".to_string())
        );
    }

    #[test]
    fn plural_nouns_are_reinflected() {
        assert_eq!(
            lex().map_common_noun("actor", "actors", Gender::Fem, Number::Plur),
            Some("actresses".to_string())
        );
        assert_eq!(
            lex().map_common_noun("man", "man", Gender::Fem, Number::Sing),
            Some("woman".to_string())
        );
    }

    #[test]
    fn non_gendered_noun_is_a_no_swap() {
        assert_eq!(
            lex().map_common_noun("table", "table", Gender::Fem, Number::Sing),
            None
        );
    }

    #[test]
    fn dual_listed_names_are_excluded() {
        let names = &lex().names;
        assert!(names.excluded.contains("taylor"));
        assert_eq!(lex().map_name("Taylor"), None);
        assert_eq!(names.gender_of("taylor"), None);
    }

    #[test]
    fn name_mapping_is_an_involution() {
        let mapped = lex().map_name("James").expect("james is mapped");
        let back = lex().map_name(&mapped).unwrap();
        assert_eq!(back, "James");
    }

    #[test]
    fn unknown_name_is_a_no_swap() {
        assert_eq!(lex().map_name("Zxqv"), None);
    }

    #[test]
    fn empty_name_file_loads_with_empty_mapping() {
        let lexicon =
            Lexicon::from_strs(include_str!("../data/pronouns.tsv"), "actor\tactress\n", "")
                .unwrap();
        assert_eq!(lexicon.map_name("James"), None);
        assert!(lexicon.names.excluded.is_empty());
    }

    #[test]
    fn duplicate_noun_lemma_is_rejected() {
        let err = Lexicon::from_strs(
            include_str!("../data/pronouns.tsv"),
            "actor\tactress\nactor\tqueen\n",
            "",
        )
        .unwrap_err();
        assert!(matches!(err, LexiconError::DuplicateNounLemma(_)));
    }

    #[test]
    fn noun_lemma_on_both_sides_is_rejected() {
        let err = Lexicon::from_strs(
            include_str!("../data/pronouns.tsv"),
            "actor\tactress\nactress\tlady\n",
            "",
        )
        .unwrap_err();
        assert!(matches!(err, LexiconError::NonBijectiveNoun(_)));
    }

    #[test]
    fn deviant_pronoun_file_is_rejected() {
        let err = Lexicon::from_strs(
            "masc\the\thim\this\this\thimself\n\
             fem\tshe\ther\ther\thers\therself\n\
             they\tthey\tthem\ttheir\ttheirs\tthemselves\n",
            "actor\tactress\n",
            "",
        )
        .unwrap_err();
        assert!(matches!(err, LexiconError::WrongParadigm { .. }));
        let err = Lexicon::from_strs("masc\the\thim\this\this\thimself\n", "", "").unwrap_err();
        assert!(matches!(err, LexiconError::IncompleteParadigms));
    }

    #[test]
    fn noun_swap_applied_twice_is_identity() {
        for lemma in ["actor", "king", "waiter", "husband", "son"] {
            let (there, g) = lex().nouns.lookup(lemma).unwrap();
            assert_eq!(g, Gender::Masc);
            let (back, _) = lex().nouns.lookup(there).unwrap();
            assert_eq!(back, lemma);
        }
    }
}
