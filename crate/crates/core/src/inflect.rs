//! Rule-based English inflection needed by the swaps: retargeting verb
//! agreement to *they*, and matching noun number.
//!
//! Unknown or ambiguous forms pass through unchanged; augmentation has to be
//! safe-by-default on noisy learner text.

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::caps;
use crate::corpus::{Feats, Number};

/// Third-singular forms (and contractions) whose plural-agreement
/// counterpart is not derivable by stripping a suffix.
const IRREGULAR_VERBS: [(&str, &str); 9] = [
    ("is", "are"),
    ("was", "were"),
    ("has", "have"),
    ("does", "do"),
    ("'s", "'re"),
    ("isn't", "aren't"),
    ("wasn't", "weren't"),
    ("hasn't", "haven't"),
    ("doesn't", "don't"),
];

#[derive(Debug, Error)]
pub enum InflectError {
    #[error("irregular verb table line {line}: expected `form<TAB>replacement`, found {found:?}")]
    MalformedRow { line: usize, found: String },
    #[error("irregular verb table: key {0:?} must be lowercase")]
    NotLowercase(String),
    #[error("irregular verb table: key {0:?} maps to itself")]
    SelfMapping(String),
}

/// Map of 3sg verb form to its plural-agreement form.
#[derive(Debug, Clone)]
pub struct IrregularVerbTable {
    map: HashMap<String, String>,
}

impl IrregularVerbTable {
    /// The compiled-in table (`is -> are`, `doesn't -> don't`, ...).
    pub fn builtin() -> &'static IrregularVerbTable {
        static BUILTIN: OnceLock<IrregularVerbTable> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            let map = IRREGULAR_VERBS
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            IrregularVerbTable { map }
        })
    }

    /// Parse an override table from `form<TAB>replacement` lines.
    pub fn from_tsv(text: &str) -> Result<IrregularVerbTable, InflectError> {
        let mut map = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('\t') else {
                return Err(InflectError::MalformedRow {
                    line: i + 1,
                    found: raw.to_string(),
                });
            };
            if key != key.to_lowercase() {
                return Err(InflectError::NotLowercase(key.to_string()));
            }
            if key == value {
                return Err(InflectError::SelfMapping(key.to_string()));
            }
            map.insert(key.to_string(), value.to_string());
        }
        Ok(IrregularVerbTable { map })
    }

    pub fn get(&self, lower_form: &str) -> Option<&str> {
        self.map.get(lower_form).map(String::as_str)
    }
}

fn is_third_singular_spelling_of(lower: &str, lemma: &str) -> bool {
    if lemma.is_empty() {
        return false;
    }
    if lower == format!("{lemma}s") || lower == format!("{lemma}es") {
        return true;
    }
    // carry -> carries
    if let Some(stem) = lemma.strip_suffix('y') {
        if lower == format!("{stem}ies") {
            return true;
        }
    }
    false
}

/// Strip 3sg present morphology by spelling alone. Rule order: `-ies -> -y`,
/// `-es` after s/x/z/ch/sh/o, then bare `-s` (never after another `s`).
fn strip_third_singular(lower: &str) -> String {
    if let Some(stem) = lower.strip_suffix("ies") {
        if !stem.is_empty() {
            return format!("{stem}y");
        }
    }
    if let Some(stem) = lower.strip_suffix("es") {
        if stem.ends_with('s')
            || stem.ends_with('x')
            || stem.ends_with('z')
            || stem.ends_with("ch")
            || stem.ends_with("sh")
            || stem.ends_with('o')
        {
            return stem.to_string();
        }
    }
    if let Some(stem) = lower.strip_suffix('s') {
        if !stem.is_empty() && !stem.ends_with('s') {
            return stem.to_string();
        }
    }
    lower.to_string()
}

/// Rewrite a verb or auxiliary form so it agrees with a *they* subject.
///
/// Irregular table hits map directly; present third-singular forms are
/// de-inflected; everything else (past regulars, modals, participles) is
/// returned unchanged. Capitalization is preserved.
pub fn plural_agreement_form(form: &str, lemma: &str, feats: &Feats) -> String {
    plural_agreement_form_with(IrregularVerbTable::builtin(), form, lemma, feats)
}

/// [`plural_agreement_form`] with a caller-supplied irregular table.
pub fn plural_agreement_form_with(
    table: &IrregularVerbTable,
    form: &str,
    lemma: &str,
    feats: &Feats,
) -> String {
    let lower = form.to_lowercase();
    if let Some(mapped) = table.get(&lower) {
        return caps::transfer(form, mapped);
    }
    let lemma_lower = lemma.to_lowercase();
    let spelled_3sg = is_third_singular_spelling_of(&lower, &lemma_lower);
    if !feats.is_present_third_singular() && !spelled_3sg {
        return form.to_string();
    }
    if lower == lemma_lower {
        return form.to_string();
    }
    if spelled_3sg {
        return caps::transfer(form, &lemma_lower);
    }
    let stripped = strip_third_singular(&lower);
    if stripped == lower {
        form.to_string()
    } else {
        caps::transfer(form, &stripped)
    }
}

/// Singular nouns whose plural is not derivable by the spelling rules.
const IRREGULAR_NOUNS: [(&str, &str); 18] = [
    ("child", "children"),
    ("person", "people"),
    ("man", "men"),
    ("woman", "women"),
    ("foot", "feet"),
    ("tooth", "teeth"),
    ("goose", "geese"),
    ("mouse", "mice"),
    ("ox", "oxen"),
    ("life", "lives"),
    ("wife", "wives"),
    ("knife", "knives"),
    ("leaf", "leaves"),
    ("wolf", "wolves"),
    ("half", "halves"),
    ("loaf", "loaves"),
    ("thief", "thieves"),
    ("shelf", "shelves"),
];

/// Nouns unchanged in the plural.
const INVARIANT_NOUNS: [&str; 5] = ["sheep", "fish", "deer", "series", "species"];

/// `-man` compounds where the suffix is not the word *man* (`human`,
/// `roman`) pluralize regularly.
const NOT_MAN_COMPOUNDS: [&str; 8] = [
    "human", "shaman", "talisman", "ottoman", "roman", "norman", "german", "caiman",
];

/// `-o` nouns that take bare `-s` despite a preceding consonant.
const O_TAKES_S: [&str; 12] = [
    "photo", "piano", "halo", "solo", "memo", "kilo", "auto", "taco", "logo", "demo", "typo",
    "dynamo",
];

fn pluralize(lemma: &str) -> String {
    for (sg, pl) in IRREGULAR_NOUNS {
        if lemma == sg {
            return pl.to_string();
        }
    }
    if INVARIANT_NOUNS.contains(&lemma) {
        return lemma.to_string();
    }
    if let Some(stem) = lemma.strip_suffix("woman") {
        return format!("{stem}women");
    }
    if let Some(stem) = lemma.strip_suffix("man") {
        if !NOT_MAN_COMPOUNDS.contains(&lemma) {
            return format!("{stem}men");
        }
    }
    if lemma.ends_with('s')
        || lemma.ends_with('x')
        || lemma.ends_with('z')
        || lemma.ends_with("ch")
        || lemma.ends_with("sh")
    {
        return format!("{lemma}es");
    }
    if lemma.ends_with('o') && !O_TAKES_S.contains(&lemma) {
        let mut chars = lemma.chars().rev();
        chars.next();
        if chars.next().is_some_and(|c| !"aeiou".contains(c)) {
            return format!("{lemma}es");
        }
        return format!("{lemma}s");
    }
    if let Some(stem) = lemma.strip_suffix('y') {
        if stem.chars().last().is_some_and(|c| !"aeiou".contains(c)) {
            return format!("{stem}ies");
        }
    }
    format!("{lemma}s")
}

/// Reinflect a lowercase lemma to the requested number.
pub fn match_number(lemma: &str, number: Number) -> String {
    match number {
        Number::Sing => lemma.to_string(),
        Number::Plur => pluralize(lemma),
    }
}
