//! Deterministic corpus builders shared by the integration test suites.
//!
//! Everything is index-driven (no RNG), so generated fixtures are stable
//! across runs and platforms.
//!
//! Each test binary includes this module separately and uses a subset of
//! it.
#![allow(dead_code)]

use gecda_core::corpus::{AnnotatedSentence, Feats, ParallelPair, Token};

pub fn feats(pairs: &[(&str, &str)]) -> Feats {
    let mut f = Feats::new();
    for (k, v) in pairs {
        f.set(k, v);
    }
    f
}

pub fn tok(
    index: usize,
    form: &str,
    lemma: &str,
    upos: &str,
    head: usize,
    deprel: &str,
    fs: &[(&str, &str)],
) -> Token {
    let mut t = Token::new(index, form);
    t.lemma = lemma.to_string();
    t.upos = upos.to_string();
    t.head = head;
    t.deprel = deprel.to_string();
    t.feats = feats(fs);
    t
}

/// (3sg, base, past, lemma)
const VERBS: &[(&str, &str, &str, &str)] = &[
    ("walks", "walk", "walked", "walk"),
    ("runs", "run", "ran", "run"),
    ("goes", "go", "went", "go"),
    ("likes", "like", "liked", "like"),
    ("watches", "watch", "watched", "watch"),
    ("misses", "miss", "missed", "miss"),
    ("cries", "cry", "cried", "cry"),
    ("plays", "play", "played", "play"),
    ("spends", "spend", "spent", "spend"),
    ("teaches", "teach", "taught", "teach"),
];

const PLAIN_NOUNS: &[&str] = &[
    "book", "key", "dog", "cat", "house", "letter", "song", "garden", "picture", "car",
];

/// Masculine-side lemmas from the built-in noun table.
const GENDERED_NOUNS: &[&str] = &[
    "actor", "king", "waiter", "husband", "brother", "uncle", "prince", "hero", "lord", "monk",
];

/// Mapped names from the built-in name table (masculine column).
const NAMES: &[&str] = &[
    "James", "John", "Robert", "Michael", "William", "David", "Richard", "Joseph", "Thomas",
    "Charles",
];

/// Person nouns used as singular antecedents.
const PERSON_NOUNS: &[&str] = &[
    "student", "teacher", "doctor", "friend", "neighbor", "writer", "singer", "player", "artist",
    "lawyer",
];

struct Pronouns {
    nom: &'static str,
    acc: &'static str,
    poss: &'static str,
    poss_ind: &'static str,
    refl: &'static str,
    lemma: &'static str,
}

const MASC: Pronouns = Pronouns {
    nom: "he",
    acc: "him",
    poss: "his",
    poss_ind: "his",
    refl: "himself",
    lemma: "he",
};
const FEM: Pronouns = Pronouns {
    nom: "she",
    acc: "her",
    poss: "her",
    poss_ind: "hers",
    refl: "herself",
    lemma: "she",
};

fn title(word: &str) -> String {
    let mut c = word.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn punct(index: usize, head: usize) -> Token {
    tok(index, ".", ".", "PUNCT", head, "punct", &[])
}

/// Fully annotated sentences containing gendered pronouns (all case
/// slots), gendered common nouns (both numbers), mapped names, and some
/// sentences with no gendered content at all.
pub fn fm_corpus(n: usize) -> Vec<AnnotatedSentence> {
    (0..n)
        .map(|i| {
            let v = VERBS[i % VERBS.len()];
            let noun = PLAIN_NOUNS[i % PLAIN_NOUNS.len()];
            let gnoun = GENDERED_NOUNS[i % GENDERED_NOUNS.len()];
            let name = NAMES[i % NAMES.len()];
            let name2 = NAMES[(i + 3) % NAMES.len()];
            let (a, b) = if i % 2 == 0 { (MASC, FEM) } else { (FEM, MASC) };
            let id = format!("fm-{i}");
            let tokens = match i % 7 {
                0 => vec![
                    tok(
                        1,
                        &title(a.nom),
                        a.lemma,
                        "PRON",
                        2,
                        "nsubj",
                        &[("Case", "Nom"), ("Number", "Sing"), ("Person", "3")],
                    ),
                    tok(2, "gave", "give", "VERB", 0, "root", &[("Tense", "Past")]),
                    tok(
                        3,
                        b.acc,
                        b.lemma,
                        "PRON",
                        2,
                        "iobj",
                        &[("Case", "Acc"), ("Number", "Sing"), ("Person", "3")],
                    ),
                    tok(
                        4,
                        a.poss,
                        a.lemma,
                        "PRON",
                        5,
                        "nmod:poss",
                        &[("Number", "Sing"), ("Person", "3"), ("Poss", "Yes")],
                    ),
                    tok(5, noun, noun, "NOUN", 2, "obj", &[("Number", "Sing")]),
                    punct(6, 2),
                ],
                1 => vec![
                    tok(1, "The", "the", "DET", 2, "det", &[]),
                    tok(2, gnoun, gnoun, "NOUN", 3, "nsubj", &[("Number", "Sing")]),
                    tok(3, v.2, v.3, "VERB", 0, "root", &[("Tense", "Past")]),
                    punct(4, 3),
                ],
                2 => vec![
                    tok(
                        1,
                        name,
                        &name.to_lowercase(),
                        "PROPN",
                        2,
                        "nsubj",
                        &[("Number", "Sing")],
                    ),
                    tok(2, "met", "meet", "VERB", 0, "root", &[("Tense", "Past")]),
                    tok(
                        3,
                        name2,
                        &name2.to_lowercase(),
                        "PROPN",
                        2,
                        "obj",
                        &[("Number", "Sing")],
                    ),
                    punct(4, 2),
                ],
                3 => vec![
                    tok(1, "The", "the", "DET", 2, "det", &[]),
                    tok(2, noun, noun, "NOUN", 4, "nsubj", &[("Number", "Sing")]),
                    tok(
                        3,
                        "is",
                        "be",
                        "AUX",
                        4,
                        "cop",
                        &[("Number", "Sing"), ("Person", "3"), ("Tense", "Pres")],
                    ),
                    tok(
                        4,
                        a.poss_ind,
                        a.lemma,
                        "PRON",
                        0,
                        "root",
                        &[("Person", "3"), ("Poss", "Yes")],
                    ),
                    punct(5, 4),
                ],
                4 => vec![
                    tok(
                        1,
                        &title(a.nom),
                        a.lemma,
                        "PRON",
                        2,
                        "nsubj",
                        &[("Case", "Nom"), ("Number", "Sing"), ("Person", "3")],
                    ),
                    tok(
                        2,
                        v.0,
                        v.3,
                        "VERB",
                        0,
                        "root",
                        &[("Number", "Sing"), ("Person", "3"), ("Tense", "Pres")],
                    ),
                    tok(
                        3,
                        a.refl,
                        a.lemma,
                        "PRON",
                        2,
                        "obj",
                        &[("Person", "3"), ("Reflex", "Yes")],
                    ),
                    punct(4, 2),
                ],
                5 => vec![
                    tok(1, "The", "the", "DET", 2, "det", &[]),
                    tok(
                        2,
                        &gecda_core::inflect::match_number(gnoun, gecda_core::corpus::Number::Plur),
                        gnoun,
                        "NOUN",
                        3,
                        "nsubj",
                        &[("Number", "Plur")],
                    ),
                    tok(3, v.2, v.3, "VERB", 0, "root", &[("Tense", "Past")]),
                    punct(4, 3),
                ],
                _ => vec![
                    tok(1, "A", "a", "DET", 2, "det", &[]),
                    tok(2, noun, noun, "NOUN", 3, "nsubj", &[("Number", "Sing")]),
                    tok(
                        3,
                        v.0,
                        v.3,
                        "VERB",
                        0,
                        "root",
                        &[("Number", "Sing"), ("Person", "3"), ("Tense", "Pres")],
                    ),
                    punct(4, 3),
                ],
            };
            let s = AnnotatedSentence::new(&id, tokens);
            s.validate().expect("generated sentence is a valid tree");
            s
        })
        .collect()
}

/// Sentences with coreference annotations: evidenced clusters (singular
/// nominal mentions or singular possessums), clusters without evidence,
/// and agreement targets in both retargetable and inert tenses.
pub fn st_corpus(n: usize) -> Vec<AnnotatedSentence> {
    (0..n)
        .map(|i| {
            let v = VERBS[i % VERBS.len()];
            let noun = PLAIN_NOUNS[i % PLAIN_NOUNS.len()];
            let person = PERSON_NOUNS[i % PERSON_NOUNS.len()];
            let name = NAMES[i % NAMES.len()];
            let p = if i % 2 == 0 { MASC } else { FEM };
            let id = format!("st-{i}");
            let tokens = match i % 5 {
                0 => vec![
                    tok(1, "The", "the", "DET", 2, "det", &[]),
                    tok(2, person, person, "NOUN", 3, "nsubj", &[("Number", "Sing")]),
                    tok(3, "said", "say", "VERB", 0, "root", &[("Tense", "Past")]),
                    tok(
                        4,
                        p.nom,
                        p.lemma,
                        "PRON",
                        5,
                        "nsubj",
                        &[("Case", "Nom"), ("Number", "Sing"), ("Person", "3")],
                    ),
                    tok(
                        5,
                        v.0,
                        v.3,
                        "VERB",
                        3,
                        "ccomp",
                        &[("Number", "Sing"), ("Person", "3"), ("Tense", "Pres")],
                    ),
                    tok(6, "a", "a", "DET", 7, "det", &[]),
                    tok(7, noun, noun, "NOUN", 5, "obj", &[("Number", "Sing")]),
                    punct(8, 3),
                ],
                1 => vec![
                    tok(
                        1,
                        name,
                        &name.to_lowercase(),
                        "PROPN",
                        2,
                        "nsubj",
                        &[("Number", "Sing")],
                    ),
                    tok(2, "lost", "lose", "VERB", 0, "root", &[("Tense", "Past")]),
                    tok(
                        3,
                        p.poss,
                        p.lemma,
                        "DET",
                        4,
                        "nmod:poss",
                        &[("Person", "3"), ("Poss", "Yes")],
                    ),
                    tok(4, noun, noun, "NOUN", 2, "obj", &[("Number", "Sing")]),
                    punct(5, 2),
                ],
                2 => vec![
                    tok(
                        1,
                        &title(p.nom),
                        p.lemma,
                        "PRON",
                        3,
                        "nsubj",
                        &[("Case", "Nom"), ("Number", "Sing"), ("Person", "3")],
                    ),
                    tok(
                        2,
                        "is",
                        "be",
                        "AUX",
                        3,
                        "cop",
                        &[("Number", "Sing"), ("Person", "3"), ("Tense", "Pres")],
                    ),
                    tok(3, "happy", "happy", "ADJ", 0, "root", &[]),
                    tok(4, "because", "because", "SCONJ", 8, "mark", &[]),
                    tok(
                        5,
                        p.poss,
                        p.lemma,
                        "DET",
                        6,
                        "nmod:poss",
                        &[("Person", "3"), ("Poss", "Yes")],
                    ),
                    tok(6, noun, noun, "NOUN", 8, "nsubj", &[("Number", "Sing")]),
                    tok(
                        7,
                        "is",
                        "be",
                        "AUX",
                        8,
                        "cop",
                        &[("Number", "Sing"), ("Person", "3"), ("Tense", "Pres")],
                    ),
                    tok(8, "old", "old", "ADJ", 3, "advcl", &[]),
                    punct(9, 3),
                ],
                3 => vec![
                    tok(
                        1,
                        &title(p.nom),
                        p.lemma,
                        "PRON",
                        2,
                        "nsubj",
                        &[("Case", "Nom"), ("Number", "Sing"), ("Person", "3")],
                    ),
                    tok(2, v.2, v.3, "VERB", 0, "root", &[("Tense", "Past")]),
                    punct(3, 2),
                ],
                _ => vec![
                    tok(1, "The", "the", "DET", 2, "det", &[]),
                    tok(2, person, person, "NOUN", 3, "nsubj", &[("Number", "Sing")]),
                    tok(
                        3,
                        "thinks",
                        "think",
                        "VERB",
                        0,
                        "root",
                        &[("Number", "Sing"), ("Person", "3"), ("Tense", "Pres")],
                    ),
                    tok(
                        4,
                        p.nom,
                        p.lemma,
                        "PRON",
                        6,
                        "nsubj",
                        &[("Case", "Nom"), ("Number", "Sing"), ("Person", "3")],
                    ),
                    tok(
                        5,
                        "is",
                        "be",
                        "AUX",
                        6,
                        "cop",
                        &[("Number", "Sing"), ("Person", "3"), ("Tense", "Pres")],
                    ),
                    tok(6, "right", "right", "ADJ", 3, "ccomp", &[]),
                    punct(7, 3),
                ],
            };
            let mut s = AnnotatedSentence::new(&id, tokens);
            // Cluster layout per template: evidenced clusters for 0/1/2/4,
            // an evidence-free pronoun cluster for 3.
            match i % 5 {
                0 => {
                    s.tokens[1].coref = Some(1);
                    s.tokens[3].coref = Some(1);
                }
                1 => {
                    s.tokens[0].coref = Some(1);
                    s.tokens[2].coref = Some(1);
                }
                2 => {
                    s.tokens[0].coref = Some(1);
                    s.tokens[4].coref = Some(1);
                }
                3 => {
                    s.tokens[0].coref = Some(1);
                }
                _ => {
                    s.tokens[1].coref = Some(1);
                    s.tokens[3].coref = Some(1);
                }
            }
            s.validate().expect("generated sentence is a valid tree");
            s
        })
        .collect()
}

/// Which error a parallel pair's source side carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectedError {
    None,
    /// 3sg verb reduced to its base form.
    Sva,
    /// A non-gendered noun pluralized.
    NounNum,
    /// Sentence-initial token lowercased.
    Orth,
    /// A token dropped from the source (forces a length-mismatch discard).
    MissingToken,
}

impl InjectedError {
    pub fn expects_discard(self) -> bool {
        matches!(self, InjectedError::MissingToken)
    }
}

fn inject(target: &AnnotatedSentence, error: InjectedError) -> AnnotatedSentence {
    let mut source = target.clone();
    source.id = format!("{}-src", target.id);
    match error {
        InjectedError::None => {}
        InjectedError::Sva => {
            if let Some(t) = source
                .tokens
                .iter_mut()
                .find(|t| t.upos == "VERB" && t.feats.is_present_third_singular())
            {
                t.form = t.lemma.clone();
                t.feats = Feats::new();
            }
        }
        InjectedError::NounNum => {
            if let Some(t) = source.tokens.iter_mut().find(|t| {
                t.upos == "NOUN"
                    && t.feats.number() == Some(gecda_core::corpus::Number::Sing)
                    && gecda_core::lexicon::Lexicon::builtin()
                        .nouns
                        .lookup(&t.lemma)
                        .is_none()
            }) {
                t.form =
                    gecda_core::inflect::match_number(&t.lemma, gecda_core::corpus::Number::Plur);
                t.feats = feats(&[("Number", "Plur")]);
            }
        }
        InjectedError::Orth => {
            let t = &mut source.tokens[0];
            t.form = t.form.to_lowercase();
        }
        InjectedError::MissingToken => {
            // Drop the first determiner, or the final punctuation mark when
            // the sentence has none.
            let at = source
                .tokens
                .iter()
                .position(|t| t.upos == "DET" && t.head != 0)
                .unwrap_or(source.tokens.len() - 1);
            let removed_index = source.tokens[at].index;
            source.tokens.remove(at);
            for t in source.tokens.iter_mut() {
                if t.index > removed_index {
                    t.index -= 1;
                }
                if t.head > removed_index {
                    t.head -= 1;
                } else if t.head == removed_index {
                    t.head = 0;
                }
            }
            // Re-point stray roots created by the removal.
            let roots: Vec<usize> = source
                .tokens
                .iter()
                .filter(|t| t.head == 0)
                .map(|t| t.index)
                .collect();
            if roots.len() > 1 {
                let keep = roots[0];
                for t in source.tokens.iter_mut() {
                    if t.head == 0 && t.index != keep {
                        t.head = keep;
                    }
                }
            }
        }
    }
    source
}

const ERROR_CYCLE: &[InjectedError] = &[
    InjectedError::None,
    InjectedError::Sva,
    InjectedError::NounNum,
    InjectedError::Orth,
    InjectedError::MissingToken,
];

/// Parallel corpus for masculine/feminine augmentation: targets from
/// [`fm_corpus`], sources with a cycling injected error.
pub fn fm_parallel_corpus(n: usize) -> Vec<ParallelPair> {
    fm_corpus(n)
        .into_iter()
        .enumerate()
        .map(|(i, target)| {
            let error = ERROR_CYCLE[i % ERROR_CYCLE.len()];
            ParallelPair {
                id: format!("pair-{i}"),
                doc_id: None,
                source: inject(&target, error),
                target,
            }
        })
        .collect()
}

/// Expected error kind for pair `i` of [`fm_parallel_corpus`] /
/// [`st_parallel_corpus`].
pub fn injected_error(i: usize) -> InjectedError {
    ERROR_CYCLE[i % ERROR_CYCLE.len()]
}

/// Parallel corpus for singular-*they* augmentation: targets from
/// [`st_corpus`]. SVA injection is skipped when it would touch a verb that
/// agreement retargeting rewrites (such pairs are discarded by design, so
/// they would only test the discard path twice).
pub fn st_parallel_corpus(n: usize) -> Vec<ParallelPair> {
    st_corpus(n)
        .into_iter()
        .enumerate()
        .map(|(i, target)| {
            let mut error = ERROR_CYCLE[i % ERROR_CYCLE.len()];
            // Templates 0 and 4 retarget their pronoun-governed verb; an
            // SVA error there collides with the retargeting.
            if error == InjectedError::Sva && matches!(i % 5, 0 | 2 | 4) {
                error = InjectedError::NounNum;
            }
            ParallelPair {
                id: format!("st-pair-{i}"),
                doc_id: None,
                source: inject(&target, error),
                target,
            }
        })
        .collect()
}
