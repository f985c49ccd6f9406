//! Deterministic heuristic fallback annotator.
//!
//! POS tags come from closed-class lists plus a few suffix rules, heads
//! from a flat attachment scheme, and coreference from a
//! nearest-preceding-singular-noun heuristic. This exists so the toolkit
//! and its tests run with no external model; it is approximate by design
//! and real pipelines should supply annotations in the corpus format
//! instead.

use crate::corpus::{AnnotatedSentence, Feats, Token};
use crate::lexicon::Lexicon;

/// Knobs for the heuristic annotator.
#[derive(Debug, Clone)]
pub struct HeuristicConfig {
    pub enable_coref: bool,
    /// How many preceding sentences of the same document to search for an
    /// antecedent.
    pub coref_window_sentences: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            enable_coref: true,
            coref_window_sentences: 3,
        }
    }
}

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "some", "any", "no", "every", "each",
];

const POSSESSIVE_DETS: &[&str] = &["his", "her", "their", "my", "your", "its", "our"];

const AUXILIARIES: &[&str] = &[
    "is",
    "are",
    "was",
    "were",
    "am",
    "be",
    "been",
    "being",
    "has",
    "have",
    "had",
    "does",
    "do",
    "did",
    "will",
    "would",
    "can",
    "could",
    "shall",
    "should",
    "may",
    "might",
    "must",
    "isn't",
    "aren't",
    "wasn't",
    "weren't",
    "hasn't",
    "haven't",
    "doesn't",
    "don't",
    "didn't",
    "won't",
    "can't",
    "couldn't",
    "shouldn't",
];

const ADPOSITIONS: &[&str] = &[
    "in", "on", "at", "by", "with", "from", "to", "of", "for", "about", "into", "over", "under",
    "through", "between", "during", "without", "within", "against", "towards", "upon", "off",
];

const CONJUNCTIONS: &[&str] = &[
    "and", "or", "but", "nor", "because", "if", "when", "while", "although",
];

const ADVERBS: &[&str] = &[
    "not", "very", "really", "always", "never", "often", "too", "also", "now", "here", "there",
];

/// Base lemmas the suffix rules may conjugate.
const VERB_LEMMAS: &[&str] = &[
    "run", "walk", "go", "like", "love", "eat", "see", "know", "talk", "clean", "wait", "come",
    "hate", "miss", "cry", "watch", "play", "spend", "make", "take", "get", "give", "say", "tell",
    "think", "want", "need", "use", "find", "work", "call", "try", "ask", "feel", "leave", "put",
    "mean", "keep", "let", "begin", "seem", "help", "show", "hear", "turn", "start", "buy", "read",
    "write", "lose", "pay", "meet", "sit", "stand", "win", "teach", "smile", "laugh", "arrive",
    "visit", "live", "study", "learn", "speak", "travel", "cook", "drive", "swim", "dance", "sing",
    "sleep", "open", "close", "stop", "move", "plan", "hope", "wish", "believe", "remember",
    "forget", "bring", "carry", "wear", "break", "fix", "wash", "catch", "throw", "build", "draw",
    "fall", "fly", "grow", "hold", "send", "hurt", "operate", "wash",
];

/// Irregular past forms mapped back to their lemmas.
const IRREGULAR_PASTS: &[(&str, &str)] = &[
    ("came", "come"),
    ("went", "go"),
    ("saw", "see"),
    ("made", "make"),
    ("took", "take"),
    ("got", "get"),
    ("gave", "give"),
    ("said", "say"),
    ("told", "tell"),
    ("thought", "think"),
    ("found", "find"),
    ("left", "leave"),
    ("kept", "keep"),
    ("began", "begin"),
    ("heard", "hear"),
    ("bought", "buy"),
    ("wrote", "write"),
    ("lost", "lose"),
    ("paid", "pay"),
    ("met", "meet"),
    ("sat", "sit"),
    ("stood", "stand"),
    ("won", "win"),
    ("taught", "teach"),
    ("spoke", "speak"),
    ("drove", "drive"),
    ("swam", "swim"),
    ("sang", "sing"),
    ("slept", "sleep"),
    ("broke", "break"),
    ("caught", "catch"),
    ("threw", "throw"),
    ("built", "build"),
    ("drew", "draw"),
    ("fell", "fall"),
    ("flew", "fly"),
    ("grew", "grow"),
    ("held", "hold"),
    ("sent", "send"),
];

/// Person nouns compatible with any gendered pronoun.
const NEUTRAL_PERSON_NOUNS: &[&str] = &[
    "friend",
    "teacher",
    "student",
    "doctor",
    "nurse",
    "neighbor",
    "neighbour",
    "person",
    "child",
    "kid",
    "colleague",
    "classmate",
    "cousin",
    "parent",
    "baby",
    "partner",
    "boss",
    "worker",
    "driver",
    "writer",
    "singer",
    "player",
    "artist",
    "engineer",
    "lawyer",
    "manager",
    "customer",
    "guest",
    "visitor",
    "stranger",
];

fn is_punct(form: &str) -> bool {
    !form.is_empty() && form.chars().all(|c| !c.is_alphanumeric())
}

fn third_singular(lemma: &str) -> String {
    if lemma.ends_with('s')
        || lemma.ends_with('x')
        || lemma.ends_with('z')
        || lemma.ends_with("ch")
        || lemma.ends_with("sh")
        || lemma.ends_with('o')
    {
        return format!("{lemma}es");
    }
    if let Some(stem) = lemma.strip_suffix('y') {
        if stem.chars().last().is_some_and(|c| !"aeiou".contains(c)) {
            return format!("{stem}ies");
        }
    }
    format!("{lemma}s")
}

fn verb_lemma_of(lower: &str) -> Option<(String, Feats)> {
    let mut feats = Feats::new();
    if VERB_LEMMAS.contains(&lower) {
        feats.set("Tense", "Pres");
        return Some((lower.to_string(), feats));
    }
    for (past, lemma) in IRREGULAR_PASTS {
        if lower == *past {
            feats.set("Tense", "Past");
            return Some(((*lemma).to_string(), feats));
        }
    }
    for lemma in VERB_LEMMAS {
        if lower == third_singular(lemma) {
            feats
                .set("Tense", "Pres")
                .set("Person", "3")
                .set("Number", "Sing");
            return Some(((*lemma).to_string(), feats));
        }
    }
    if let Some(stem) = lower.strip_suffix("ed") {
        if VERB_LEMMAS.contains(&stem) || VERB_LEMMAS.contains(&format!("{stem}e").as_str()) {
            feats.set("Tense", "Past");
            let lemma = if VERB_LEMMAS.contains(&stem) {
                stem.to_string()
            } else {
                format!("{stem}e")
            };
            return Some((lemma, feats));
        }
    }
    None
}

fn pronoun_feats(lower: &str) -> Option<Feats> {
    let mut f = Feats::new();
    match lower {
        "he" | "she" => {
            f.set("Case", "Nom")
                .set("Number", "Sing")
                .set("Person", "3");
        }
        "him" => {
            f.set("Case", "Acc")
                .set("Number", "Sing")
                .set("Person", "3");
        }
        "they" => {
            f.set("Case", "Nom").set("Person", "3");
        }
        "them" => {
            f.set("Case", "Acc").set("Person", "3");
        }
        "hers" | "theirs" | "mine" | "yours" | "ours" => {
            f.set("Poss", "Yes").set("Person", "3");
        }
        "himself" | "herself" | "themself" | "themselves" | "itself" | "myself" | "yourself" => {
            f.set("Reflex", "Yes").set("Person", "3");
        }
        "i" | "me" => {
            f.set("Number", "Sing").set("Person", "1");
        }
        "we" | "us" => {
            f.set("Number", "Plur").set("Person", "1");
        }
        "you" => {
            f.set("Person", "2");
        }
        "it" => {
            f.set("Number", "Sing").set("Person", "3");
        }
        _ => return None,
    }
    Some(f)
}

fn aux_feats(lower: &str) -> Feats {
    let mut f = Feats::new();
    match lower {
        "is" | "has" | "does" | "isn't" | "hasn't" | "doesn't" => {
            f.set("Number", "Sing")
                .set("Person", "3")
                .set("Tense", "Pres");
        }
        "am" => {
            f.set("Number", "Sing")
                .set("Person", "1")
                .set("Tense", "Pres");
        }
        "are" | "have" | "do" | "aren't" | "haven't" | "don't" => {
            f.set("Tense", "Pres");
        }
        "was" | "wasn't" => {
            f.set("Number", "Sing").set("Tense", "Past");
        }
        "were" | "weren't" | "did" | "had" | "didn't" => {
            f.set("Tense", "Past");
        }
        _ => {}
    }
    f
}

fn looks_nominal_start(lower: &str, capitalized: bool) -> bool {
    // A possessive before any of these does not read as a determiner.
    if DETERMINERS.contains(&lower)
        || AUXILIARIES.contains(&lower)
        || ADPOSITIONS.contains(&lower)
        || CONJUNCTIONS.contains(&lower)
        || ADVERBS.contains(&lower)
        || (lower.ends_with("ly") && lower.len() > 3)
        || is_punct(lower)
        || pronoun_feats(lower).is_some()
        || verb_lemma_of(lower).is_some()
    {
        return false;
    }
    !lower.is_empty() || capitalized
}

fn noun_number_and_lemma(lower: &str) -> (String, &'static str) {
    if lower.len() > 3 && lower.ends_with('s') && !lower.ends_with("ss") {
        let mut stem = lower[..lower.len() - 1].to_string();
        if let Some(s) = lower.strip_suffix("ies") {
            stem = format!("{s}y");
        } else if let Some(s) = lower.strip_suffix("es") {
            if s.ends_with("sh") || s.ends_with("ch") || s.ends_with('x') || s.ends_with('o') {
                stem = s.to_string();
            }
        }
        (stem, "Plur")
    } else {
        (lower.to_string(), "Sing")
    }
}

/// Assign POS tags, features, a flat dependency tree, and (optionally)
/// heuristic within-sentence coreference to a pre-tokenized sentence.
pub fn heuristic_annotate(tokens: &[String], config: &HeuristicConfig) -> AnnotatedSentence {
    let mut sentences = annotate_document(std::slice::from_ref(&tokens.to_vec()), config);
    sentences.remove(0)
}

/// Annotate a document sentence by sentence; coreference cluster ids are
/// shared across sentences, with antecedents searched up to
/// `coref_window_sentences` back.
pub fn annotate_document(
    sentences: &[Vec<String>],
    config: &HeuristicConfig,
) -> Vec<AnnotatedSentence> {
    let mut annotated: Vec<AnnotatedSentence> = sentences.iter().map(|t| tag_sentence(t)).collect();
    if config.enable_coref {
        heuristic_coref(&mut annotated, config);
    }
    annotated
}

/// Run only the coreference pass over sentences that already carry POS and
/// dependency annotations, assigning cluster ids past the largest one
/// already in use.
pub fn heuristic_coref(sentences: &mut [AnnotatedSentence], config: &HeuristicConfig) {
    let mut next_cluster: u32 = sentences
        .iter()
        .flat_map(|s| s.tokens.iter().filter_map(|t| t.coref))
        .max()
        .map_or(1, |c| c + 1);
    for idx in 0..sentences.len() {
        assign_coref_at(sentences, idx, config, &mut next_cluster);
    }
}

fn tag_sentence(tokens: &[String]) -> AnnotatedSentence {
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for (i, form) in tokens.iter().enumerate() {
        let lower = form.to_lowercase();
        let capitalized = form.chars().next().is_some_and(|c| c.is_uppercase());
        let mut token = Token::new(i + 1, form);
        token.lemma = lower.clone();

        if is_punct(form) {
            token.upos = "PUNCT".into();
        } else if lower.chars().all(|c| c.is_ascii_digit()) {
            token.upos = "NUM".into();
        } else if POSSESSIVE_DETS.contains(&lower.as_str()) {
            let next_lower = tokens.get(i + 1).map(|t| t.to_lowercase());
            let next_cap = tokens
                .get(i + 1)
                .is_some_and(|t| t.chars().next().is_some_and(|c| c.is_uppercase()));
            let determiner = match next_lower {
                Some(nl) => looks_nominal_start(&nl, next_cap),
                None => false,
            };
            if determiner {
                token.upos = "DET".into();
                token.feats.set("Poss", "Yes").set("Person", "3");
            } else if lower == "her" {
                token.upos = "PRON".into();
                token
                    .feats
                    .set("Case", "Acc")
                    .set("Number", "Sing")
                    .set("Person", "3");
            } else {
                token.upos = "PRON".into();
                token.feats.set("Poss", "Yes").set("Person", "3");
            }
            token.lemma = lower.clone();
        } else if let Some(feats) = pronoun_feats(&lower) {
            token.upos = "PRON".into();
            token.feats = feats;
        } else if AUXILIARIES.contains(&lower.as_str()) {
            token.upos = "AUX".into();
            token.feats = aux_feats(&lower);
            token.lemma = match lower.as_str() {
                "is" | "are" | "was" | "were" | "am" | "been" | "being" => "be".into(),
                "has" | "have" | "had" => "have".into(),
                "does" | "do" | "did" => "do".into(),
                other => other.into(),
            };
        } else if DETERMINERS.contains(&lower.as_str()) {
            token.upos = "DET".into();
        } else if ADPOSITIONS.contains(&lower.as_str()) {
            token.upos = "ADP".into();
        } else if CONJUNCTIONS.contains(&lower.as_str()) {
            token.upos = "CCONJ".into();
        } else if ADVERBS.contains(&lower.as_str()) || (lower.ends_with("ly") && lower.len() > 3) {
            token.upos = "ADV".into();
        } else if let Some((lemma, feats)) = verb_lemma_of(&lower) {
            token.upos = "VERB".into();
            token.lemma = lemma;
            token.feats = feats;
        } else if capitalized {
            // Capitalized unknowns read as names wherever they stand.
            token.upos = "PROPN".into();
            token.feats.set("Number", "Sing");
        } else {
            token.upos = "NOUN".into();
            let (lemma, number) = noun_number_and_lemma(&lower);
            token.lemma = lemma;
            token.feats.set("Number", number);
        }
        out.push(token);
    }

    attach_heads(&mut out);
    AnnotatedSentence::new("", out)
}

fn attach_heads(tokens: &mut [Token]) {
    if tokens.is_empty() {
        return;
    }
    let root = tokens
        .iter()
        .position(|t| t.upos == "VERB")
        .or_else(|| tokens.iter().position(|t| t.upos == "AUX"))
        .or_else(|| tokens.iter().position(|t| t.is_nominal()))
        .unwrap_or(0);
    let root_index = root + 1;

    let upos: Vec<String> = tokens.iter().map(|t| t.upos.clone()).collect();
    let poss: Vec<bool> = tokens.iter().map(|t| t.feats.is_possessive()).collect();
    let n = tokens.len();

    let nearest_following = |from: usize, pred: &dyn Fn(usize) -> bool| -> Option<usize> {
        (from + 1..n).find(|&k| pred(k))
    };
    let nearest_preceding = |from: usize, pred: &dyn Fn(usize) -> bool| -> Option<usize> {
        (0..from).rev().find(|&k| pred(k))
    };
    let is_verbal = |k: usize| upos[k] == "VERB" || upos[k] == "AUX";
    let is_nominal = |k: usize| upos[k] == "NOUN" || upos[k] == "PROPN";

    for i in 0..n {
        if i == root {
            tokens[i].head = 0;
            tokens[i].deprel = "root".into();
            continue;
        }
        let (head, deprel): (usize, &str) = match upos[i].as_str() {
            "PRON" if !poss[i] => {
                if let Some(v) = nearest_following(i, &is_verbal) {
                    (v + 1, "nsubj")
                } else if let Some(v) = nearest_preceding(i, &is_verbal) {
                    (v + 1, "obj")
                } else {
                    (root_index, "dep")
                }
            }
            "DET" | "PRON" => {
                // possessive pronouns and determiners lean on the next
                // nominal
                if let Some(nom) = nearest_following(i, &is_nominal) {
                    (nom + 1, if poss[i] { "nmod:poss" } else { "det" })
                } else {
                    (root_index, if poss[i] { "nmod:poss" } else { "det" })
                }
            }
            "AUX" => {
                if let Some(v) = nearest_following(i, &|k| upos[k] == "VERB") {
                    (v + 1, "aux")
                } else {
                    (root_index, "cop")
                }
            }
            "ADJ" => {
                if let Some(nom) = nearest_following(i, &is_nominal) {
                    (nom + 1, "amod")
                } else {
                    (root_index, "dep")
                }
            }
            "NOUN" | "PROPN" => {
                if i < root && nearest_preceding(i, &is_nominal).is_none() {
                    (root_index, "nsubj")
                } else {
                    (root_index, "dep")
                }
            }
            "PUNCT" => (root_index, "punct"),
            "ADV" => (root_index, "advmod"),
            "ADP" => (root_index, "case"),
            "CCONJ" => (root_index, "cc"),
            _ => (root_index, "dep"),
        };
        tokens[i].head = if head == i + 1 { root_index } else { head };
        tokens[i].deprel = deprel.into();
    }
}

fn compatible_antecedent(pronoun_lower: &str, candidate: &Token, lexicon: &Lexicon) -> bool {
    if !candidate.is_nominal() || candidate.feats.number() != Some(crate::corpus::Number::Sing) {
        return false;
    }
    if candidate.is_proper_noun() {
        return true;
    }
    let lemma = candidate.lemma.to_lowercase();
    let neutral = NEUTRAL_PERSON_NOUNS.contains(&lemma.as_str());
    match pronoun_lower {
        "he" | "him" | "his" | "himself" => {
            neutral
                || matches!(
                    lexicon.nouns.lookup(&lemma),
                    Some((_, crate::lexicon::Gender::Masc))
                )
        }
        "she" | "her" | "hers" | "herself" => {
            neutral
                || matches!(
                    lexicon.nouns.lookup(&lemma),
                    Some((_, crate::lexicon::Gender::Fem))
                )
        }
        _ => true, // they-forms take any singular noun
    }
}

fn is_third_person_pronoun(token: &Token) -> bool {
    let lower = token.form.to_lowercase();
    matches!(
        lower.as_str(),
        "he" | "him"
            | "his"
            | "himself"
            | "she"
            | "her"
            | "hers"
            | "herself"
            | "they"
            | "them"
            | "their"
            | "theirs"
            | "themself"
            | "themselves"
    ) && (token.upos == "PRON" || token.upos == "DET")
}

fn assign_coref_at(
    sentences: &mut [AnnotatedSentence],
    idx: usize,
    config: &HeuristicConfig,
    next_cluster: &mut u32,
) {
    let lexicon = Lexicon::builtin();
    for i in 0..sentences[idx].tokens.len() {
        if !is_third_person_pronoun(&sentences[idx].tokens[i])
            || sentences[idx].tokens[i].coref.is_some()
        {
            continue;
        }
        let lower = sentences[idx].tokens[i].form.to_lowercase();
        // Search backwards in the current sentence first, then earlier
        // sentences within the window.
        let mut found: Option<(usize, usize)> = None;
        for k in (0..i).rev() {
            if compatible_antecedent(&lower, &sentences[idx].tokens[k], lexicon) {
                found = Some((idx, k));
                break;
            }
        }
        if found.is_none() {
            let lo = idx.saturating_sub(config.coref_window_sentences.saturating_sub(1));
            'outer: for s in (lo..idx).rev() {
                for k in (0..sentences[s].tokens.len()).rev() {
                    if compatible_antecedent(&lower, &sentences[s].tokens[k], lexicon) {
                        found = Some((s, k));
                        break 'outer;
                    }
                }
            }
        }
        let Some((s, k)) = found else {
            // Gendered pronouns with no antecedent get a singleton cluster:
            // it marks the coreference layer as present without licensing
            // any swap (a singleton has no nominal evidence).
            if matches!(
                lower.as_str(),
                "he" | "him" | "his" | "himself" | "she" | "her" | "hers" | "herself"
            ) {
                sentences[idx].tokens[i].coref = Some(*next_cluster);
                *next_cluster += 1;
            }
            continue;
        };
        let cluster = match sentences[s].tokens[k].coref {
            Some(c) => c,
            None => {
                let c = *next_cluster;
                *next_cluster += 1;
                sentences[s].tokens[k].coref = Some(c);
                c
            }
        };
        sentences[idx].tokens[i].coref = Some(cluster);
    }
}
