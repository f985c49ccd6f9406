//! Data model and parsers/emitters for annotated sentences, parallel pairs,
//! and the M2 correction format.
//!
//! Text is assumed pre-tokenized: a token is whatever sits in column 1 of a
//! CoNLL-U-style line or between spaces on an M2 `S` line. Parsing never
//! reorders sentences, tokens, or edits, and parsed structures are immutable
//! after construction.

mod conllu;
mod m2;

pub use conllu::{emit_conllu, emit_parallel, parse_conllu, parse_parallel};
pub use m2::{emit_m2, parse_m2};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Errors raised by the corpus parsers.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: {what} is not an integer: {value:?}")]
    NotAnInteger {
        line: usize,
        what: &'static str,
        value: String,
    },
    #[error("line {line}: token index {found} out of order (expected {expected})")]
    TokenIndex {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error(
        "sentence {id:?}: head {head} of token {index} out of range (sentence has {len} tokens)"
    )]
    HeadOutOfRange {
        id: String,
        index: usize,
        head: usize,
        len: usize,
    },
    #[error("sentence {id:?}: token {index} is its own head")]
    SelfHead { id: String, index: usize },
    #[error("sentence {id:?}: dependency graph is not a tree ({detail})")]
    NotATree { id: String, detail: String },
    #[error("unpaired: {0}")]
    UnpairedSide(String),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: edit line before any S line")]
    EditBeforeSentence { line: usize },
    #[error("line {line}: edit span {start}..{end} is invalid ({msg})")]
    BadSpan {
        line: usize,
        start: i64,
        end: i64,
        msg: String,
    },
}

/// Universal feature map (`Number=Sing|Case=Nom|...`), keys sorted for
/// deterministic emission. Unknown keys pass through untouched.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Feats(BTreeMap<String, String>);

impl Feats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: &str) -> &mut Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn number(&self) -> Option<Number> {
        match self.get("Number") {
            Some("Sing") => Some(Number::Sing),
            Some("Plur") => Some(Number::Plur),
            _ => None,
        }
    }

    pub fn is_possessive(&self) -> bool {
        self.get("Poss") == Some("Yes")
    }

    pub fn is_reflexive(&self) -> bool {
        self.get("Reflex") == Some("Yes")
    }

    pub fn case(&self) -> Option<&str> {
        self.get("Case")
    }

    pub fn person(&self) -> Option<&str> {
        self.get("Person")
    }

    pub fn tense(&self) -> Option<&str> {
        self.get("Tense")
    }

    /// Present tense, third person, singular — the agreement cell that must
    /// be retargeted when the subject becomes *they*.
    pub fn is_present_third_singular(&self) -> bool {
        self.tense() == Some("Pres")
            && self.person() == Some("3")
            && self.number() == Some(Number::Sing)
    }
}

/// Grammatical number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Number {
    Sing,
    Plur,
}

/// One token of an annotated sentence.
///
/// `index` is 1-based; `head` points at another token's index, with 0
/// meaning the syntactic root. `xpos` and `deps` are passthrough columns kept
/// only so emitted files stay faithful to their inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: Feats,
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    /// Coreference cluster id, carried in the MISC column as `Coref=<int>`.
    pub coref: Option<u32>,
    /// MISC entries other than `Coref=`, preserved verbatim.
    pub misc_extra: Vec<String>,
}

impl Token {
    /// A bare token with the given surface form; everything else defaulted.
    pub fn new(index: usize, form: &str) -> Self {
        Token {
            index,
            form: form.to_string(),
            lemma: form.to_lowercase(),
            upos: "_".to_string(),
            xpos: "_".to_string(),
            feats: Feats::new(),
            head: 0,
            deprel: "_".to_string(),
            deps: "_".to_string(),
            coref: None,
            misc_extra: Vec::new(),
        }
    }

    pub fn is_noun(&self) -> bool {
        self.upos == "NOUN"
    }

    pub fn is_proper_noun(&self) -> bool {
        self.upos == "PROPN"
    }

    pub fn is_nominal(&self) -> bool {
        self.is_noun() || self.is_proper_noun()
    }

    pub fn is_verb_or_aux(&self) -> bool {
        self.upos == "VERB" || self.upos == "AUX"
    }
}

/// A sentence with POS/feature/dependency/coreference annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub id: String,
    /// Document this sentence belongs to, when the input groups sentences
    /// under a `# doc_id` comment. Coreference cluster ids are scoped to the
    /// document.
    pub doc_id: Option<String>,
    pub tokens: Vec<Token>,
}

impl AnnotatedSentence {
    pub fn new(id: &str, tokens: Vec<Token>) -> Self {
        AnnotatedSentence {
            id: id.to_string(),
            doc_id: None,
            tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> Option<&Token> {
        if index == 0 {
            return None;
        }
        self.tokens.get(index - 1)
    }

    pub fn forms(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.form.clone()).collect()
    }

    pub fn text(&self) -> String {
        let forms: Vec<&str> = self.tokens.iter().map(|t| t.form.as_str()).collect();
        forms.join(" ")
    }

    /// True when at least one token carries a coreference cluster id.
    pub fn has_coref(&self) -> bool {
        self.tokens.iter().any(|t| t.coref.is_some())
    }

    /// All coreference cluster ids used in this sentence, in token order,
    /// deduplicated.
    pub fn cluster_ids(&self) -> Vec<u32> {
        let mut seen = Vec::new();
        for t in &self.tokens {
            if let Some(c) = t.coref {
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
        }
        seen
    }

    /// Check head ranges, self-heads, and that the dependency graph is a
    /// tree (exactly one root, no cycles).
    pub fn validate(&self) -> Result<(), ParseError> {
        let len = self.tokens.len();
        let mut roots = 0usize;
        for tok in &self.tokens {
            if tok.head > len {
                return Err(ParseError::HeadOutOfRange {
                    id: self.id.clone(),
                    index: tok.index,
                    head: tok.head,
                    len,
                });
            }
            if tok.head == tok.index {
                return Err(ParseError::SelfHead {
                    id: self.id.clone(),
                    index: tok.index,
                });
            }
            if tok.head == 0 {
                roots += 1;
            }
        }
        if len > 0 && roots != 1 {
            return Err(ParseError::NotATree {
                id: self.id.clone(),
                detail: format!("{roots} roots"),
            });
        }
        // Cycle check: every token must reach the root in <= len steps.
        for tok in &self.tokens {
            let mut cur = tok.head;
            let mut steps = 0usize;
            while cur != 0 {
                cur = self.tokens[cur - 1].head;
                steps += 1;
                if steps > len {
                    return Err(ParseError::NotATree {
                        id: self.id.clone(),
                        detail: format!("cycle through token {}", tok.index),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A (possibly ungrammatical) source sentence paired with its corrected
/// target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelPair {
    pub id: String,
    pub doc_id: Option<String>,
    pub source: AnnotatedSentence,
    pub target: AnnotatedSentence,
}

/// Edit type in the M/R/U scheme used by M2 files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditKind {
    /// Missing token(s): something must be inserted (`start == end`).
    Missing,
    /// Replacement: a source span is rewritten.
    Replacement,
    /// Unnecessary token(s): a source span is deleted.
    Unnecessary,
    /// No correction for this sentence.
    Noop,
}

impl EditKind {
    pub fn letter(&self) -> &'static str {
        match self {
            EditKind::Missing => "M",
            EditKind::Replacement => "R",
            EditKind::Unnecessary => "U",
            EditKind::Noop => "noop",
        }
    }
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// A span-based correction edit, as carried on an M2 `A` line.
///
/// `start..end` are token offsets into the original sentence; `start == end`
/// marks an insertion point. A `Noop` edit stores `0..0` internally and is
/// written back as `-1 -1` on the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub start: usize,
    pub end: usize,
    pub kind: EditKind,
    /// Error category carried after the M/R/U letter in the wire type
    /// (`R:VERB:SVA` → `VERB:SVA`). Empty when the wire type was bare.
    pub category: String,
    /// Space-joined correction tokens; empty for deletions, `-NONE-` for
    /// noop edits.
    pub correction: String,
    pub required: String,
    pub comment: String,
    pub annotator: u32,
}

impl Edit {
    pub fn new(start: usize, end: usize, kind: EditKind, category: &str, correction: &str) -> Self {
        Edit {
            start,
            end,
            kind,
            category: category.to_string(),
            correction: correction.to_string(),
            required: "REQUIRED".to_string(),
            comment: "-NONE-".to_string(),
            annotator: 0,
        }
    }

    pub fn noop() -> Self {
        Edit::new(0, 0, EditKind::Noop, "", "-NONE-")
    }

    pub fn is_noop(&self) -> bool {
        self.kind == EditKind::Noop
    }

    /// Wire form of the type field (`R:VERB:SVA`, `M`, `noop`, ...).
    pub fn wire_type(&self) -> String {
        if self.kind == EditKind::Noop {
            "noop".to_string()
        } else if self.category.is_empty() {
            self.kind.letter().to_string()
        } else {
            format!("{}:{}", self.kind.letter(), self.category)
        }
    }

    /// The `(start, end, correction)` triple used for exact-match scoring.
    pub fn match_key(&self) -> (usize, usize, &str) {
        (self.start, self.end, self.correction.as_str())
    }
}

/// One sentence of an M2 file: the original tokens plus all annotators'
/// edits, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Record {
    pub original_tokens: Vec<String>,
    pub edits: Vec<Edit>,
}

impl M2Record {
    pub fn new(original_tokens: Vec<String>) -> Self {
        M2Record {
            original_tokens,
            edits: Vec::new(),
        }
    }

    /// Annotator ids present in this record, ascending.
    pub fn annotators(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.edits.iter().map(|e| e.annotator).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.is_empty() {
            // A record with no A lines still has an implicit annotator 0
            // with zero corrections.
            ids.push(0);
        }
        ids
    }

    /// Non-noop edits of one annotator, in file order.
    pub fn edits_for(&self, annotator: u32) -> Vec<&Edit> {
        self.edits
            .iter()
            .filter(|e| e.annotator == annotator && !e.is_noop())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_token_sentence() -> AnnotatedSentence {
        let mut he = Token::new(1, "He");
        he.upos = "PRON".into();
        he.head = 2;
        he.deprel = "nsubj".into();
        let mut runs = Token::new(2, "runs");
        runs.upos = "VERB".into();
        runs.head = 0;
        runs.deprel = "root".into();
        AnnotatedSentence::new("s1", vec![he, runs])
    }

    #[test]
    fn validate_accepts_simple_tree() {
        two_token_sentence().validate().unwrap();
    }

    #[test]
    fn validate_rejects_self_head() {
        let mut s = two_token_sentence();
        s.tokens[0].head = 1;
        assert!(matches!(s.validate(), Err(ParseError::SelfHead { .. })));
    }

    #[test]
    fn validate_rejects_two_roots() {
        let mut s = two_token_sentence();
        s.tokens[0].head = 0;
        assert!(matches!(s.validate(), Err(ParseError::NotATree { .. })));
    }

    #[test]
    fn validate_rejects_cycle() {
        let mut s = two_token_sentence();
        s.tokens.push({
            let mut t = Token::new(3, ".");
            t.head = 2;
            t
        });
        s.tokens[0].head = 3;
        s.tokens[1].head = 1;
        s.tokens[2].head = 2;
        // 1 -> 3 -> 2 -> 1, no root at all.
        assert!(matches!(s.validate(), Err(ParseError::NotATree { .. })));
    }

    #[test]
    fn edit_wire_type_round_trips_category() {
        let e = Edit::new(1, 2, EditKind::Replacement, "VERB:SVA", "go");
        assert_eq!(e.wire_type(), "R:VERB:SVA");
        let bare = Edit::new(1, 2, EditKind::Unnecessary, "", "");
        assert_eq!(bare.wire_type(), "U");
        assert_eq!(Edit::noop().wire_type(), "noop");
    }
}
