//! Counterfactual gender augmentation and bias evaluation for grammatical
//! error correction (GEC) corpora.
//!
//! The crate has two halves:
//!
//! * **Augmentation** — rewrite annotated sentences by swapping masculine and
//!   feminine terms ([`fm_cda`]), or by rewriting gendered pronouns to
//!   singular *they* where coreference evidence makes the singular reading
//!   unambiguous ([`st_cda`]). [`parallel`] applies either transform
//!   consistently across source/target sentence pairs, discarding pairs where
//!   a consistent swap is impossible.
//!
//! * **Evaluation** — token-level edit extraction, M2 scoring (precision,
//!   recall, F0.5), original-vs-augmented gap reports, edit-type
//!   distributions, and explicit-bias flagging ([`gec_eval`]).
//!
//! Supporting modules: [`corpus`] (data model + CoNLL-U / M2 / parallel
//! parsers and emitters), [`lexicon`] (pronoun paradigms, gendered noun
//! pairs, name mapping), [`inflect`] (verb agreement retargeting and noun
//! number matching), and [`annotate`] (a deterministic heuristic annotator
//! for inputs that carry no annotations).

pub mod annotate;
mod caps;
pub mod corpus;
pub mod fm_cda;
pub mod gec_eval;
pub mod inflect;
pub mod lexicon;
pub mod parallel;
pub mod st_cda;

pub use corpus::{AnnotatedSentence, Edit, EditKind, M2Record, ParallelPair, Token};
pub use fm_cda::{Replacement, SwapKind, SwapPlan};
pub use gec_eval::{BiasFlag, EvalReport, GapReport};
pub use lexicon::{CaseSlot, Gender, Lexicon};
pub use parallel::{AlignOp, Alignment, DiscardReason};
