//! Apply an augmenter consistently across a source/target pair.
//!
//! The swap is planned on the grammatical target text first, then projected
//! onto the (possibly ungrammatical) source through a token alignment:
//! MATCH-aligned source tokens receive the target token's replacement
//! verbatim, and tokens inside differing segments are compared
//! position-wise. Pairs where a consistent swap is impossible are discarded
//! with a [`DiscardReason`] rather than silently mangled.

use std::collections::HashSet;

use crate::corpus::{AnnotatedSentence, ParallelPair, Token};
use crate::fm_cda::{
    self, apply_plan, plan_fm_swap, resolve_slot, Replacement, SwapError, SwapKind, SwapPlan,
};
use crate::inflect;
use crate::lexicon::{Gender, Lexicon};
use crate::st_cda;

/// One alignment operation over source index `i` and target index `j`
/// (0-based token positions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignOp {
    Match(usize, usize),
    Sub(usize, usize),
    Del(usize),
    Ins(usize),
}

impl AlignOp {
    pub fn is_match(&self) -> bool {
        matches!(self, AlignOp::Match(..))
    }

    fn tag(&self) -> char {
        match self {
            AlignOp::Match(..) => 'M',
            AlignOp::Sub(..) => 'S',
            AlignOp::Del(_) => 'D',
            AlignOp::Ins(_) => 'I',
        }
    }
}

/// A minimal-cost token alignment. Every source and target token is covered
/// exactly once, monotonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub ops: Vec<AlignOp>,
}

/// A maximal run of non-MATCH operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Source token positions covered by the segment (0-based).
    pub source: Vec<usize>,
    /// Target token positions covered by the segment (0-based).
    pub target: Vec<usize>,
}

impl Alignment {
    /// Number of non-MATCH operations (the Levenshtein cost).
    pub fn cost(&self) -> usize {
        self.ops.iter().filter(|op| !op.is_match()).count()
    }

    /// The op-type sequence as a compact string (`M`, `S`, `D`, `I`), used
    /// to compare alignment structure before and after augmentation.
    pub fn signature(&self) -> String {
        self.ops.iter().map(AlignOp::tag).collect()
    }

    /// Maximal runs of non-MATCH operations.
    pub fn segments(&self) -> Vec<Segment> {
        let mut segments = Vec::new();
        let mut current: Option<Segment> = None;
        for op in &self.ops {
            match op {
                AlignOp::Match(..) => {
                    if let Some(seg) = current.take() {
                        segments.push(seg);
                    }
                }
                AlignOp::Sub(i, j) => {
                    let seg = current.get_or_insert_with(|| Segment {
                        source: Vec::new(),
                        target: Vec::new(),
                    });
                    seg.source.push(*i);
                    seg.target.push(*j);
                }
                AlignOp::Del(i) => {
                    current
                        .get_or_insert_with(|| Segment {
                            source: Vec::new(),
                            target: Vec::new(),
                        })
                        .source
                        .push(*i);
                }
                AlignOp::Ins(j) => {
                    current
                        .get_or_insert_with(|| Segment {
                            source: Vec::new(),
                            target: Vec::new(),
                        })
                        .target
                        .push(*j);
                }
            }
        }
        if let Some(seg) = current.take() {
            segments.push(seg);
        }
        segments
    }
}

/// Minimal-cost alignment of two token sequences (MATCH cost 0 on exact
/// form equality, SUB/DEL/INS cost 1). Ties are broken deterministically,
/// preferring MATCH, then SUB, then DEL before INS, evaluated left to
/// right.
pub fn align_tokens<S: AsRef<str>>(source: &[S], target: &[S]) -> Alignment {
    let n = source.len();
    let m = target.len();
    // cost[i][j] = minimal edit cost aligning source[i..] with target[j..]
    let mut cost = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            if i == n && j == m {
                continue;
            }
            let mut best = usize::MAX;
            if i < n && j < m {
                let step = if source[i].as_ref() == target[j].as_ref() {
                    0
                } else {
                    1
                };
                best = best.min(cost[i + 1][j + 1] + step);
            }
            if i < n {
                best = best.min(cost[i + 1][j] + 1);
            }
            if j < m {
                best = best.min(cost[i][j + 1] + 1);
            }
            cost[i][j] = best;
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (0usize, 0usize);
    while i < n || j < m {
        let here = cost[i][j];
        if i < n && j < m && source[i].as_ref() == target[j].as_ref() && cost[i + 1][j + 1] == here
        {
            ops.push(AlignOp::Match(i, j));
            i += 1;
            j += 1;
        } else if i < n
            && j < m
            && source[i].as_ref() != target[j].as_ref()
            && cost[i + 1][j + 1] + 1 == here
        {
            ops.push(AlignOp::Sub(i, j));
            i += 1;
            j += 1;
        } else if i < n && cost[i + 1][j] + 1 == here {
            ops.push(AlignOp::Del(i));
            i += 1;
        } else {
            ops.push(AlignOp::Ins(j));
            j += 1;
        }
    }
    Alignment { ops }
}

/// Why a pair was dropped instead of augmented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscardReason {
    /// A differing segment has different source and target token counts.
    SegmentLengthMismatch,
    /// Source and target tokens at the same segment position would swap
    /// differently (or the swap would erase the difference between them).
    SwapMismatch,
    /// A target verb was retargeted for *they* agreement but its aligned
    /// source token is neither identical nor retargetable.
    VerbAgreementMismatch,
}

impl DiscardReason {
    pub fn name(&self) -> &'static str {
        match self {
            DiscardReason::SegmentLengthMismatch => "SEGMENT_LENGTH_MISMATCH",
            DiscardReason::SwapMismatch => "SWAP_MISMATCH",
            DiscardReason::VerbAgreementMismatch => "VERB_AGREEMENT_MISMATCH",
        }
    }
}

impl std::fmt::Display for DiscardReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which augmentation to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fm,
    St,
}

/// Result of augmenting one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugmentOutcome {
    Augmented(ParallelPair),
    Discarded(DiscardReason),
}

/// The swap the source token would undergo on its own, used to judge
/// consistency inside differing segments. For the singular-*they* mode the
/// evidence decision is inherited from the aligned target token, so only
/// form and slot matter here.
fn source_candidate(
    mode: Mode,
    fm_source_plan: &SwapPlan,
    sentence: &AnnotatedSentence,
    token: &Token,
    lexicon: &Lexicon,
) -> Option<Replacement> {
    match mode {
        Mode::Fm => fm_source_plan
            .get(token.index)
            .filter(|r| r.kind != SwapKind::VerbAgreement)
            .cloned(),
        Mode::St => {
            if token.upos != "PRON" && token.upos != "DET" {
                return None;
            }
            let (gender, _) = lexicon.paradigm_of(&token.form)?;
            if gender == Gender::They {
                return None;
            }
            let slot = resolve_slot(sentence, token);
            match lexicon.map_pronoun(&token.form, slot, Gender::They) {
                Ok(Some(new_form)) => Some(Replacement {
                    new_lemma: Some(new_form.to_lowercase()),
                    new_form,
                    kind: SwapKind::Pronoun,
                    slot: Some(slot),
                }),
                _ => None,
            }
        }
    }
}

fn plan_target(
    pair: &ParallelPair,
    mode: Mode,
    evidence: Option<&HashSet<u32>>,
    lexicon: &Lexicon,
) -> Result<SwapPlan, SwapError> {
    match mode {
        Mode::Fm => Ok(plan_fm_swap(&pair.target, lexicon)),
        Mode::St => match evidence {
            Some(clusters) => Ok(st_cda::plan_st_swap_with_evidence(
                &pair.target,
                clusters,
                lexicon,
            )),
            None => st_cda::plan_st_swap(&pair.target, lexicon),
        },
    }
}

fn augment_pair_inner(
    pair: &ParallelPair,
    mode: Mode,
    evidence: Option<&HashSet<u32>>,
    lexicon: &Lexicon,
) -> Result<AugmentOutcome, SwapError> {
    let target_plan = plan_target(pair, mode, evidence, lexicon)?;
    let fm_source_plan = match mode {
        Mode::Fm => plan_fm_swap(&pair.source, lexicon),
        Mode::St => SwapPlan::new(),
    };

    let src_forms = pair.source.forms();
    let tgt_forms = pair.target.forms();
    let alignment = align_tokens(&src_forms, &tgt_forms);

    let mut source_plan = SwapPlan::new();

    // MATCH-aligned source tokens receive the target token's replacement.
    for op in &alignment.ops {
        if let AlignOp::Match(i, j) = op {
            if let Some(replacement) = target_plan.get(j + 1) {
                source_plan.insert(i + 1, replacement.clone());
            }
        }
    }

    // Differing segments: equal token counts required, then a position-wise
    // comparison of the swaps on each side.
    for segment in alignment.segments() {
        if segment.source.len() != segment.target.len() {
            return Ok(AugmentOutcome::Discarded(
                DiscardReason::SegmentLengthMismatch,
            ));
        }
        for (&i, &j) in segment.source.iter().zip(segment.target.iter()) {
            let src_token = &pair.source.tokens[i];
            let tgt_swap = target_plan
                .get(j + 1)
                .filter(|r| r.kind != SwapKind::VerbAgreement);
            let src_swap =
                source_candidate(mode, &fm_source_plan, &pair.source, src_token, lexicon);
            match (src_swap, tgt_swap) {
                (None, None) => {}
                (Some(rs), Some(rt)) => {
                    let same_swap = rs.kind == rt.kind
                        && rs.new_form.to_lowercase() == rt.new_form.to_lowercase();
                    // A swap that erases the source/target difference would
                    // silently delete the grammatical error; drop the pair.
                    if !same_swap || rs.new_form == rt.new_form {
                        return Ok(AugmentOutcome::Discarded(DiscardReason::SwapMismatch));
                    }
                    source_plan.insert(i + 1, rs);
                }
                _ => return Ok(AugmentOutcome::Discarded(DiscardReason::SwapMismatch)),
            }
        }
    }

    // Retargeted verbs need an identical-form (MATCH) or retargetable
    // source counterpart.
    if mode == Mode::St {
        for (&tgt_index, replacement) in &target_plan.replacements {
            if replacement.kind != SwapKind::VerbAgreement {
                continue;
            }
            let j = tgt_index - 1;
            let covering = alignment.ops.iter().find(|op| match op {
                AlignOp::Match(_, oj) | AlignOp::Sub(_, oj) => *oj == j,
                AlignOp::Ins(oj) => *oj == j,
                AlignOp::Del(_) => false,
            });
            match covering {
                Some(AlignOp::Match(..)) => {} // already copied
                Some(AlignOp::Sub(i, _)) => {
                    let src_token = &pair.source.tokens[*i];
                    let retargeted = inflect::plural_agreement_form(
                        &src_token.form,
                        &src_token.lemma,
                        &src_token.feats,
                    );
                    if retargeted == src_token.form || retargeted == replacement.new_form {
                        return Ok(AugmentOutcome::Discarded(
                            DiscardReason::VerbAgreementMismatch,
                        ));
                    }
                    source_plan.insert(
                        i + 1,
                        Replacement {
                            new_form: retargeted,
                            new_lemma: None,
                            kind: SwapKind::VerbAgreement,
                            slot: None,
                        },
                    );
                }
                _ => {
                    return Ok(AugmentOutcome::Discarded(
                        DiscardReason::VerbAgreementMismatch,
                    ))
                }
            }
        }
    }

    let source = apply_plan(&pair.source, &source_plan)?;
    let target = apply_plan(&pair.target, &target_plan)?;

    // The swap must not change the alignment structure.
    let after = align_tokens(&source.forms(), &target.forms());
    if after.signature() != alignment.signature() {
        return Ok(AugmentOutcome::Discarded(DiscardReason::SwapMismatch));
    }

    Ok(AugmentOutcome::Augmented(ParallelPair {
        id: pair.id.clone(),
        doc_id: pair.doc_id.clone(),
        source,
        target,
    }))
}

/// Augment one pair. Singular-*they* evidence is taken from the pair's own
/// target sentence; use [`augment_corpus`] for document-level evidence.
pub fn augment_pair(
    pair: &ParallelPair,
    mode: Mode,
    lexicon: &Lexicon,
) -> Result<AugmentOutcome, SwapError> {
    augment_pair_inner(pair, mode, None, lexicon)
}

/// Per-pair discard log entries: `(pair_id, reason)`.
pub type DiscardLog = Vec<(String, DiscardReason)>;

/// Augment a corpus pair by pair, preserving order. Pairs sharing a
/// `doc_id` with their neighbours pool their target-side coreference
/// evidence. Returns the accepted pairs and a discard log of
/// `(pair_id, reason)`.
pub fn augment_corpus(
    pairs: &[ParallelPair],
    mode: Mode,
    lexicon: &Lexicon,
) -> Result<(Vec<ParallelPair>, DiscardLog), SwapError> {
    let mut accepted = Vec::new();
    let mut discards = Vec::new();
    let mut start = 0usize;
    while start < pairs.len() {
        let mut end = start + 1;
        if pairs[start].doc_id.is_some() {
            while end < pairs.len() && pairs[end].doc_id == pairs[start].doc_id {
                end += 1;
            }
        }
        let group = &pairs[start..end];
        let evidence: Option<HashSet<u32>> = if mode == Mode::St && group.len() > 1 {
            let targets: Vec<&AnnotatedSentence> = group.iter().map(|p| &p.target).collect();
            if targets.iter().any(|s| s.has_coref()) {
                Some(st_cda::evidenced_clusters(&targets))
            } else {
                None
            }
        } else {
            None
        };
        for pair in group {
            match augment_pair_inner(pair, mode, evidence.as_ref(), lexicon)? {
                AugmentOutcome::Augmented(p) => accepted.push(p),
                AugmentOutcome::Discarded(reason) => discards.push((pair.id.clone(), reason)),
            }
        }
        start = end;
    }
    Ok((accepted, discards))
}

// fm_cda::SwapError is the error surface of this module too; re-export for
// callers that only deal in pairs.
pub use fm_cda::SwapError as AugmentError;
