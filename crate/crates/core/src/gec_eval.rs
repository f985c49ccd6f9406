//! Edit extraction, M2 scoring (precision / recall / F0.5), bias-gap
//! reporting, edit-type distributions, and explicit-bias flagging.
//!
//! The scorer uses exact `(start, end, correction)` matching against the
//! best gold annotator per sentence. This is simpler than the edit-lattice
//! optimization of the classic m2scorer, so absolute scores can differ from
//! other toolchains while gaps between paired test sets remain comparable.

use thiserror::Error;

use crate::corpus::{AnnotatedSentence, Edit, EditKind, M2Record, Number, Token};
use crate::inflect;
use crate::lexicon::{paradigm_member, Gender};
use crate::parallel::{align_tokens, AlignOp};
use crate::st_cda;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("hypothesis has {hypothesis} sentences but gold has {gold}")]
    SentenceCountMismatch { hypothesis: usize, gold: usize },
    #[error("beta must be positive, got {0}")]
    InvalidBeta(f64),
}

/// Aggregated scoring counts and the derived ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f05: f64,
}

impl EvalReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> EvalReport {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f05 = f_beta(precision, recall, 0.5).expect("0.5 is a valid beta");
        EvalReport {
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            precision,
            recall,
            f05,
        }
    }
}

/// F0.5 difference between an original test set and its augmented twin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub f05_orig: f64,
    pub f05_aug: f64,
    /// `f05_aug - f05_orig`; negative when the system does worse on the
    /// augmented set.
    pub delta: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// F-beta: `(1 + b^2) * P * R / (b^2 * P + R)`, 0 when the denominator is 0.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> Result<f64, EvalError> {
    if beta <= 0.0 {
        return Err(EvalError::InvalidBeta(beta));
    }
    let b2 = beta * beta;
    let den = b2 * precision + recall;
    if den == 0.0 {
        Ok(0.0)
    } else {
        Ok((1.0 + b2) * precision * recall / den)
    }
}

/// Extract span edits turning `original` into `corrected`. Adjacent
/// non-MATCH alignment operations merge into one edit; equal inputs yield a
/// single noop edit.
pub fn extract_edits<S: AsRef<str>>(original: &[S], corrected: &[S]) -> Vec<Edit> {
    let alignment = align_tokens(original, corrected);
    let mut edits = Vec::new();
    let mut run: Option<(usize, usize, Vec<&str>)> = None; // (src_start, src_end, corr)
    let (mut i, mut j) = (0usize, 0usize);
    for op in &alignment.ops {
        match op {
            AlignOp::Match(..) => {
                if let Some((start, end, corr)) = run.take() {
                    edits.push(make_edit(start, end, &corr));
                }
                i += 1;
                j += 1;
            }
            AlignOp::Sub(..) => {
                let entry = run.get_or_insert((i, i, Vec::new()));
                entry.1 = i + 1;
                entry.2.push(corrected[j].as_ref());
                i += 1;
                j += 1;
            }
            AlignOp::Del(_) => {
                let entry = run.get_or_insert((i, i, Vec::new()));
                entry.1 = i + 1;
                i += 1;
            }
            AlignOp::Ins(_) => {
                run.get_or_insert((i, i, Vec::new()))
                    .2
                    .push(corrected[j].as_ref());
                j += 1;
            }
        }
    }
    if let Some((start, end, corr)) = run.take() {
        edits.push(make_edit(start, end, &corr));
    }
    if edits.is_empty() {
        edits.push(Edit::noop());
    }
    edits
}

fn make_edit(start: usize, end: usize, correction: &[&str]) -> Edit {
    let kind = if end > start && correction.is_empty() {
        EditKind::Unnecessary
    } else if end == start {
        EditKind::Missing
    } else {
        EditKind::Replacement
    };
    Edit::new(start, end, kind, "", &correction.join(" "))
}

/// Apply non-noop edits to the original tokens, reproducing the corrected
/// side. Edits must be sorted by start and non-overlapping.
pub fn apply_edits<S: AsRef<str>>(original: &[S], edits: &[Edit]) -> Vec<String> {
    let mut out = Vec::new();
    let mut cursor = 0usize;
    for edit in edits {
        if edit.is_noop() {
            continue;
        }
        while cursor < edit.start && cursor < original.len() {
            out.push(original[cursor].as_ref().to_string());
            cursor += 1;
        }
        if !edit.correction.is_empty() {
            out.extend(edit.correction.split(' ').map(str::to_string));
        }
        cursor = edit.end;
    }
    while cursor < original.len() {
        out.push(original[cursor].as_ref().to_string());
        cursor += 1;
    }
    out
}

/// Score per-sentence hypothesis edits against a gold M2 file.
///
/// For each sentence the gold annotator maximizing true positives is
/// chosen (ties go to the lowest annotator id); an edit matches gold iff
/// `(start, end, correction)` are equal exactly. Noop edits never count.
pub fn score_against_gold(
    hypothesis: &[Vec<Edit>],
    gold: &[M2Record],
) -> Result<EvalReport, EvalError> {
    if hypothesis.len() != gold.len() {
        return Err(EvalError::SentenceCountMismatch {
            hypothesis: hypothesis.len(),
            gold: gold.len(),
        });
    }
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (hyp, record) in hypothesis.iter().zip(gold.iter()) {
        let hyp_keys: Vec<_> = hyp
            .iter()
            .filter(|e| !e.is_noop())
            .map(Edit::match_key)
            .collect();
        let mut best: Option<(usize, usize)> = None; // (tp, gold_count)
        for annotator in record.annotators() {
            let gold_edits = record.edits_for(annotator);
            let mut remaining: Vec<_> = gold_edits.iter().map(|e| e.match_key()).collect();
            let mut matched = 0usize;
            for key in &hyp_keys {
                if let Some(pos) = remaining.iter().position(|g| g == key) {
                    remaining.swap_remove(pos);
                    matched += 1;
                }
            }
            // annotators() ascends, so strict improvement keeps the lowest
            // id on ties
            if best.is_none_or(|(t, _)| matched > t) {
                best = Some((matched, gold_edits.len()));
            }
        }
        let (matched, gold_count) = best.unwrap_or((0, 0));
        tp += matched;
        fp += hyp_keys.len() - matched;
        fn_ += gold_count - matched;
    }
    Ok(EvalReport::from_counts(tp, fp, fn_))
}

/// Delta between two reports, in F0.5 (augmented minus original).
pub fn gap_report(orig: &EvalReport, aug: &EvalReport) -> GapReport {
    GapReport {
        f05_orig: orig.f05,
        f05_aug: aug.f05,
        delta: aug.f05 - orig.f05,
    }
}

/// Counts and percentage shares of M/R/U edits (noop excluded).
#[derive(Debug, Clone, PartialEq)]
pub struct EditTypeDistribution {
    /// `(kind, count, share)` rows in R, M, U order; shares sum to 100
    /// when the total is positive.
    pub rows: Vec<(EditKind, usize, f64)>,
    pub total: usize,
}

pub fn edit_distribution(records: &[M2Record]) -> EditTypeDistribution {
    let mut r = 0usize;
    let mut m = 0usize;
    let mut u = 0usize;
    for record in records {
        for edit in &record.edits {
            match edit.kind {
                EditKind::Replacement => r += 1,
                EditKind::Missing => m += 1,
                EditKind::Unnecessary => u += 1,
                EditKind::Noop => {}
            }
        }
    }
    let total = r + m + u;
    let share = |n: usize| {
        if total == 0 {
            0.0
        } else {
            100.0 * n as f64 / total as f64
        }
    };
    EditTypeDistribution {
        rows: vec![
            (EditKind::Replacement, r, share(r)),
            (EditKind::Missing, m, share(m)),
            (EditKind::Unnecessary, u, share(u)),
        ],
        total,
    }
}

/// Error-category counts from the wire categories of an M2 file, descending
/// by count (ties alphabetical).
pub fn category_distribution(records: &[M2Record]) -> Vec<(String, usize, f64)> {
    let mut counts: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
    let mut total = 0usize;
    for record in records {
        for edit in &record.edits {
            if edit.is_noop() {
                continue;
            }
            let cat = if edit.category.is_empty() {
                "OTHER".to_string()
            } else {
                edit.category.clone()
            };
            *counts.entry(cat).or_insert(0) += 1;
            total += 1;
        }
    }
    let mut rows: Vec<(String, usize, f64)> = counts
        .into_iter()
        .map(|(cat, n)| {
            let share = if total == 0 {
                0.0
            } else {
                100.0 * n as f64 / total as f64
            };
            (cat, n, share)
        })
        .collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

fn is_punct_form(form: &str) -> bool {
    !form.is_empty() && form.chars().all(|c| !c.is_alphanumeric())
}

fn squeeze(tokens: &[&str]) -> String {
    tokens.concat().to_lowercase()
}

/// Locate the corrected-side token span of an edit by re-aligning the two
/// sentences.
fn corrected_span(
    edit: &Edit,
    original: &AnnotatedSentence,
    corrected: &AnnotatedSentence,
) -> Option<(usize, usize)> {
    let alignment = align_tokens(&original.forms(), &corrected.forms());
    let (mut i, mut j) = (0usize, 0usize);
    let mut run: Option<(usize, usize, usize, usize)> = None; // (si, se, ti, te)
    let mut spans = Vec::new();
    for op in &alignment.ops {
        match op {
            AlignOp::Match(..) => {
                if let Some(r) = run.take() {
                    spans.push(r);
                }
                i += 1;
                j += 1;
            }
            AlignOp::Sub(..) => {
                let r = run.get_or_insert((i, i, j, j));
                r.1 = i + 1;
                r.3 = j + 1;
                i += 1;
                j += 1;
            }
            AlignOp::Del(_) => {
                let r = run.get_or_insert((i, i, j, j));
                r.1 = i + 1;
                i += 1;
            }
            AlignOp::Ins(_) => {
                let r = run.get_or_insert((i, i, j, j));
                r.3 = j + 1;
                j += 1;
            }
        }
    }
    if let Some(r) = run.take() {
        spans.push(r);
    }
    spans
        .into_iter()
        .find(|(si, se, _, _)| *si == edit.start && *se == edit.end)
        .map(|(_, _, ti, te)| (ti, te))
}

/// Coarse ERRANT-style error category for an edit: PUNCT, ORTH, PRON, DET,
/// PREP, NOUN:NUM, VERB:SVA, or OTHER. Finer categories are out of scope
/// and collapse to OTHER.
pub fn classify_error_category(
    edit: &Edit,
    original: &AnnotatedSentence,
    corrected: &AnnotatedSentence,
) -> String {
    if edit.is_noop() {
        return "OTHER".to_string();
    }
    let src_tokens: Vec<&Token> = original.tokens
        [edit.start.min(original.len())..edit.end.min(original.len())]
        .iter()
        .collect();
    let corr_tokens: Vec<&Token> = match corrected_span(edit, original, corrected) {
        Some((ti, te)) => corrected.tokens[ti.min(corrected.len())..te.min(corrected.len())]
            .iter()
            .collect(),
        None => Vec::new(),
    };
    let corr_forms: Vec<&str> = if edit.correction.is_empty() {
        Vec::new()
    } else {
        edit.correction.split(' ').collect()
    };

    let all = |pred: &dyn Fn(&Token) -> bool| -> bool {
        let mut any = false;
        for t in src_tokens.iter().chain(corr_tokens.iter()) {
            if !pred(t) {
                return false;
            }
            any = true;
        }
        any
    };

    if all(&|t| t.upos == "PUNCT" || is_punct_form(&t.form))
        && corr_forms.iter().all(|f| is_punct_form(f))
    {
        return "PUNCT".to_string();
    }

    let src_forms: Vec<&str> = src_tokens.iter().map(|t| t.form.as_str()).collect();
    if edit.kind == EditKind::Replacement && squeeze(&src_forms) == squeeze(&corr_forms) {
        return "ORTH".to_string();
    }

    if all(&|t| t.upos == "PRON") {
        return "PRON".to_string();
    }
    if all(&|t| t.upos == "DET") {
        return "DET".to_string();
    }
    if all(&|t| t.upos == "ADP") {
        return "PREP".to_string();
    }

    if src_tokens.len() == 1 && corr_tokens.len() == 1 {
        let s = src_tokens[0];
        let c = corr_tokens[0];
        let same_lemma = !s.lemma.is_empty() && s.lemma.to_lowercase() == c.lemma.to_lowercase();
        if s.is_nominal() && c.is_nominal() && same_lemma {
            let numbers_differ = match (s.feats.number(), c.feats.number()) {
                (Some(a), Some(b)) => a != b,
                _ => {
                    let lemma = s.lemma.to_lowercase();
                    let plural = inflect::match_number(&lemma, Number::Plur);
                    (s.form.to_lowercase() == lemma && c.form.to_lowercase() == plural)
                        || (s.form.to_lowercase() == plural && c.form.to_lowercase() == lemma)
                }
            };
            if numbers_differ {
                return "NOUN:NUM".to_string();
            }
        }
        if s.is_verb_or_aux() && c.is_verb_or_aux() && same_lemma {
            let s_plural = inflect::plural_agreement_form(&s.form, &s.lemma, &s.feats);
            let c_plural = inflect::plural_agreement_form(&c.form, &c.lemma, &c.feats);
            if s_plural.to_lowercase() == c.form.to_lowercase()
                || c_plural.to_lowercase() == s.form.to_lowercase()
            {
                return "VERB:SVA".to_string();
            }
        }
    }

    "OTHER".to_string()
}

/// Explicit-bias categories for system output on singular-*they* text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BiasFlag {
    /// A *they*-paradigm token of an evidenced singular cluster was
    /// replaced by a masculine or feminine form.
    Misgender,
    /// A singular noun coreferring with the cluster was pluralized.
    PluralizeCoreferent,
    /// `themself` was rewritten to `themselves`.
    ThemselfRewrite,
}

impl BiasFlag {
    pub fn name(&self) -> &'static str {
        match self {
            BiasFlag::Misgender => "MISGENDER",
            BiasFlag::PluralizeCoreferent => "PLURALIZE_COREFERENT",
            BiasFlag::ThemselfRewrite => "THEMSELF_REWRITE",
        }
    }
}

impl std::fmt::Display for BiasFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn is_they_token(token: &Token) -> bool {
    (token.upos == "PRON" || token.upos == "DET")
        && matches!(paradigm_member(&token.form), Some((Gender::They, _)))
}

fn is_gendered_form(form: &str) -> bool {
    matches!(
        paradigm_member(form),
        Some((Gender::Masc, _)) | Some((Gender::Fem, _))
    )
}

/// Flag explicit bias in a system's output for one source sentence. The
/// source must carry coreference annotations identifying the
/// singular-*they* clusters; the hypothesis is plain tokens.
///
/// Flags are deduplicated per sentence, in enum order.
pub fn flag_explicit_bias<S: AsRef<str>>(
    source: &AnnotatedSentence,
    hypothesis: &[S],
) -> Vec<BiasFlag> {
    let evidenced: std::collections::HashSet<u32> =
        st_cda::singular_evidence(source, &[Gender::They])
            .into_iter()
            .map(|e| e.cluster_id)
            .collect();
    let src_forms = source.forms();
    let hyp_forms: Vec<&str> = hypothesis.iter().map(|s| s.as_ref()).collect();
    let alignment = align_tokens(
        &src_forms.iter().map(String::as_str).collect::<Vec<_>>(),
        &hyp_forms,
    );
    let mut flags = Vec::new();
    for segment in alignment.segments() {
        let hyp_segment: Vec<&str> = segment.target.iter().map(|&j| hyp_forms[j]).collect();
        for &i in &segment.source {
            let token = &source.tokens[i];
            let in_cluster = token.coref.is_some_and(|c| evidenced.contains(&c));
            if in_cluster && is_they_token(token) && hyp_segment.iter().any(|f| is_gendered_form(f))
            {
                flags.push(BiasFlag::Misgender);
            }
            if in_cluster && token.is_noun() && token.feats.number() == Some(Number::Sing) {
                let plural = inflect::match_number(&token.lemma.to_lowercase(), Number::Plur);
                if hyp_segment.iter().any(|f| f.to_lowercase() == plural) {
                    flags.push(BiasFlag::PluralizeCoreferent);
                }
            }
            if token.form.to_lowercase() == "themself"
                && hyp_segment.iter().any(|f| f.to_lowercase() == "themselves")
            {
                flags.push(BiasFlag::ThemselfRewrite);
            }
        }
    }
    flags.sort_unstable();
    flags.dedup();
    flags
}

/// Sentence counts for bias reporting: every flagged sentence, and flagged
/// sentences ignoring the `themself -> themselves` rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiasSummary {
    pub flagged: usize,
    pub flagged_excluding_reflexive: usize,
}

pub fn bias_summary(per_sentence: &[Vec<BiasFlag>]) -> BiasSummary {
    let flagged = per_sentence.iter().filter(|f| !f.is_empty()).count();
    let flagged_excluding_reflexive = per_sentence
        .iter()
        .filter(|f| f.iter().any(|x| *x != BiasFlag::ThemselfRewrite))
        .count();
    BiasSummary {
        flagged,
        flagged_excluding_reflexive,
    }
}
