//! Singular-*they* swap planning: detect coreference clusters with singular
//! antecedents, rewrite the gendered pronouns of those clusters to the
//! *they* paradigm, and retarget the verbs that agree with them.
//!
//! A coreferring expression counts as singular evidence when it is a
//! singular common or proper noun, or when a possessive pronoun of the
//! cluster sits under a singular possessum (*his foot*). Pronouns in
//! clusters without such evidence are left byte-identical to the input —
//! swapping them would create *they* tokens with a plausible plural
//! reading, which is exactly what this transform exists to avoid.
//!
//! Definitionally gendered nouns are deliberately not neutralized here;
//! *they* may corefer with them, and those swaps belong to the
//! masculine/feminine transform only.

use std::collections::{BTreeMap, HashSet};

use crate::corpus::{AnnotatedSentence, Number, Token};
use crate::fm_cda::{plan_pronoun_token, resolve_slot, Replacement, SwapError, SwapKind, SwapPlan};
use crate::inflect;
use crate::lexicon::{paradigm_member, CaseSlot, Gender, Lexicon};

/// Why a cluster is known to have a singular referent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvidenceKind {
    /// A coreferring expression is a singular common or proper noun.
    SingularNoun,
    /// A possessive pronoun of the cluster modifies a singular noun.
    SingularPossessum,
}

/// Evidence that one coreference cluster has a singular referent.
///
/// For [`EvidenceKind::SingularNoun`] the token is the singular nominal
/// mention itself; for [`EvidenceKind::SingularPossessum`] it is the
/// possessed noun heading the cluster's possessive pronoun.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityEvidence {
    pub cluster_id: u32,
    pub evidence_token: usize,
    pub kind: EvidenceKind,
}

fn is_pronoun_of(token: &Token, genders: &[Gender]) -> bool {
    if token.upos != "PRON" && token.upos != "DET" {
        return false;
    }
    matches!(paradigm_member(&token.form), Some((g, _)) if genders.contains(&g))
}

fn clusters_with_pronouns(sentence: &AnnotatedSentence, genders: &[Gender]) -> HashSet<u32> {
    sentence
        .tokens
        .iter()
        .filter(|t| is_pronoun_of(t, genders))
        .filter_map(|t| t.coref)
        .collect()
}

/// Singularity evidence for every cluster mentioned in `sentence`,
/// regardless of where the cluster's pronouns sit. The possessum check
/// still looks at pronouns of `genders` because the possessed noun is
/// reached through them.
fn evidence_in_sentence(
    sentence: &AnnotatedSentence,
    genders: &[Gender],
) -> Vec<SingularityEvidence> {
    let mut clusters: BTreeMap<u32, Vec<&Token>> = BTreeMap::new();
    for token in &sentence.tokens {
        if let Some(id) = token.coref {
            clusters.entry(id).or_default().push(token);
        }
    }
    let mut out = Vec::new();
    for (&cluster_id, members) in &clusters {
        if let Some(noun) = members
            .iter()
            .find(|t| t.is_nominal() && t.feats.number() == Some(Number::Sing))
        {
            out.push(SingularityEvidence {
                cluster_id,
                evidence_token: noun.index,
                kind: EvidenceKind::SingularNoun,
            });
        }
        for pronoun in members {
            if !is_pronoun_of(pronoun, genders)
                || resolve_slot(sentence, pronoun) != CaseSlot::PossDet
            {
                continue;
            }
            let Some(head) = sentence.token(pronoun.head) else {
                continue;
            };
            if head.is_noun() && head.feats.number() == Some(Number::Sing) {
                out.push(SingularityEvidence {
                    cluster_id,
                    evidence_token: head.index,
                    kind: EvidenceKind::SingularPossessum,
                });
                break;
            }
        }
    }
    out
}

/// Evidence for every cluster of `sentence` that contains a pronoun of one
/// of the given paradigms. Shared by the swap planner (masculine/feminine
/// clusters) and the bias flagger (*they* clusters).
pub(crate) fn singular_evidence(
    sentence: &AnnotatedSentence,
    genders: &[Gender],
) -> Vec<SingularityEvidence> {
    let qualifying = clusters_with_pronouns(sentence, genders);
    evidence_in_sentence(sentence, genders)
        .into_iter()
        .filter(|e| qualifying.contains(&e.cluster_id))
        .collect()
}

/// Singularity evidence for every cluster containing a masculine or
/// feminine pronoun. Clusters with no evidence are omitted.
pub fn find_singular_clusters(sentence: &AnnotatedSentence) -> Vec<SingularityEvidence> {
    singular_evidence(sentence, &[Gender::Masc, Gender::Fem])
}

/// Cluster ids with singularity evidence anywhere in a document window.
/// The qualifying pronoun and the evidence may sit in different sentences.
pub fn evidenced_clusters(sentences: &[&AnnotatedSentence]) -> HashSet<u32> {
    let genders = [Gender::Masc, Gender::Fem];
    let qualifying: HashSet<u32> = sentences
        .iter()
        .flat_map(|s| clusters_with_pronouns(s, &genders))
        .collect();
    sentences
        .iter()
        .flat_map(|s| evidence_in_sentence(s, &genders))
        .map(|e| e.cluster_id)
        .filter(|c| qualifying.contains(c))
        .collect()
}

fn has_gendered_pronoun(sentence: &AnnotatedSentence) -> bool {
    sentence
        .tokens
        .iter()
        .any(|t| is_pronoun_of(t, &[Gender::Masc, Gender::Fem]))
}

fn has_own_subject(sentence: &AnnotatedSentence, verb_index: usize) -> bool {
    sentence
        .tokens
        .iter()
        .any(|t| t.head == verb_index && t.deprel.starts_with("nsubj"))
}

/// The verb/auxiliary tokens that agree with a subject attached at
/// `head_index`: the head itself (when verbal), its auxiliary chain and
/// copula, and conjunct predicates that share the subject.
fn agreement_targets(sentence: &AnnotatedSentence, head_index: usize) -> Vec<usize> {
    let mut targets = Vec::new();
    let mut predicates = vec![head_index];
    for token in &sentence.tokens {
        if token.head == head_index
            && token.deprel == "conj"
            && !has_own_subject(sentence, token.index)
        {
            predicates.push(token.index);
        }
    }
    for pred in predicates {
        if let Some(tok) = sentence.token(pred) {
            if tok.is_verb_or_aux() {
                targets.push(pred);
            }
        }
        for token in &sentence.tokens {
            if token.head == pred
                && token.is_verb_or_aux()
                && matches!(
                    token.deprel.as_str(),
                    "aux" | "aux:pass" | "auxpass" | "cop"
                )
            {
                targets.push(token.index);
            }
        }
    }
    targets.sort_unstable();
    targets.dedup();
    targets
}

/// Plan the *they* rewrite of a sentence given the set of evidenced
/// cluster ids (which may have been collected over a whole document).
pub fn plan_st_swap_with_evidence(
    sentence: &AnnotatedSentence,
    evidenced: &HashSet<u32>,
    lexicon: &Lexicon,
) -> SwapPlan {
    let mut plan = SwapPlan::new();
    for token in &sentence.tokens {
        let in_evidenced = token.coref.is_some_and(|c| evidenced.contains(&c));
        if !in_evidenced {
            continue;
        }
        plan_pronoun_token(
            sentence,
            token,
            lexicon,
            |gender| match gender {
                Gender::Masc | Gender::Fem => Some(Gender::They),
                Gender::They => None,
            },
            &mut plan,
        );
    }
    // Retarget agreement: every verb whose nsubj / nsubj:pass is a swapped
    // pronoun, together with its auxiliary chain and subject-sharing
    // conjuncts.
    let swapped: Vec<usize> = plan.replacements.keys().copied().collect();
    for index in swapped {
        let token = sentence.token(index).expect("planned index exists");
        if !token.deprel.starts_with("nsubj") {
            continue;
        }
        for verb_index in agreement_targets(sentence, token.head) {
            if plan.get(verb_index).is_some() {
                continue;
            }
            let verb = sentence.token(verb_index).expect("target index exists");
            let retargeted = inflect::plural_agreement_form(&verb.form, &verb.lemma, &verb.feats);
            if retargeted != verb.form {
                plan.insert(
                    verb_index,
                    Replacement {
                        new_form: retargeted,
                        new_lemma: None,
                        kind: SwapKind::VerbAgreement,
                        slot: None,
                    },
                );
            }
        }
    }
    plan
}

/// Plan singular-*they* swaps for one sentence, using evidence from that
/// sentence alone. For document-level evidence use [`plan_st_swap_doc`].
///
/// A sentence that contains gendered pronouns but no coreference
/// annotations at all cannot be assessed and yields an error.
pub fn plan_st_swap(
    sentence: &AnnotatedSentence,
    lexicon: &Lexicon,
) -> Result<SwapPlan, SwapError> {
    if has_gendered_pronoun(sentence) && !sentence.has_coref() {
        return Err(SwapError::AnnotationsRequired(format!(
            "sentence {:?} has gendered pronouns but no coreference layer",
            sentence.id
        )));
    }
    let evidenced: HashSet<u32> = find_singular_clusters(sentence)
        .into_iter()
        .map(|e| e.cluster_id)
        .collect();
    Ok(plan_st_swap_with_evidence(sentence, &evidenced, lexicon))
}

/// Plan singular-*they* swaps over a document: cluster ids are shared
/// across the sentences, so evidence in one sentence licenses swaps in
/// another.
pub fn plan_st_swap_doc(
    sentences: &[AnnotatedSentence],
    lexicon: &Lexicon,
) -> Result<Vec<SwapPlan>, SwapError> {
    let refs: Vec<&AnnotatedSentence> = sentences.iter().collect();
    let any_coref = refs.iter().any(|s| s.has_coref());
    if !any_coref && refs.iter().any(|s| has_gendered_pronoun(s)) {
        return Err(SwapError::AnnotationsRequired(
            "document has gendered pronouns but no coreference layer".to_string(),
        ));
    }
    let evidenced = evidenced_clusters(&refs);
    Ok(sentences
        .iter()
        .map(|s| plan_st_swap_with_evidence(s, &evidenced, lexicon))
        .collect())
}
