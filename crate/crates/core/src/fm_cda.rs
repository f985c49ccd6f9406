//! Plan and apply feminine<->masculine counterfactual swaps on a single
//! annotated sentence.
//!
//! Planning and mutation are split: [`plan_fm_swap`] computes every
//! replacement up front without touching the sentence, which is what lets
//! [`crate::parallel`] compare plans across a source/target pair before
//! committing to either side.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::corpus::{AnnotatedSentence, Number, Token};
use crate::inflect;
use crate::lexicon::{CaseSlot, Gender, Lexicon};

#[derive(Debug, Error)]
pub enum SwapError {
    #[error("plan was discarded: {0}")]
    Discarded(String),
    #[error("replacement index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("annotations required: {0}")]
    AnnotationsRequired(String),
}

/// What kind of swap produced a replacement. `VerbAgreement` entries are
/// only produced by the singular-*they* planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapKind {
    Pronoun,
    Noun,
    Name,
    VerbAgreement,
}

/// A single planned token rewrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replacement {
    pub new_form: String,
    /// Updated lemma, when the swap changes it (noun/name/pronoun swaps).
    /// Keeping the lemma in step with the form is what makes a second
    /// augmentation pass see the swapped sentence correctly.
    pub new_lemma: Option<String>,
    pub kind: SwapKind,
    pub slot: Option<CaseSlot>,
}

/// All replacements for one sentence, keyed by 1-based token index, plus
/// diagnostics for tokens that were skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwapPlan {
    pub replacements: BTreeMap<usize, Replacement>,
    pub discarded: Option<String>,
    pub diagnostics: Vec<String>,
}

impl SwapPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.replacements.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Replacement> {
        self.replacements.get(&index)
    }

    pub fn insert(&mut self, index: usize, replacement: Replacement) {
        self.replacements.insert(index, replacement);
    }
}

/// Derive the case slot of a gendered pronoun/determiner token from its
/// POS tag and features:
///
/// * `Reflex=Yes` -> REFL
/// * `DET` -> POSS_DET (the determiner reading is preferred when
///   annotations conflict; a diagnostic is recorded by the planner)
/// * `PRON` with `Poss=Yes` -> POSS_DET under a nominal head, POSS_IND
///   otherwise
/// * `PRON` with `Case=Acc` -> ACC
/// * anything else -> NOM
pub fn resolve_slot(sentence: &AnnotatedSentence, token: &Token) -> CaseSlot {
    if token.feats.is_reflexive() {
        return CaseSlot::Refl;
    }
    if token.upos == "DET" {
        return CaseSlot::PossDet;
    }
    if token.feats.is_possessive() {
        let head_is_nominal = sentence.token(token.head).is_some_and(Token::is_nominal);
        return if head_is_nominal {
            CaseSlot::PossDet
        } else {
            CaseSlot::PossInd
        };
    }
    if token.feats.case() == Some("Acc") {
        return CaseSlot::Acc;
    }
    CaseSlot::Nom
}

/// True for tokens the pronoun route should consider at all.
fn is_pronoun_like(token: &Token) -> bool {
    token.upos == "PRON" || token.upos == "DET"
}

fn noun_number(token: &Token) -> Number {
    if let Some(n) = token.feats.number() {
        return n;
    }
    // No Number feature: infer it by comparing the form against the
    // pluralized lemma.
    let lower = token.form.to_lowercase();
    let lemma = token.lemma.to_lowercase();
    if lower != lemma && lower == inflect::match_number(&lemma, Number::Plur) {
        Number::Plur
    } else {
        Number::Sing
    }
}

/// Plan the pronoun swap for one token, in either direction
/// (masculine<->feminine) or towards *they*.
pub(crate) fn plan_pronoun_token(
    sentence: &AnnotatedSentence,
    token: &Token,
    lexicon: &Lexicon,
    target_of: impl Fn(Gender) -> Option<Gender>,
    plan: &mut SwapPlan,
) {
    if !is_pronoun_like(token) {
        return;
    }
    let Some((gender, _)) = lexicon.paradigm_of(&token.form) else {
        return;
    };
    let Some(target) = target_of(gender) else {
        return;
    };
    let slot = resolve_slot(sentence, token);
    if token.upos == "DET" && !sentence.token(token.head).is_some_and(Token::is_nominal) {
        plan.diagnostics.push(format!(
            "token {} {:?}: DET reading kept despite non-nominal head",
            token.index, token.form
        ));
    }
    match lexicon.map_pronoun(&token.form, slot, target) {
        Ok(Some(new_form)) => {
            // Pronoun lemmas follow the nominative-form convention
            // (him/his -> "he"); mapping lemma to the target paradigm's
            // nominative keeps double augmentation an identity.
            let new_lemma = lexicon.paradigm(target).form(CaseSlot::Nom).to_string();
            plan.insert(
                token.index,
                Replacement {
                    new_form,
                    new_lemma: Some(new_lemma),
                    kind: SwapKind::Pronoun,
                    slot: Some(slot),
                },
            );
        }
        Ok(None) => {}
        Err(err) => {
            plan.diagnostics.push(format!(
                "token {} {:?}: unresolvable slot, skipped ({err})",
                token.index, token.form
            ));
        }
    }
}

/// Plan masculine<->feminine swaps for every gendered token of a sentence.
///
/// Pronouns are mapped through their case slot, common nouns through the
/// noun pair table (reinflected to the token's number), proper nouns
/// through the name map. Non-gendered tokens are untouched; tokens whose
/// slot cannot be resolved are skipped and recorded in the diagnostics.
pub fn plan_fm_swap(sentence: &AnnotatedSentence, lexicon: &Lexicon) -> SwapPlan {
    let mut plan = SwapPlan::new();
    for token in &sentence.tokens {
        if is_pronoun_like(token) {
            plan_pronoun_token(sentence, token, lexicon, Gender::opposite, &mut plan);
        } else if token.is_noun() {
            let lemma = token.lemma.to_lowercase();
            if let Some((_, own_gender)) = lexicon.nouns.lookup(&lemma) {
                let target = own_gender.opposite().expect("noun table has no They side");
                let number = noun_number(token);
                if let Some(new_form) = lexicon.map_common_noun(&lemma, &token.form, target, number)
                {
                    let new_lemma = lexicon.nouns.lookup(&lemma).map(|(c, _)| c.to_string());
                    plan.insert(
                        token.index,
                        Replacement {
                            new_form,
                            new_lemma,
                            kind: SwapKind::Noun,
                            slot: None,
                        },
                    );
                }
            }
        } else if token.is_proper_noun() {
            if let Some(new_form) = lexicon.map_name(&token.form) {
                let new_lemma = new_form.to_lowercase();
                plan.insert(
                    token.index,
                    Replacement {
                        new_form,
                        new_lemma: Some(new_lemma),
                        kind: SwapKind::Name,
                        slot: None,
                    },
                );
            }
        }
    }
    plan
}

/// Apply a plan, producing a new sentence. Forms (and lemmas, when the
/// replacement carries one) change; every other token field is preserved.
pub fn apply_plan(
    sentence: &AnnotatedSentence,
    plan: &SwapPlan,
) -> Result<AnnotatedSentence, SwapError> {
    if let Some(reason) = &plan.discarded {
        return Err(SwapError::Discarded(reason.clone()));
    }
    let mut out = sentence.clone();
    for (&index, replacement) in &plan.replacements {
        if index == 0 {
            return Err(SwapError::IndexOutOfRange(index));
        }
        let token = out
            .tokens
            .get_mut(index - 1)
            .ok_or(SwapError::IndexOutOfRange(index))?;
        token.form = replacement.new_form.clone();
        if let Some(lemma) = &replacement.new_lemma {
            token.lemma = lemma.clone();
        }
    }
    Ok(out)
}
