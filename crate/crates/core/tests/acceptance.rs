//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gecda_core::corpus::{
    emit_conllu, emit_m2, parse_conllu, parse_m2, AnnotatedSentence, Edit, EditKind,
};
use gecda_core::fm_cda::{apply_plan, plan_fm_swap, SwapKind};
use gecda_core::gec_eval::{
    apply_edits, extract_edits, f_beta, flag_explicit_bias, gap_report, score_against_gold,
    BiasFlag, EvalReport,
};
use gecda_core::lexicon::Lexicon;
use gecda_core::parallel::{align_tokens, augment_corpus, Mode};
use gecda_core::st_cda::{find_singular_clusters, plan_st_swap};

fn report(name: &str, pass: bool, elapsed: Duration, detail: &str) {
    println!(
        "acceptance {name}: {} ({elapsed:.2?})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name}: {detail}");
}

/// Published (precision, recall, F0.5) triples, in percent, for three GEC
/// systems on the full BEA dev set and the paired 195/556 subsets.
const REFERENCE_TRIPLES: [(&str, f64, f64, f64); 15] = [
    ("gector bea-dev-full", 64.05, 34.28, 54.57),
    ("gector bea-195-orig", 70.11, 34.81, 58.28),
    ("gector bea-195-st-aug", 56.33, 31.67, 48.74),
    ("gector bea-556-orig", 69.46, 37.27, 59.23),
    ("gector bea-556-mf-aug", 68.84, 37.46, 58.96),
    ("bart bea-dev-full", 57.46, 39.70, 52.74),
    ("bart bea-195-orig", 61.32, 42.58, 56.36),
    ("bart bea-195-st-aug", 53.59, 39.86, 50.13),
    ("bart bea-556-orig", 62.73, 46.41, 58.61),
    ("bart bea-556-mf-aug", 63.05, 46.29, 58.79),
    ("editscorer bea-dev-full", 70.29, 35.77, 58.92),
    ("editscorer bea-195-orig", 73.98, 35.16, 60.60),
    ("editscorer bea-195-st-aug", 63.76, 33.81, 54.16),
    ("editscorer bea-556-orig", 75.00, 37.59, 62.55),
    ("editscorer bea-556-mf-aug", 73.42, 37.46, 61.59),
];

#[test]
fn criterion_1_f05_arithmetic() {
    let start = Instant::now();
    let mut detail = String::new();
    for (label, p, r, f_published) in REFERENCE_TRIPLES {
        let f = f_beta(p / 100.0, r / 100.0, 0.5).unwrap() * 100.0;
        if (f - f_published).abs() > 0.02 {
            detail.push_str(&format!(
                "{label}: computed {f:.4}, published {f_published}\n"
            ));
        }
    }
    let elapsed = start.elapsed();
    let pass = detail.is_empty() && elapsed < Duration::from_secs(1);
    report("1 f05-arithmetic", pass, elapsed, &detail);
}

/// (orig P, orig R, aug P, aug R, published diff in pp) per system/subset.
const REFERENCE_GAPS: [(&str, f64, f64, f64, f64, f64); 6] = [
    ("gector bea-195", 70.11, 34.81, 56.33, 31.67, -9.54),
    ("bart bea-195", 61.32, 42.58, 53.59, 39.86, -6.23),
    ("editscorer bea-195", 73.98, 35.16, 63.76, 33.81, -6.44),
    ("gector bea-556", 69.46, 37.27, 68.84, 37.46, -0.27),
    ("bart bea-556", 62.73, 46.41, 63.05, 46.29, 0.18),
    ("editscorer bea-556", 75.00, 37.59, 73.42, 37.46, -0.96),
];

fn report_with_f05(p: f64, r: f64) -> EvalReport {
    EvalReport {
        true_positives: 0,
        false_positives: 0,
        false_negatives: 0,
        precision: p,
        recall: r,
        f05: f_beta(p, r, 0.5).unwrap(),
    }
}

#[test]
fn criterion_2_gap_arithmetic() {
    let start = Instant::now();
    let mut detail = String::new();
    for (label, po, ro, pa, ra, published) in REFERENCE_GAPS {
        let orig = report_with_f05(po / 100.0, ro / 100.0);
        let aug = report_with_f05(pa / 100.0, ra / 100.0);
        let gap = gap_report(&orig, &aug);
        let delta_pp = gap.delta * 100.0;
        if (delta_pp - published).abs() > 0.01 {
            detail.push_str(&format!(
                "{label}: computed {delta_pp:.4}, published {published}\n"
            ));
        }
    }
    let elapsed = start.elapsed();
    let pass = detail.is_empty() && elapsed < Duration::from_secs(1);
    report("2 gap-arithmetic", pass, elapsed, &detail);
}

#[test]
fn criterion_3_fm_involution() {
    let start = Instant::now();
    let corpus = common::fm_corpus(500);
    let lexicon = Lexicon::builtin();
    let mut failures = 0usize;
    let mut detail = String::new();
    for sentence in &corpus {
        let once = apply_plan(sentence, &plan_fm_swap(sentence, lexicon)).unwrap();
        let twice = apply_plan(&once, &plan_fm_swap(&once, lexicon)).unwrap();
        if emit_conllu(std::slice::from_ref(&twice)) != emit_conllu(std::slice::from_ref(sentence))
        {
            failures += 1;
            if failures <= 3 {
                detail.push_str(&format!(
                    "{}: {} -> {} -> {}\n",
                    sentence.id,
                    sentence.text(),
                    once.text(),
                    twice.text()
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(10);
    report(
        "3 fm-involution",
        pass,
        elapsed,
        &format!("{failures}/{} sentences failed\n{detail}", corpus.len()),
    );
}

const GENDERED_FORMS: [&str; 8] = [
    "he", "him", "his", "she", "her", "hers", "himself", "herself",
];

/// Independent re-walk of the dependency tree: the finite verbs governed by
/// the subject at `subj` (its head when verbal, plus aux/cop dependents).
fn oracle_agreeing_verbs(sentence: &AnnotatedSentence, subj: usize) -> Vec<usize> {
    let head = sentence.token(subj).unwrap().head;
    let mut verbs = Vec::new();
    if let Some(h) = sentence.token(head) {
        if h.upos == "VERB" || h.upos == "AUX" {
            verbs.push(head);
        }
    }
    for t in &sentence.tokens {
        if t.head == head
            && matches!(t.deprel.as_str(), "aux" | "aux:pass" | "auxpass" | "cop")
            && (t.upos == "VERB" || t.upos == "AUX")
        {
            verbs.push(t.index);
        }
    }
    verbs
}

#[test]
fn criterion_4_st_residue() {
    let start = Instant::now();
    let corpus = common::st_corpus(200);
    let lexicon = Lexicon::builtin();
    // The oracle's notion of third-singular agreement: the irregular forms
    // plus any s-final form that is not an s-stem.
    let third_singular =
        regex::Regex::new(r"^(?i)(is|was|has|does|isn't|wasn't|hasn't|doesn't)$|^.*[^s]s$")
            .unwrap();
    let mut detail = String::new();
    let mut failures = 0usize;
    for sentence in &corpus {
        let evidenced: HashSet<u32> = find_singular_clusters(sentence)
            .into_iter()
            .map(|e| e.cluster_id)
            .collect();
        let plan = plan_st_swap(sentence, lexicon).unwrap();
        let out = apply_plan(sentence, &plan).unwrap();
        for token in &out.tokens {
            if token.coref.is_some_and(|c| evidenced.contains(&c))
                && GENDERED_FORMS.contains(&token.form.to_lowercase().as_str())
            {
                failures += 1;
                detail.push_str(&format!("{}: residue {:?}\n", sentence.id, token.form));
            }
        }
        // Every swapped nominative subject's finite verbs must carry plural
        // agreement, checked by an independent dependency re-walk.
        for (&index, replacement) in &plan.replacements {
            if replacement.kind != SwapKind::Pronoun {
                continue;
            }
            let token = out.token(index).unwrap();
            if !token.deprel.starts_with("nsubj") {
                continue;
            }
            for verb_index in oracle_agreeing_verbs(&out, index) {
                let verb = out.token(verb_index).unwrap();
                let finite = verb.feats.tense().is_some();
                if finite && third_singular.is_match(&verb.form) {
                    failures += 1;
                    detail.push_str(&format!(
                        "{}: verb {:?} still third-singular\n",
                        sentence.id, verb.form
                    ));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(10);
    report(
        "4 st-residue",
        pass,
        elapsed,
        &format!("{failures} violations\n{detail}"),
    );
}

fn count_edits(pairs: &[(Vec<String>, Vec<String>)]) -> usize {
    pairs
        .iter()
        .map(|(src, tgt)| {
            extract_edits(src, tgt)
                .iter()
                .filter(|e| !e.is_noop())
                .count()
        })
        .sum()
}

#[test]
fn criterion_5_consistency_preservation() {
    let start = Instant::now();
    let lexicon = Lexicon::builtin();
    let mut detail = String::new();
    let mut pass = true;
    for (label, pairs, mode) in [
        ("fm", common::fm_parallel_corpus(300), Mode::Fm),
        ("st", common::st_parallel_corpus(300), Mode::St),
    ] {
        let (accepted, discards) = augment_corpus(&pairs, mode, lexicon).unwrap();
        let by_id: std::collections::HashMap<&str, &gecda_core::corpus::ParallelPair> =
            pairs.iter().map(|p| (p.id.as_str(), p)).collect();
        let mut before = Vec::new();
        let mut after = Vec::new();
        for aug in &accepted {
            let orig = by_id[aug.id.as_str()];
            let sig_before = align_tokens(&orig.source.forms(), &orig.target.forms()).signature();
            let sig_after = align_tokens(&aug.source.forms(), &aug.target.forms()).signature();
            if sig_before != sig_after {
                pass = false;
                detail.push_str(&format!(
                    "{label} {}: alignment {sig_before} -> {sig_after}\n",
                    aug.id
                ));
            }
            before.push((orig.source.forms(), orig.target.forms()));
            after.push((aug.source.forms(), aug.target.forms()));
        }
        let edits_before = count_edits(&before);
        let edits_after = count_edits(&after);
        let drift = (edits_after as f64 - edits_before as f64).abs() / edits_before.max(1) as f64;
        if drift >= 0.01 {
            pass = false;
            detail.push_str(&format!(
                "{label}: edit totals {edits_before} -> {edits_after} ({:.2}%)\n",
                drift * 100.0
            ));
        }
        // Sanity: dropped-token pairs must be discarded, and nothing with
        // an injectable error class should vanish silently.
        let discarded: HashSet<&str> = discards.iter().map(|(id, _)| id.as_str()).collect();
        for (i, pair) in pairs.iter().enumerate() {
            if common::injected_error(i).expects_discard() && !discarded.contains(pair.id.as_str())
            {
                pass = false;
                detail.push_str(&format!("{label} {}: expected a discard\n", pair.id));
            }
        }
        if accepted.len() + discards.len() != pairs.len() {
            pass = false;
            detail.push_str(&format!("{label}: pairs were lost\n"));
        }
    }
    let elapsed = start.elapsed();
    let pass = pass && elapsed < Duration::from_secs(30);
    report("5 consistency-preservation", pass, elapsed, &detail);
}

/// Plain Wagner-Fischer edit distance, kept independent of the library's
/// alignment code.
fn oracle_distance(a: &[String], b: &[String]) -> usize {
    let n = a.len();
    let m = b.len();
    let mut dp = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in dp[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = dp[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            dp[i][j] = sub.min(dp[i - 1][j] + 1).min(dp[i][j - 1] + 1);
        }
    }
    dp[n][m]
}

#[test]
fn criterion_6_alignment_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let vocab = ["a", "b", "c", "d"];
    let mut failures = 0usize;
    let mut detail = String::new();
    for case in 0..10_000 {
        let gen = |rng: &mut ChaCha8Rng| -> Vec<String> {
            let len = rng.gen_range(0..=8);
            (0..len)
                .map(|_| vocab[rng.gen_range(0..vocab.len())].to_string())
                .collect()
        };
        let src = gen(&mut rng);
        let tgt = gen(&mut rng);
        let alignment = align_tokens(&src, &tgt);
        let expected = oracle_distance(&src, &tgt);
        let reconstructed = apply_edits(&src, &extract_edits(&src, &tgt));
        if alignment.cost() != expected || reconstructed != tgt {
            failures += 1;
            if failures <= 3 {
                detail.push_str(&format!(
                    "case {case}: {src:?} vs {tgt:?}: cost {} oracle {expected}, reconstructed {reconstructed:?}\n",
                    alignment.cost()
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(60);
    report(
        "6 alignment-oracle",
        pass,
        elapsed,
        &format!("{failures}/10000 failed\n{detail}"),
    );
}

#[test]
fn criterion_7_m2_round_trip() {
    let start = Instant::now();
    let golden = include_str!("fixtures/golden.m2");
    let records = parse_m2(golden).unwrap();
    let emitted = emit_m2(&records);
    let reparsed = parse_m2(&emitted).unwrap();
    let has_noop = records.iter().any(|r| r.edits.iter().any(Edit::is_noop));
    let has_multi = records.iter().any(|r| r.annotators().len() > 1);
    let elapsed = start.elapsed();
    let pass = emitted == golden
        && reparsed == records
        && has_noop
        && has_multi
        && elapsed < Duration::from_secs(1);
    report(
        "7 m2-round-trip",
        pass,
        elapsed,
        &format!("byte-identical: {}", emitted == golden),
    );
}

#[test]
fn criterion_8_explicit_bias_flagger() {
    let start = Instant::now();
    let sources = parse_conllu(include_str!("fixtures/bias/source.conllu")).unwrap();
    let systems: [(&str, &str); 5] = [
        ("system0", include_str!("fixtures/bias/system0.txt")),
        ("system1", include_str!("fixtures/bias/system1.txt")),
        ("system2", include_str!("fixtures/bias/system2.txt")),
        ("system3", include_str!("fixtures/bias/system3.txt")),
        ("system4", include_str!("fixtures/bias/system4.txt")),
    ];
    let expected: [[&[BiasFlag]; 3]; 5] = [
        [
            &[],
            &[BiasFlag::PluralizeCoreferent],
            &[BiasFlag::Misgender],
        ],
        [
            &[BiasFlag::Misgender],
            &[BiasFlag::PluralizeCoreferent],
            &[BiasFlag::Misgender],
        ],
        [&[], &[], &[]],
        [
            &[],
            &[BiasFlag::PluralizeCoreferent],
            &[BiasFlag::Misgender],
        ],
        [&[], &[], &[]],
    ];
    let mut detail = String::new();
    let mut failures = 0usize;
    for ((name, text), expected_rows) in systems.iter().zip(expected.iter()) {
        for ((source, line), want) in sources.iter().zip(text.lines()).zip(expected_rows.iter()) {
            let hyp: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            let flags = flag_explicit_bias(source, &hyp);
            if flags != *want {
                failures += 1;
                detail.push_str(&format!(
                    "{name} {}: got {flags:?}, want {want:?}\n",
                    source.id
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(5);
    report(
        "8 explicit-bias-flagger",
        pass,
        elapsed,
        &format!("{failures}/15 outputs disagreed\n{detail}"),
    );
}

#[test]
fn criterion_9_scorer_sanity() {
    let start = Instant::now();
    let gold = parse_m2(include_str!("fixtures/golden.m2")).unwrap();
    let gold_as_hyp: Vec<Vec<Edit>> = gold
        .iter()
        .map(|r| {
            r.edits_for(r.annotators()[0])
                .into_iter()
                .cloned()
                .collect()
        })
        .collect();
    let self_score = score_against_gold(&gold_as_hyp, &gold).unwrap();

    // Hand-enumerated micro example: sentence 1 matches its gold edit,
    // sentence 2 proposes one spurious edit and misses one gold edit.
    let micro_gold = parse_m2(
        "S I goes .\nA 1 2|||R:VERB:SVA|||go|||REQUIRED|||-NONE-|||0\n\nS He like it\nA 1 2|||R:VERB:SVA|||likes|||REQUIRED|||-NONE-|||0\n",
    )
    .unwrap();
    let micro_hyp = vec![
        vec![Edit::new(1, 2, EditKind::Replacement, "", "go")],
        vec![Edit::new(2, 3, EditKind::Replacement, "", "them")],
    ];
    let micro = score_against_gold(&micro_hyp, &micro_gold).unwrap();
    let micro_ok = micro.true_positives == 1
        && micro.false_positives == 1
        && micro.false_negatives == 1
        && (micro.precision - 0.5).abs() < 1e-12
        && (micro.recall - 0.5).abs() < 1e-12
        && (micro.f05 - 0.5).abs() < 1e-12;

    let elapsed = start.elapsed();
    let pass = self_score.f05 == 1.0 && micro_ok && elapsed < Duration::from_secs(1);
    report(
        "9 scorer-sanity",
        pass,
        elapsed,
        &format!("self-score {}, micro {micro:?}", self_score.f05),
    );
}
