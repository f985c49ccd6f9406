//! `gecda` — counterfactual gender augmentation and bias evaluation for GEC
//! corpora.
//!
//! Subcommands: `augment` (rewrite a parallel corpus), `evaluate` (score a
//! hypothesis against gold M2), `gap` (original-vs-augmented F0.5 delta),
//! `distribution` (edit-type and category tables), `flag-bias`
//! (explicit-bias flags per sentence), and `check` (validate file formats).
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on internal invariant
//! violations.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gecda_core::annotate::{annotate_document, HeuristicConfig};
use gecda_core::corpus::{
    emit_parallel, parse_conllu, parse_m2, parse_parallel, AnnotatedSentence, Edit, M2Record,
    ParallelPair,
};
use gecda_core::fm_cda::SwapError;
use gecda_core::gec_eval::{
    self, bias_summary, edit_distribution, extract_edits, score_against_gold, EvalReport,
};
use gecda_core::lexicon::Lexicon;
use gecda_core::parallel::{augment_corpus, Mode};

const LEXICON_DIR_ENV: &str = "GECDA_LEXICON_DIR";

#[derive(Parser)]
#[command(
    name = "gecda",
    version,
    about = "Gender counterfactual augmentation and GEC bias evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fm,
    St,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnnotateArg {
    /// Input must already carry POS/dependency/coreference annotations.
    Required,
    /// Fill in annotations with the built-in heuristic annotator.
    Heuristic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Conllu,
    M2,
    Text,
    Parallel,
}

#[derive(Args)]
struct LexiconArgs {
    /// Directory with pronouns.tsv, nouns.tsv and names.tsv; falls back to
    /// $GECDA_LEXICON_DIR, then to the built-in demo lexicon.
    #[arg(long)]
    lexicon_dir: Option<PathBuf>,
}

impl LexiconArgs {
    fn load(&self) -> Result<Lexicon> {
        let dir = self
            .lexicon_dir
            .clone()
            .or_else(|| std::env::var_os(LEXICON_DIR_ENV).map(PathBuf::from));
        match dir {
            Some(dir) => Lexicon::load(
                &dir.join("pronouns.tsv"),
                &dir.join("nouns.tsv"),
                &dir.join("names.tsv"),
            )
            .with_context(|| format!("loading lexicon from {}", dir.display())),
            None => Ok(Lexicon::builtin().clone()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Augment a parallel corpus with gender counterfactuals.
    Augment {
        /// fm = masculine<->feminine swap, st = singular-they rewrite.
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Parallel corpus (annotated blocks, or source<TAB>target lines
        /// with --format text).
        #[arg(long)]
        input: PathBuf,
        /// Augmented corpus destination.
        #[arg(long)]
        output: PathBuf,
        /// Discard log destination (default: <output>.discards.tsv).
        #[arg(long)]
        discard_log: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "required")]
        annotate: AnnotateArg,
        /// Input format: conllu (annotated parallel blocks) or text
        /// (source<TAB>target token lines).
        #[arg(long, value_enum, default_value = "conllu")]
        format: FormatArg,
        /// Seed for deterministic sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Augment a random sample of this many pairs instead of all.
        #[arg(long)]
        sample_n: Option<usize>,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
    /// Score a hypothesis against a gold M2 file.
    Evaluate {
        /// Hypothesis corrections: tokenized text (one sentence per line)
        /// or an M2 file with --format m2.
        #[arg(long)]
        hypothesis: PathBuf,
        /// Gold annotations in M2 format.
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Write the report as TSV (also printed to stdout).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// F0.5 gap between an original test set and its augmented twin.
    Gap {
        /// Report TSV produced by `evaluate` for the original set.
        #[arg(long, requires = "aug_report", conflicts_with_all = ["orig_hypothesis", "aug_hypothesis", "orig_gold", "aug_gold"])]
        orig_report: Option<PathBuf>,
        /// Report TSV produced by `evaluate` for the augmented set.
        #[arg(long)]
        aug_report: Option<PathBuf>,
        /// Hypothesis on the original set (scored on the fly).
        #[arg(long, requires_all = ["orig_gold", "aug_hypothesis", "aug_gold"])]
        orig_hypothesis: Option<PathBuf>,
        #[arg(long)]
        orig_gold: Option<PathBuf>,
        #[arg(long)]
        aug_hypothesis: Option<PathBuf>,
        #[arg(long)]
        aug_gold: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Edit-type and error-category distribution of an M2 file.
    Distribution {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Flag explicit bias in system output on singular-they sentences.
    FlagBias {
        /// Annotated source sentences (CoNLL-U with coreference).
        #[arg(long)]
        source: PathBuf,
        /// System output, one tokenized sentence per line.
        #[arg(long)]
        hypothesis: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Validate an input file without producing output.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: FormatArg,
    },
}

/// Input problems exit 1; violated internal invariants exit 2.
enum CliError {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        match err.downcast_ref::<SwapError>() {
            Some(SwapError::Discarded(_)) | Some(SwapError::IndexOutOfRange(_)) => {
                CliError::Internal(err)
            }
            _ => CliError::Input(err),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(err)) => {
            eprintln!("internal error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Augment {
            mode,
            input,
            output,
            discard_log,
            annotate,
            format,
            seed,
            sample_n,
            lexicon,
        } => cmd_augment(
            mode,
            &input,
            &output,
            discard_log.as_deref(),
            annotate,
            format,
            seed,
            sample_n,
            &lexicon,
        ),
        Command::Evaluate {
            hypothesis,
            gold,
            format,
            output,
        } => {
            let report = evaluate_files(&hypothesis, &gold, format)?;
            let rendered = render_report(&report);
            print!("{rendered}");
            if let Some(path) = output {
                write_out(&path, &rendered)?;
            }
            Ok(())
        }
        Command::Gap {
            orig_report,
            aug_report,
            orig_hypothesis,
            orig_gold,
            aug_hypothesis,
            aug_gold,
            format,
        } => cmd_gap(
            orig_report,
            aug_report,
            orig_hypothesis,
            orig_gold,
            aug_hypothesis,
            aug_gold,
            format,
        ),
        Command::Distribution { input, output } => {
            let records = parse_m2(&read(&input)?).context("parsing M2 input")?;
            let rendered = render_distribution(&records);
            print!("{rendered}");
            if let Some(path) = output {
                write_out(&path, &rendered)?;
            }
            Ok(())
        }
        Command::FlagBias {
            source,
            hypothesis,
            output,
        } => cmd_flag_bias(&source, &hypothesis, output.as_deref()),
        Command::Check { input, format } => cmd_check(&input, format),
    }
}

fn parse_text_pairs(text: &str) -> Result<Vec<(Vec<String>, Vec<String>)>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let Some((src, tgt)) = line.split_once('\t') else {
            bail!("line {}: expected source<TAB>target", i + 1);
        };
        pairs.push((
            src.split_whitespace().map(str::to_string).collect(),
            tgt.split_whitespace().map(str::to_string).collect(),
        ));
    }
    Ok(pairs)
}

fn lacks_annotations(sentence: &AnnotatedSentence) -> bool {
    sentence.tokens.iter().all(|t| t.upos == "_")
}

#[allow(clippy::too_many_arguments)]
fn cmd_augment(
    mode: ModeArg,
    input: &Path,
    output: &Path,
    discard_log: Option<&Path>,
    annotate: AnnotateArg,
    format: FormatArg,
    seed: u64,
    sample_n: Option<usize>,
    lexicon_args: &LexiconArgs,
) -> Result<(), CliError> {
    let lexicon = lexicon_args.load()?;
    let text = read(input)?;
    let heuristic = HeuristicConfig::default();

    let mut pairs: Vec<ParallelPair> = match format {
        FormatArg::Conllu | FormatArg::Parallel => {
            let mut pairs = parse_parallel(&text).context("parsing parallel corpus")?;
            for pair in &mut pairs {
                for side in [&mut pair.source, &mut pair.target] {
                    if lacks_annotations(side) {
                        match annotate {
                            AnnotateArg::Heuristic => {
                                let forms = side.forms();
                                let mut fresh = annotate_document(&[forms], &heuristic).remove(0);
                                fresh.id = side.id.clone();
                                fresh.doc_id = side.doc_id.clone();
                                *side = fresh;
                            }
                            AnnotateArg::Required => {
                                return Err(anyhow!(
                                    "pair {}: sentence carries no annotations; pass --annotate heuristic or annotate the corpus",
                                    pair.id
                                )
                                .into());
                            }
                        }
                    } else if annotate == AnnotateArg::Heuristic && !side.has_coref() {
                        // POS/dependency layers present but no clusters:
                        // fill in coreference only.
                        gecda_core::annotate::heuristic_coref(
                            std::slice::from_mut(side),
                            &heuristic,
                        );
                    }
                }
            }
            pairs
        }
        FormatArg::Text => {
            if annotate == AnnotateArg::Required {
                return Err(
                    anyhow!("--format text has no annotations; pass --annotate heuristic").into(),
                );
            }
            let raw = parse_text_pairs(&text)?;
            raw.into_iter()
                .enumerate()
                .map(|(i, (src, tgt))| {
                    let mut source = annotate_document(&[src], &heuristic).remove(0);
                    let mut target = annotate_document(&[tgt], &heuristic).remove(0);
                    source.id = format!("{}-src", i + 1);
                    target.id = format!("{}-tgt", i + 1);
                    ParallelPair {
                        id: (i + 1).to_string(),
                        doc_id: None,
                        source,
                        target,
                    }
                })
                .collect()
        }
        FormatArg::M2 => {
            return Err(anyhow!("augment does not read M2 input").into());
        }
    };

    if let Some(n) = sample_n {
        if n > pairs.len() {
            return Err(anyhow!("--sample-n {} exceeds corpus size {}", n, pairs.len()).into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = rand::seq::index::sample(&mut rng, pairs.len(), n).into_vec();
        chosen.sort_unstable();
        let keep: HashSet<usize> = chosen.into_iter().collect();
        pairs = pairs
            .into_iter()
            .enumerate()
            .filter(|(i, _)| keep.contains(i))
            .map(|(_, p)| p)
            .collect();
    }

    let mode = match mode {
        ModeArg::Fm => Mode::Fm,
        ModeArg::St => Mode::St,
    };
    let (accepted, discards) =
        augment_corpus(&pairs, mode, &lexicon).map_err(|e| CliError::from(anyhow!(e)))?;

    write_out(output, &emit_parallel(&accepted))?;
    let mut log = String::new();
    for (id, reason) in &discards {
        let _ = writeln!(log, "{id}\t{reason}");
    }
    let default_log = output.with_extension("discards.tsv");
    write_out(discard_log.unwrap_or(&default_log), &log)?;
    eprintln!(
        "augmented {} pairs, discarded {}",
        accepted.len(),
        discards.len()
    );
    Ok(())
}

fn hypothesis_edits(
    hypothesis: &Path,
    gold: &[M2Record],
    format: FormatArg,
) -> Result<Vec<Vec<Edit>>> {
    match format {
        FormatArg::Text | FormatArg::Conllu | FormatArg::Parallel => {
            let text = read(hypothesis)?;
            let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
            if lines.len() != gold.len() {
                bail!(
                    "hypothesis has {} sentences but gold has {}",
                    lines.len(),
                    gold.len()
                );
            }
            Ok(lines
                .iter()
                .zip(gold.iter())
                .map(|(line, record)| {
                    let hyp_tokens: Vec<String> =
                        line.split_whitespace().map(str::to_string).collect();
                    extract_edits(&record.original_tokens, &hyp_tokens)
                })
                .collect())
        }
        FormatArg::M2 => {
            let records = parse_m2(&read(hypothesis)?).context("parsing hypothesis M2")?;
            if records.len() != gold.len() {
                bail!(
                    "hypothesis has {} sentences but gold has {}",
                    records.len(),
                    gold.len()
                );
            }
            for (i, (h, g)) in records.iter().zip(gold.iter()).enumerate() {
                if h.original_tokens != g.original_tokens {
                    bail!("sentence {}: hypothesis and gold originals differ", i + 1);
                }
            }
            Ok(records
                .iter()
                .map(|r| r.edits.iter().filter(|e| !e.is_noop()).cloned().collect())
                .collect())
        }
    }
}

fn evaluate_files(hypothesis: &Path, gold_path: &Path, format: FormatArg) -> Result<EvalReport> {
    let gold = parse_m2(&read(gold_path)?).context("parsing gold M2")?;
    let hyp = hypothesis_edits(hypothesis, &gold, format)?;
    Ok(score_against_gold(&hyp, &gold)?)
}

fn render_report(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tp\t{}", report.true_positives);
    let _ = writeln!(out, "fp\t{}", report.false_positives);
    let _ = writeln!(out, "fn\t{}", report.false_negatives);
    let _ = writeln!(out, "precision\t{:.6}", report.precision);
    let _ = writeln!(out, "recall\t{:.6}", report.recall);
    let _ = writeln!(out, "f05\t{:.6}", report.f05);
    out
}

/// Read a report TSV. Full reports carry tp/fp/fn counts; hand-written
/// ones may instead carry precision/recall (F0.5 derived) or a bare f05
/// line, so published scores can be fed straight into `gap`.
fn parse_report_tsv(path: &Path) -> Result<EvalReport> {
    let text = read(path)?;
    let mut counts: [Option<usize>; 3] = [None; 3];
    let mut precision = None;
    let mut recall = None;
    let mut f05 = None;
    for line in text.lines() {
        if let Some((key, value)) = line.split_once('\t') {
            let value = value.trim();
            match key {
                "tp" => counts[0] = value.parse().ok(),
                "fp" => counts[1] = value.parse().ok(),
                "fn" => counts[2] = value.parse().ok(),
                "precision" => precision = value.parse::<f64>().ok(),
                "recall" => recall = value.parse::<f64>().ok(),
                "f05" => f05 = value.parse::<f64>().ok(),
                _ => {}
            }
        }
    }
    if let [Some(tp), Some(fp), Some(fn_)] = counts {
        return Ok(EvalReport::from_counts(tp, fp, fn_));
    }
    let (precision, recall, f05) = match (precision, recall, f05) {
        (Some(p), Some(r), f) => {
            let f = match f {
                Some(f) => f,
                None => gec_eval::f_beta(p, r, 0.5)?,
            };
            (p, r, f)
        }
        (_, _, Some(f)) => (0.0, 0.0, f),
        _ => bail!(
            "{}: not an evaluate report (needs tp/fp/fn or precision/recall/f05 lines)",
            path.display()
        ),
    };
    Ok(EvalReport {
        true_positives: 0,
        false_positives: 0,
        false_negatives: 0,
        precision,
        recall,
        f05,
    })
}

fn cmd_gap(
    orig_report: Option<PathBuf>,
    aug_report: Option<PathBuf>,
    orig_hypothesis: Option<PathBuf>,
    orig_gold: Option<PathBuf>,
    aug_hypothesis: Option<PathBuf>,
    aug_gold: Option<PathBuf>,
    format: FormatArg,
) -> Result<(), CliError> {
    let (orig, aug) = match (orig_report, aug_report) {
        (Some(o), Some(a)) => (parse_report_tsv(&o)?, parse_report_tsv(&a)?),
        (None, None) => match (orig_hypothesis, orig_gold, aug_hypothesis, aug_gold) {
            (Some(oh), Some(og), Some(ah), Some(ag)) => (
                evaluate_files(&oh, &og, format)?,
                evaluate_files(&ah, &ag, format)?,
            ),
            _ => {
                return Err(anyhow!(
                    "gap needs either --orig-report/--aug-report or all four hypothesis/gold paths"
                )
                .into())
            }
        },
        _ => {
            return Err(anyhow!("--orig-report and --aug-report must be given together").into());
        }
    };
    let gap = gec_eval::gap_report(&orig, &aug);
    println!("f05_orig_pp\t{:.2}", gap.f05_orig * 100.0);
    println!("f05_aug_pp\t{:.2}", gap.f05_aug * 100.0);
    println!("delta_pp\t{:.2}", gap.delta * 100.0);
    Ok(())
}

fn render_distribution(records: &[M2Record]) -> String {
    let dist = edit_distribution(records);
    let mut out = String::new();
    let _ = writeln!(out, "edit_type\tcount\tshare");
    for (kind, count, share) in &dist.rows {
        let _ = writeln!(out, "{}\t{}\t{:.1}", kind.letter(), count, share);
    }
    let _ = writeln!(out, "total\t{}\t100.0", dist.total);
    let categories = gec_eval::category_distribution(records);
    if !categories.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "error_category\tcount\tshare");
        for (cat, count, share) in &categories {
            let _ = writeln!(out, "{cat}\t{count}\t{share:.1}");
        }
    }
    out
}

fn cmd_flag_bias(source: &Path, hypothesis: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let sources = parse_conllu(&read(source)?).context("parsing annotated source")?;
    let text = read(hypothesis)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() != sources.len() {
        return Err(anyhow!(
            "hypothesis has {} sentences but source has {}",
            lines.len(),
            sources.len()
        )
        .into());
    }
    let mut per_sentence = Vec::new();
    let mut rendered = String::new();
    let _ = writeln!(rendered, "sent_id\tflags");
    for (sentence, line) in sources.iter().zip(lines.iter()) {
        let hyp: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        let flags = gec_eval::flag_explicit_bias(sentence, &hyp);
        let label = if flags.is_empty() {
            "-".to_string()
        } else {
            flags.iter().map(|f| f.name()).collect::<Vec<_>>().join(",")
        };
        let id = if sentence.id.is_empty() {
            (per_sentence.len() + 1).to_string()
        } else {
            sentence.id.clone()
        };
        let _ = writeln!(rendered, "{id}\t{label}");
        per_sentence.push(flags);
    }
    let summary = bias_summary(&per_sentence);
    let _ = writeln!(rendered, "# flagged\t{}", summary.flagged);
    let _ = writeln!(
        rendered,
        "# flagged_excluding_reflexive\t{}",
        summary.flagged_excluding_reflexive
    );
    print!("{rendered}");
    if let Some(path) = output {
        write_out(path, &rendered)?;
    }
    Ok(())
}

fn cmd_check(input: &Path, format: FormatArg) -> Result<(), CliError> {
    let text = read(input)?;
    match format {
        FormatArg::Conllu => {
            let sentences = parse_conllu(&text).context("invalid CoNLL-U")?;
            println!("ok: {} sentences", sentences.len());
        }
        FormatArg::Parallel => {
            let pairs = parse_parallel(&text).context("invalid parallel corpus")?;
            println!("ok: {} pairs", pairs.len());
        }
        FormatArg::M2 => {
            let records = parse_m2(&text).context("invalid M2")?;
            println!("ok: {} records", records.len());
        }
        FormatArg::Text => {
            let lines = text.lines().filter(|l| !l.trim().is_empty()).count();
            println!("ok: {lines} lines");
        }
    }
    Ok(())
}
