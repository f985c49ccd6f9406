//! Shared corpus builders for the pipeline benchmarks.

use gecda_core::annotate::{annotate_document, HeuristicConfig};
use gecda_core::corpus::ParallelPair;

const TEMPLATES: &[(&str, &str)] = &[
    (
        "He go to school every day .",
        "He goes to school every day .",
    ),
    (
        "My friend said she walk home .",
        "My friend said she walks home .",
    ),
    (
        "The actor talked to his brother .",
        "The actor talked to his brother .",
    ),
    (
        "She like playing with her dog .",
        "She likes playing with her dog .",
    ),
    (
        "James said he is a teacher .",
        "James said he is a teacher .",
    ),
    (
        "The student lost her book yesterday .",
        "The student lost her book yesterday .",
    ),
];

/// A deterministic annotated parallel corpus of `n` pairs.
pub fn synthetic_corpus(n: usize) -> Vec<ParallelPair> {
    let config = HeuristicConfig::default();
    (0..n)
        .map(|i| {
            let (src, tgt) = TEMPLATES[i % TEMPLATES.len()];
            let src_tokens: Vec<String> = src.split_whitespace().map(str::to_string).collect();
            let tgt_tokens: Vec<String> = tgt.split_whitespace().map(str::to_string).collect();
            let mut source = annotate_document(&[src_tokens], &config).remove(0);
            let mut target = annotate_document(&[tgt_tokens], &config).remove(0);
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
