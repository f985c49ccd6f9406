//! Benchmarks for alignment, edit extraction, and pair augmentation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use gecda_bench::synthetic_corpus;
use gecda_core::gec_eval::extract_edits;
use gecda_core::lexicon::Lexicon;
use gecda_core::parallel::{align_tokens, augment_corpus, Mode};

fn bench_align(c: &mut Criterion) {
    let corpus = synthetic_corpus(64);
    c.bench_function("align_tokens 64 pairs", |b| {
        b.iter(|| {
            for pair in &corpus {
                black_box(align_tokens(&pair.source.forms(), &pair.target.forms()));
            }
        })
    });
}

fn bench_extract(c: &mut Criterion) {
    let corpus = synthetic_corpus(64);
    c.bench_function("extract_edits 64 pairs", |b| {
        b.iter(|| {
            for pair in &corpus {
                black_box(extract_edits(&pair.source.forms(), &pair.target.forms()));
            }
        })
    });
}

fn bench_augment(c: &mut Criterion) {
    let corpus = synthetic_corpus(64);
    let lexicon = Lexicon::builtin();
    c.bench_function("augment_corpus fm 64 pairs", |b| {
        b.iter(|| black_box(augment_corpus(&corpus, Mode::Fm, lexicon).unwrap()))
    });
    c.bench_function("augment_corpus st 64 pairs", |b| {
        b.iter(|| black_box(augment_corpus(&corpus, Mode::St, lexicon).unwrap()))
    });
}

criterion_group!(benches, bench_align, bench_extract, bench_augment);
criterion_main!(benches);
