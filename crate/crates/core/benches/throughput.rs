//! Sequential versus parallel throughput of the data-parallel stages.
//!
//! "sequential" runs inside a one-thread rayon pool, "parallel" on the
//! default pool. Built with `--no-default-features` only the sequential
//! fallback is measured.

use std::collections::HashSet;
use std::hint::black_box;

use chrono::{TimeZone, Utc};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geosent::corpus::RawPost;
use geosent::preprocess::lexicon::Lexicons;
use geosent::preprocess::{clean_corpus, CleanConfig, Steps};
use geosent::sentiment::{evaluate, LabeledExample, SentimentLabel, SentimentModel, TrainConfig};
use geosent::stats::{stepwise, DesignMatrix, Direction, Start};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDS: [&str; 12] = [
    "dzisiaj", "wybory", "polsce", "bardzo", "fajny", "dzien", "pogoda", "debata", "dobry", "zly",
    "kandydat", "prawda",
];

fn posts(n: usize) -> Vec<RawPost> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..n)
        .map(|i| {
            let words: Vec<&str> = (0..rng.random_range(3..15))
                .map(|_| WORDS[rng.random_range(0..WORDS.len())])
                .collect();
            RawPost {
                id: i.to_string(),
                text: format!("@user {} #tag https://x.pl 😀", words.join(" ")),
                timestamp: Utc.with_ymd_and_hms(2019, 10, 10, 0, 0, 0).unwrap(),
                place_name: Some("Krakow".into()),
                language: Some("pl".into()),
            }
        })
        .collect()
}

fn design(n: usize, k: usize) -> DesignMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cols: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let y = (0..n)
        .map(|i| cols[0][i] - 0.5 * cols[1][i] + rng.random_range(-1.0..1.0))
        .collect();
    DesignMatrix::new((0..k).map(|j| format!("x{j}")).collect(), cols, y).unwrap()
}

fn labelled(n: usize) -> Vec<LabeledExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..n)
        .map(|_| {
            let label = if rng.random_bool(0.5) {
                SentimentLabel::Positive
            } else {
                SentimentLabel::Negative
            };
            let tokens = (0..10)
                .map(|_| format!("w{}", rng.random_range(0..500)))
                .collect();
            LabeledExample::new(tokens, label)
        })
        .collect()
}

fn modes() -> Vec<(&'static str, usize)> {
    if geosent::par::is_parallel() {
        vec![("sequential", 1), ("parallel", 0)]
    } else {
        vec![("sequential", 1)]
    }
}

#[cfg(feature = "parallel")]
fn run<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[cfg(not(feature = "parallel"))]
fn run<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

fn throughput(c: &mut Criterion) {
    let corpus = posts(20_000);
    let dictionary: HashSet<String> = WORDS.iter().map(|w| w.to_string()).collect();
    let lexicons = Lexicons {
        dictionary,
        ..Lexicons::default()
    };
    let cfg = CleanConfig::new(Steps::default(), lexicons, ["😀".to_string()].into());
    let d = design(500, 12);
    let data = labelled(20_000);
    let model =
        SentimentModel::train(&data, &SentimentLabel::BINARY, &TrainConfig::default()).unwrap();

    let mut g = c.benchmark_group("throughput");
    g.sample_size(10);
    for (mode, threads) in modes() {
        g.bench_function(BenchmarkId::new("clean_corpus", mode), |b| {
            b.iter(|| run(threads, || black_box(clean_corpus(&corpus, &cfg))))
        });
        g.bench_function(BenchmarkId::new("stepwise", mode), |b| {
            b.iter(|| {
                run(threads, || {
                    black_box(stepwise(&d, Direction::Both, Start::Full).unwrap())
                })
            })
        });
        g.bench_function(BenchmarkId::new("predict", mode), |b| {
            b.iter(|| run(threads, || black_box(evaluate(&model, &data).unwrap())))
        });
    }
    g.finish();
}

criterion_group!(benches, throughput);
criterion_main!(benches);
