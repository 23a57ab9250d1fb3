//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p geosent-cli --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use chrono::{NaiveDate, TimeZone, Utc};
use common::text::{closed_config, fuzz_text};
use common::*;
use geosent::corpus::RawPost;
use geosent::preprocess::{clean_corpus, clean_text, hashtag_report, RejectReason};
use geosent::regional::{
    aggregate, shift_test, AggregateConfig, ClassifiedPost, RegionSentiment, Scope, TwoByTwo,
};
use geosent::sentiment::{
    augment, evaluate, pseudo_label, self_train, LabeledExample, LogisticProblem, ModelKind,
    PseudoLabelConfig, SentimentLabel, SentimentModel, TrainConfig,
};
use geosent::stats::{
    chi2_sf, ols, standardize, stepwise, student_t_sf, DesignMatrix, Direction, Move, Start,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use SentimentLabel::*;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: f64, detail: String) -> Outcome {
    let secs = elapsed.as_secs_f64();
    check(
        secs < limit,
        format!("{detail}; {secs:.2} s (limit {limit} s)"),
    )
}

fn ols_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_orth = 0.0f64;
    for seed in 0..100 {
        let mut rng = rng(10_000 + seed);
        let k = rng.random_range(1..=10);
        let n = rng.random_range(k + 5..=200);
        let (names, cols, y) = random_instance(&mut rng, n, k);
        let fit =
            ols(&DesignMatrix::new(names, cols.clone(), y.clone()).map_err(|e| e.to_string())?)
                .map_err(|e| format!("seed {seed}: {e}"))?;
        let o = ols_normal(&cols, &y);
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        for i in 0..=k {
            worst = worst
                .max(rel(fit.beta[i], o.beta[i]))
                .max(rel(fit.se[i], o.se[i]))
                .max(rel(fit.t[i], o.t[i]));
        }
        worst = worst.max(rel(fit.r2, o.r2));
        let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut xtr = vec![fit.residuals.iter().sum::<f64>()];
        xtr.extend(cols.iter().map(|c| {
            c.iter()
                .zip(&fit.residuals)
                .map(|(x, r)| x * r)
                .sum::<f64>()
        }));
        worst_orth = worst_orth.max(xtr.iter().map(|v| v * v).sum::<f64>().sqrt() / y_norm);
    }
    let detail = format!("max rel diff {worst:.1e}, max |X'r|/|y| {worst_orth:.1e}");
    if worst > 1e-8 || worst_orth > 1e-8 {
        return Err(detail);
    }
    within(start.elapsed(), 5.0, detail)
}

fn stepwise_exhaustive() -> Outcome {
    let start = Instant::now();
    let mut top3 = 0;
    for seed in 0..100 {
        let mut rng = rng(20_000 + seed);
        let k = rng.random_range(2..=12);
        let n = rng.random_range(40..=200);
        let (names, cols, y) = random_instance(&mut rng, n, k);
        let d =
            DesignMatrix::new(names.clone(), cols.clone(), y.clone()).map_err(|e| e.to_string())?;
        let res =
            stepwise(&d, Direction::Both, Start::Full).map_err(|e| format!("seed {seed}: {e}"))?;
        let (_, trace) = brute_force_stepwise(&names, &cols, &y);
        let same = res.trace.len() == trace.len()
            && res.trace.iter().zip(&trace).all(|(g, w)| {
                (g.action == Move::Add) == w.add
                    && g.name == w.name
                    && rel_close(g.aic, w.aic, 1e-9)
            });
        if !same {
            return Err(format!("seed {seed}: trace differs from brute force"));
        }
        let better = all_subset_aics(&cols, &y)
            .iter()
            .filter(|a| **a < res.fit.aic - 1e-9)
            .count();
        top3 += (better < 3) as usize;
    }
    if top3 < 95 {
        return Err(format!("traces match; top-3 in {top3}/100 (need 95)"));
    }
    within(
        start.elapsed(),
        60.0,
        format!("traces match; top-3 in {top3}/100"),
    )
}

fn distributions() -> Outcome {
    let p = chi2_sf(0.477, 1.0);
    let q = chi2_sf(3.841, 1.0);
    let t_ok = [1.0, 5.0, 30.0, 125.0]
        .iter()
        .all(|df| student_t_sf(0.0, *df) == 0.5);
    check(
        (0.488..=0.492).contains(&p) && (q - 0.05).abs() <= 0.0005 && t_ok,
        format!("chi2_sf(0.477,1) = {p:.4}, chi2_sf(3.841,1) = {q:.5}, t_sf(0) exact: {t_ok}"),
    )
}

const MODEL_2: [(&str, f64); 5] = [
    ("sentiment", -0.0133),
    ("urbanization", -0.0439),
    ("divorces", -0.0278),
    ("migration_balance", -0.0459),
    ("median_age", -0.0208),
];
const NULL_FEATURES: [&str; 5] = [
    "unemployment",
    "salary",
    "higher_education",
    "medium_education",
    "city_rights",
];

fn table6_instance(rng: &mut ChaCha8Rng) -> DesignMatrix {
    let n = 126;
    let signal_var: f64 = MODEL_2.iter().map(|(_, b)| b * b).sum();
    let sigma = (signal_var * 0.49 / 0.51).sqrt();
    let names: Vec<String> = MODEL_2
        .iter()
        .map(|(t, _)| *t)
        .chain(NULL_FEATURES)
        .map(String::from)
        .collect();
    let raw: Vec<Vec<f64>> = (0..names.len())
        .map(|_| (0..n).map(|_| normal(rng)).collect())
        .collect();
    let placeholder = vec![0.0; n];
    let cols = standardize(&DesignMatrix::new(names.clone(), raw, placeholder).unwrap())
        .unwrap()
        .0
        .columns()
        .to_vec();
    let y = (0..n)
        .map(|i| {
            0.4246
                + MODEL_2
                    .iter()
                    .enumerate()
                    .map(|(j, (_, b))| b * cols[j][i])
                    .sum::<f64>()
                + sigma * normal(rng)
        })
        .collect();
    DesignMatrix::new(names, cols, y).unwrap()
}

fn table6_replication() -> Outcome {
    let start = Instant::now();
    let truth: BTreeMap<&str, f64> = [("Intercept", 0.4246)]
        .into_iter()
        .chain(MODEL_2)
        .chain(NULL_FEATURES.map(|t| (t, 0.0)))
        .collect();
    let mut covered: BTreeMap<&str, usize> = truth.keys().map(|t| (*t, 0)).collect();
    let mut exact = 0;
    let mut retained = 0;
    let mut want: Vec<&str> = MODEL_2.iter().map(|(t, _)| *t).collect();
    want.sort();
    for seed in 0..100 {
        let d = table6_instance(&mut rng(40_000 + seed));
        let fit = ols(&d).map_err(|e| e.to_string())?;
        for (term, b) in &truth {
            let i = fit.index(term).unwrap();
            *covered.get_mut(term).unwrap() +=
                ((fit.beta[i] - b).abs() <= 2.0 * fit.se[i]) as usize;
        }
        let res = stepwise(&d, Direction::Both, Start::Full).map_err(|e| e.to_string())?;
        let mut selected: Vec<&str> = res.selected.iter().map(String::as_str).collect();
        selected.sort();
        exact += (selected == want) as usize;
        retained += want.iter().all(|t| selected.contains(t)) as usize;
    }
    let (worst_term, min_cover) = covered
        .iter()
        .min_by_key(|(_, c)| **c)
        .map(|(t, c)| (*t, *c))
        .unwrap();
    let detail = format!("min per-coefficient 2-SE coverage {min_cover}/100 on {worst_term} (need 90); exact selection {exact}/100 (need 85), all five retained {retained}/100");
    if min_cover < 90 || exact < 85 {
        return Err(detail);
    }
    within(start.elapsed(), 30.0, detail)
}

fn dummy_regression() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let mut rng = rng(50_000 + seed);
        let n = rng.random_range(10..300);
        let flag: Vec<f64> = (0..n).map(|i| (i % 2) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| 0.5 + 0.1 * normal(&mut rng)).collect();
        let mean = |f: f64| {
            let v: Vec<f64> = y
                .iter()
                .zip(&flag)
                .filter(|(_, g)| **g == f)
                .map(|(y, _)| *y)
                .collect();
            v.iter().sum::<f64>() / v.len() as f64
        };
        let fit =
            ols(&DesignMatrix::new(vec!["after".into()], vec![flag.clone()], y.clone()).unwrap())
                .map_err(|e| e.to_string())?;
        worst = worst.max((fit.beta[1] - (mean(1.0) - mean(0.0))).abs());
    }
    let mut insignificant = 0;
    for seed in 0..100 {
        let mut rng = rng(51_000 + seed);
        let flag: Vec<f64> = (0..252).map(|i| (i >= 126) as u8 as f64).collect();
        let y = (0..252).map(|_| 0.4724 + 0.09 * normal(&mut rng)).collect();
        let fit = ols(&DesignMatrix::new(vec!["after".into()], vec![flag], y).unwrap())
            .map_err(|e| e.to_string())?;
        insignificant += (fit.p[1] >= 0.05) as usize;
    }
    check(
        worst <= 1e-12 && insignificant >= 90,
        format!(
            "max |beta - mean diff| {worst:.1e}; null flag insignificant in {insignificant}/100"
        ),
    )
}

fn chi_square() -> Outcome {
    let mut rng = rng(60_000);
    let mut worst_sym = 0.0f64;
    let mut worst_z = 0.0f64;
    for _ in 0..200 {
        let t = TwoByTwo {
            pos_before: rng.random_range(1..500),
            neg_before: rng.random_range(1..500),
            pos_after: rng.random_range(1..500),
            neg_after: rng.random_range(1..500),
        };
        let x = t.chi2().unwrap();
        for o in [t.swap_rows(), t.transpose()] {
            worst_sym = worst_sym.max((o.chi2().unwrap() - x).abs() / x.max(1.0));
        }
        let z2 = two_proportion_z2(
            t.pos_before as f64,
            t.neg_before as f64,
            t.pos_after as f64,
            t.neg_after as f64,
        );
        worst_z = worst_z.max((x - z2).abs() / x.max(1.0));
    }
    let balanced = shift_test(
        TwoByTwo {
            pos_before: 25,
            neg_before: 25,
            pos_after: 25,
            neg_after: 25,
        },
        Scope::Global,
        0.05,
    );
    check(
        worst_sym <= 1e-10 && worst_z <= 1e-10 && balanced.chi2 == 0.0 && balanced.p_value == 1.0,
        format!(
            "symmetry {worst_sym:.1e}, z² {worst_z:.1e}, balanced chi2 = {} p = {}",
            balanced.chi2, balanced.p_value
        ),
    )
}

fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn classifier() -> Outcome {
    let data = [
        LabeledExample::new(toks("good great"), Positive),
        LabeledExample::new(toks("bad"), Negative),
    ];
    let m = SentimentModel::train(&data, &SentimentLabel::BINARY, &TrainConfig::default())
        .map_err(|e| e.to_string())?;
    let p = m.predict(&toks("good bad"));
    let nb_err = (p.scores[0] - 25.0 / 41.0)
        .abs()
        .max((p.scores[1] - 16.0 / 41.0).abs());

    let mut worst_fd = 0.0f64;
    for seed in 0..20 {
        let mut rng = rng(70_000 + seed);
        let classes = rng.random_range(2..=3);
        let features = rng.random_range(1..6);
        let n = rng.random_range(3..15);
        let rows: Vec<Vec<(usize, f64)>> = (0..n)
            .map(|_| {
                let mut row = Vec::new();
                for j in 0..features {
                    if rng.random_bool(0.6) {
                        row.push((j, rng.random_range(1..4) as f64));
                    }
                }
                row
            })
            .collect();
        let targets = (0..n).map(|_| rng.random_range(0..classes)).collect();
        let weights = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let problem = LogisticProblem::new(classes, features, rows, targets, weights, 0.1);
        let theta: Vec<f64> = (0..classes * (features + 1))
            .map(|_| normal(&mut rng))
            .collect();
        let (_, grad) = problem.loss_and_gradient(&theta);
        let h = 1e-6;
        let mut diff = 0.0;
        for i in 0..theta.len() {
            let (mut up, mut down) = (theta.clone(), theta.clone());
            up[i] += h;
            down[i] -= h;
            let fd =
                (problem.loss_and_gradient(&up).0 - problem.loss_and_gradient(&down).0) / (2.0 * h);
            diff += (grad[i] - fd).powi(2);
        }
        let norm = grad.iter().map(|a| a * a).sum::<f64>().sqrt();
        worst_fd = worst_fd.max(diff.sqrt() / norm);
    }

    let start = Instant::now();
    let mut rng = rng(70_500);
    let pos = ["great", "love", "happy", "win", "bright"];
    let neg = ["awful", "hate", "sad", "lose", "dark"];
    let corpus: Vec<LabeledExample> = (0..200)
        .map(|i| {
            let (words, label) = if i % 2 == 0 {
                (&pos, Positive)
            } else {
                (&neg, Negative)
            };
            LabeledExample::new(
                (0..rng.random_range(2..6))
                    .map(|_| words[rng.random_range(0..5)].to_string())
                    .collect(),
                label,
            )
        })
        .collect();
    let mut worst_acc = 1.0f64;
    for kind in [ModelKind::NaiveBayes, ModelKind::Logistic] {
        let cfg = TrainConfig {
            kind,
            ..TrainConfig::default()
        };
        let m = SentimentModel::train(&corpus, &SentimentLabel::BINARY, &cfg)
            .map_err(|e| e.to_string())?;
        worst_acc = worst_acc.min(evaluate(&m, &corpus).map_err(|e| e.to_string())?.accuracy);
    }
    let detail = format!("NB posterior err {nb_err:.1e}, gradient rel err {worst_fd:.1e}, separable accuracy {worst_acc:.3}");
    if nb_err > 1e-12 || worst_fd > 1e-5 || worst_acc < 0.99 {
        return Err(detail);
    }
    within(start.elapsed(), 5.0, detail)
}

fn draw(rng: &mut ChaCha8Rng) -> LabeledExample {
    let label = if rng.random_bool(0.5) {
        Positive
    } else {
        Negative
    };
    let tokens = (0..8)
        .map(|_| {
            let own_half = rng.random_bool(0.62);
            let offset = if (label == Positive) == own_half {
                0
            } else {
                30
            };
            format!("w{}", offset + rng.random_range(0..30))
        })
        .collect();
    LabeledExample::new(tokens, label)
}

fn sample(seed: u64, n: usize) -> Vec<LabeledExample> {
    let mut rng = rng(seed);
    (0..n).map(|_| draw(&mut rng)).collect()
}

fn pseudo_labelling() -> Outcome {
    let labeled = sample(80_000, 200);
    let held_out = sample(80_001, 500);
    let truth = sample(80_002, 1000);
    let pool: Vec<Vec<String>> = truth.iter().map(|e| e.tokens.clone()).collect();
    let bytes = |d: &[LabeledExample]| serde_json::to_vec(d).unwrap();
    let before = bytes(&labeled);

    let model = SentimentModel::train(&labeled, &SentimentLabel::BINARY, &TrainConfig::default())
        .map_err(|e| e.to_string())?;
    let pseudo =
        pseudo_label(&model, &pool, &PseudoLabelConfig::default()).map_err(|e| e.to_string())?;
    let augmented = augment(&labeled, &pseudo);
    let unchanged = bytes(&labeled) == before && bytes(&augmented[..labeled.len()]) == before;

    let trained = self_train(
        &labeled,
        &pool,
        &SentimentLabel::BINARY,
        &TrainConfig::default(),
        &PseudoLabelConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let accuracy = evaluate(&trained.base, &held_out)
        .map_err(|e| e.to_string())?
        .accuracy;
    let agree = trained
        .pseudo
        .iter()
        .filter(|p| {
            truth
                .iter()
                .any(|t| t.tokens == p.tokens && t.label == p.label)
        })
        .count() as f64
        / trained.pseudo.len() as f64;
    check(
        unchanged && agree >= accuracy - 0.05,
        format!(
            "originals byte-identical: {unchanged}; agreement {agree:.3} vs held-out {accuracy:.3}"
        ),
    )
}

fn post(id: usize, text: String) -> RawPost {
    RawPost {
        id: id.to_string(),
        text,
        timestamp: Utc.with_ymd_and_hms(2019, 10, 10, 12, 0, 0).unwrap(),
        place_name: Some("Krakow".into()),
        language: Some("pl".into()),
    }
}

fn preprocessing() -> Outcome {
    let cfg = closed_config();
    let mut rng = rng(90_000);
    let mut drift = 0;
    for _ in 0..1000 {
        let text = fuzz_text(&mut rng);
        let once = clean_text("f", &text, &cfg);
        let twice = clean_text("f", &once.render(), &cfg);
        drift += (twice.tokens != once.tokens
            || twice.kept_emojis != once.kept_emojis
            || twice.is_accepted() != once.is_accepted()) as usize;
    }

    let words = [
        "dzisiaj", "wybory", "polsce", "bardzo", "fajny", "dzien", "pogoda", "debata",
    ];
    let posts: Vec<RawPost> = (0..1000)
        .map(|i| {
            let mut t: Vec<&str> = (0..6)
                .map(|_| words[rng.random_range(0..words.len())])
                .collect();
            if i < 47 {
                t[rng.random_range(0..6)] = "wybrry";
            }
            post(i, t.join(" "))
        })
        .collect();
    let cleaned = clean_corpus(&posts, &cfg);
    let misspelled = cleaned
        .iter()
        .filter(|c| c.rejected == Some(RejectReason::Misspelled))
        .count();
    let rejected = cleaned.iter().filter(|c| !c.is_accepted()).count() as f64 / posts.len() as f64;

    let mut tags = vec!["SilniRazem".to_string(); 964];
    tags.extend((0..55_410).map(|i| format!("tag{}", i % 61)));
    let tag_posts: Vec<RawPost> = tags
        .chunks(7)
        .enumerate()
        .map(|(i, c)| {
            post(
                i,
                c.iter()
                    .map(|t| format!("#{t}"))
                    .collect::<Vec<_>>()
                    .join(" "),
            )
        })
        .collect();
    let report = hashtag_report(&tag_posts);
    let share = 100.0 * report.rows[0].share;

    let event = NaiveDate::from_ymd_opt(2019, 10, 13).unwrap();
    let mut classified = Vec::new();
    for (region, n) in [("r100", 100), ("r101", 101)] {
        for i in 0..n {
            classified.push(ClassifiedPost {
                region_id: Some(region.to_string()),
                timestamp: Utc
                    .with_ymd_and_hms(2019, 10, if i % 2 == 0 { 10 } else { 15 }, 12, 0, 0)
                    .unwrap(),
                label: if i % 3 == 0 { Negative } else { Positive },
            });
        }
    }
    let agg = aggregate(&classified, &AggregateConfig::new(event)).map_err(|e| e.to_string())?;
    let included: BTreeMap<&str, bool> = agg
        .regions
        .iter()
        .map(|r: &RegionSentiment| (r.region_id.as_str(), r.included))
        .collect();
    let threshold_ok = !included["r100"] && included["r101"];

    check(
        drift == 0 && misspelled == 47 && rejected == 0.047 && (share - 1.71).abs() <= 0.01 && threshold_ok,
        format!(
            "idempotence drift {drift}/1000; rejected {:.1}%; top hashtag {share:.2}%; 100/101 threshold ok: {threshold_ok}",
            100.0 * rejected
        ),
    )
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        files.insert(
            path.strip_prefix(dir).unwrap().to_path_buf(),
            std::fs::read(&path).unwrap(),
        );
    }
    files
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/demo");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_geosent"))
            .arg("--config")
            .arg(root.join("config.toml"))
            .arg("--out")
            .arg(&out)
            .arg("pipeline")
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!(
                "pipeline failed: {}",
                String::from_utf8_lossy(&status.stderr)
            ));
        }
        runs.push(snapshot(&out));
    }
    let files = runs[0].len();
    if runs[0] != runs[1] {
        let differing: Vec<String> = runs[0]
            .iter()
            .filter(|(k, v)| runs[1].get(*k) != Some(v))
            .map(|(k, _)| k.display().to_string())
            .collect();
        return Err(format!("outputs differ: {}", differing.join(", ")));
    }
    within(
        start.elapsed(),
        60.0,
        format!("{files} artifacts byte-identical across two runs"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("OLS matches normal equations", ols_oracle),
        ("stepwise matches exhaustive search", stepwise_exhaustive),
        ("distribution accuracy", distributions),
        ("regional regression replication", table6_replication),
        ("dummy-flag regression", dummy_regression),
        ("chi-square identities", chi_square),
        ("classifier checks", classifier),
        ("pseudo-labelling contract", pseudo_labelling),
        ("preprocessing", preprocessing),
        ("end-to-end determinism", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} {tag} {name}: {detail} [{secs:.2} s]",
            i + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
