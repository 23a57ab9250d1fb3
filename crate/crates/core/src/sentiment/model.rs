use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::label::{LabeledExample, SentimentLabel};
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    NaiveBayes,
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub kind: ModelKind,
    /// Additive (Laplace) smoothing for naive Bayes.
    pub smoothing: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            kind: ModelKind::NaiveBayes,
            smoothing: 1.0,
            learning_rate: 0.1,
            epochs: 300,
            l2: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Params {
    NaiveBayes {
        smoothing: f64,
        /// `log P(word | class)`, indexed `[class][feature]`.
        log_likelihood: Vec<Vec<f64>>,
    },
    Logistic {
        /// Indexed `[class][feature]`.
        weights: Vec<Vec<f64>>,
        bias: Vec<f64>,
        learning_rate: f64,
        epochs: usize,
        l2: f64,
    },
}

/// Bag-of-words sentiment classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentModel {
    pub format_version: u32,
    pub kind: ModelKind,
    pub classes: Vec<SentimentLabel>,
    pub vocabulary: BTreeMap<String, usize>,
    /// Log of the (weighted) class frequencies in the training data.
    pub log_priors: Vec<f64>,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: SentimentLabel,
    /// Posterior-style scores aligned with the model's classes; sum to 1.
    pub scores: Vec<f64>,
    /// No token was in the vocabulary; the label is the prior argmax.
    pub fallback: bool,
}

impl Prediction {
    pub fn confidence(&self) -> f64 {
        self.scores.iter().copied().fold(0.0, f64::max)
    }
}

/// Sparse bag-of-words: `(feature, count)` sorted by feature.
pub(crate) type Features = Vec<(usize, f64)>;

pub(crate) fn featurize(vocab: &BTreeMap<String, usize>, tokens: &[String]) -> Features {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for t in tokens {
        if let Some(&i) = vocab.get(t) {
            *counts.entry(i).or_default() += 1.0;
        }
    }
    counts.into_iter().collect()
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / z).collect()
}

/// First index holding the maximum, so ties go to the earlier class.
fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Training examples in a canonical order so the fitted parameters do not
/// depend on input order.
fn canonical_order(data: &[LabeledExample]) -> Vec<&LabeledExample> {
    let mut refs: Vec<&LabeledExample> = data.iter().collect();
    refs.sort_by(|a, b| {
        a.label
            .cmp(&b.label)
            .then_with(|| a.tokens.cmp(&b.tokens))
            .then_with(|| a.weight.total_cmp(&b.weight))
    });
    refs
}

/// Dense view of a training set for the logistic objective.
#[derive(Debug, Clone)]
pub struct LogisticProblem {
    pub n_classes: usize,
    pub n_features: usize,
    pub(crate) rows: Vec<Features>,
    pub(crate) targets: Vec<usize>,
    pub(crate) weights: Vec<f64>,
    pub l2: f64,
}

impl LogisticProblem {
    pub fn new(
        n_classes: usize,
        n_features: usize,
        rows: Vec<Vec<(usize, f64)>>,
        targets: Vec<usize>,
        weights: Vec<f64>,
        l2: f64,
    ) -> Self {
        Self {
            n_classes,
            n_features,
            rows,
            targets,
            weights,
            l2,
        }
    }

    /// Weighted mean cross-entropy plus `l2/2 · ‖W‖²` (bias unpenalized),
    /// with its gradient. Parameters are laid out class by class as
    /// `[w_c0 .. w_cF, b_c]`.
    pub fn loss_and_gradient(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let stride = self.n_features + 1;
        let total_w: f64 = self.weights.iter().sum();
        let mut grad = vec![0.0; theta.len()];
        let mut loss = 0.0;
        for ((x, &y), &w) in self.rows.iter().zip(&self.targets).zip(&self.weights) {
            let z: Vec<f64> = (0..self.n_classes)
                .map(|c| {
                    let base = c * stride;
                    theta[base + self.n_features]
                        + x.iter().map(|&(j, v)| theta[base + j] * v).sum::<f64>()
                })
                .collect();
            let p = softmax(&z);
            let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
            loss += w * (lse - z[y]);
            for c in 0..self.n_classes {
                let d = w * (p[c] - if c == y { 1.0 } else { 0.0 });
                let base = c * stride;
                for &(j, v) in x {
                    grad[base + j] += d * v;
                }
                grad[base + self.n_features] += d;
            }
        }
        loss /= total_w;
        grad.iter_mut().for_each(|g| *g /= total_w);
        for c in 0..self.n_classes {
            let base = c * stride;
            for j in 0..self.n_features {
                loss += 0.5 * self.l2 * theta[base + j].powi(2);
                grad[base + j] += self.l2 * theta[base + j];
            }
        }
        (loss, grad)
    }
}

impl SentimentModel {
    /// Fits a classifier over `classes` (in that order). Every class must
    /// have at least one example and every example must carry one of them.
    pub fn train(
        data: &[LabeledExample],
        classes: &[SentimentLabel],
        cfg: &TrainConfig,
    ) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Config("no classes requested".into()));
        }
        for ex in data {
            if !classes.contains(&ex.label) {
                return Err(Error::Data(format!(
                    "example labelled `{}` outside model classes",
                    ex.label
                )));
            }
            if !(ex.weight > 0.0 && ex.weight.is_finite()) {
                return Err(Error::Data(format!(
                    "example weight {} is not positive",
                    ex.weight
                )));
            }
        }
        if let Some(missing) = classes
            .iter()
            .find(|c| !data.iter().any(|e| e.label == **c))
        {
            return Err(Error::MissingClass(missing.to_string()));
        }
        let data = canonical_order(data);
        let vocabulary: BTreeMap<String, usize> = data
            .iter()
            .flat_map(|e| e.tokens.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let target = |l: SentimentLabel| classes.iter().position(|c| *c == l).unwrap();

        let mut class_weight = vec![0.0; classes.len()];
        for e in &data {
            class_weight[target(e.label)] += e.weight;
        }
        let total: f64 = class_weight.iter().sum();
        let log_priors: Vec<f64> = class_weight.iter().map(|w| (w / total).ln()).collect();

        let rows: Vec<Features> = data
            .iter()
            .map(|e| featurize(&vocabulary, &e.tokens))
            .collect();
        let v = vocabulary.len();
        let params = match cfg.kind {
            ModelKind::NaiveBayes => {
                if !(cfg.smoothing > 0.0) {
                    return Err(Error::Config("smoothing must be positive".into()));
                }
                let mut counts = vec![vec![0.0; v]; classes.len()];
                for (e, x) in data.iter().zip(&rows) {
                    let c = target(e.label);
                    for &(j, n) in x {
                        counts[c][j] += e.weight * n;
                    }
                }
                let log_likelihood = counts
                    .iter()
                    .map(|row| {
                        let denom = (row.iter().sum::<f64>() + cfg.smoothing * v as f64).ln();
                        row.iter()
                            .map(|n| (n + cfg.smoothing).ln() - denom)
                            .collect()
                    })
                    .collect();
                Params::NaiveBayes {
                    smoothing: cfg.smoothing,
                    log_likelihood,
                }
            }
            ModelKind::Logistic => {
                let problem = LogisticProblem::new(
                    classes.len(),
                    v,
                    rows,
                    data.iter().map(|e| target(e.label)).collect(),
                    data.iter().map(|e| e.weight).collect(),
                    cfg.l2,
                );
                let mut theta = vec![0.0; classes.len() * (v + 1)];
                for _ in 0..cfg.epochs {
                    let (_, grad) = problem.loss_and_gradient(&theta);
                    theta
                        .iter_mut()
                        .zip(&grad)
                        .for_each(|(t, g)| *t -= cfg.learning_rate * g);
                }
                if theta.iter().any(|t| !t.is_finite()) {
                    return Err(Error::Numerical("logistic weights diverged".into()));
                }
                let (weights, bias) = theta.chunks(v + 1).map(|c| (c[..v].to_vec(), c[v])).unzip();
                Params::Logistic {
                    weights,
                    bias,
                    learning_rate: cfg.learning_rate,
                    epochs: cfg.epochs,
                    l2: cfg.l2,
                }
            }
        };
        Ok(Self {
            format_version: MODEL_FORMAT_VERSION,
            kind: cfg.kind,
            classes: classes.to_vec(),
            vocabulary,
            log_priors,
            params,
        })
    }

    pub fn predict(&self, tokens: &[String]) -> Prediction {
        let x = featurize(&self.vocabulary, tokens);
        if x.is_empty() {
            let scores = softmax(&self.log_priors);
            return Prediction {
                label: self.classes[argmax(&scores)],
                scores,
                fallback: true,
            };
        }
        let raw: Vec<f64> = match &self.params {
            Params::NaiveBayes { log_likelihood, .. } => self
                .log_priors
                .iter()
                .zip(log_likelihood)
                .map(|(p, ll)| p + x.iter().map(|&(j, n)| n * ll[j]).sum::<f64>())
                .collect(),
            Params::Logistic { weights, bias, .. } => weights
                .iter()
                .zip(bias)
                .map(|(w, b)| b + x.iter().map(|&(j, n)| n * w[j]).sum::<f64>())
                .collect(),
        };
        let scores = softmax(&raw);
        Prediction {
            label: self.classes[argmax(&scores)],
            scores,
            fallback: false,
        }
    }

    pub fn is_binary_capable(&self) -> bool {
        self.classes.contains(&SentimentLabel::Negative)
            && self.classes.contains(&SentimentLabel::Positive)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self).map_err(|e| Error::Data(e.to_string()))
    }

    pub fn read_json<R: Read>(input: R) -> Result<Self> {
        let model: Self =
            serde_json::from_reader(input).map_err(|e| Error::Data(format!("model file: {e}")))?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Data(format!(
                "model format version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                model.format_version
            )));
        }
        Ok(model)
    }
}
