use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::label::{LabeledExample, SentimentLabel};
use super::model::SentimentModel;
use crate::error::{Error, Result};
use crate::par;

/// Accuracy and confusion matrix (rows = true class, columns = predicted),
/// both over the model's classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub classes: Vec<SentimentLabel>,
    pub confusion: Vec<Vec<u64>>,
    pub accuracy: f64,
    pub n: u64,
}

impl EvalReport {
    pub fn correct(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.confusion[i][i]).sum()
    }
}

pub fn evaluate(model: &SentimentModel, data: &[LabeledExample]) -> Result<EvalReport> {
    if data.is_empty() {
        return Err(Error::Data("evaluation set is empty".into()));
    }
    let k = model.classes.len();
    let index = |l: SentimentLabel| model.classes.iter().position(|c| *c == l);
    let predicted = par::map(data, |e| model.predict(&e.tokens).label);
    let mut confusion = vec![vec![0u64; k]; k];
    for (e, p) in data.iter().zip(predicted) {
        let t = index(e.label).ok_or_else(|| {
            Error::Data(format!(
                "evaluation label `{}` is not a model class",
                e.label
            ))
        })?;
        confusion[t][index(p).unwrap()] += 1;
    }
    let n = data.len() as u64;
    let correct: u64 = (0..k).map(|i| confusion[i][i]).sum();
    Ok(EvalReport {
        classes: model.classes.clone(),
        confusion,
        accuracy: correct as f64 / n as f64,
        n,
    })
}

/// Accuracy on the data the model saw next to accuracy on unseen data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoldoutReport {
    pub train: EvalReport,
    pub held_out: EvalReport,
}

pub fn evaluate_holdout(
    model: &SentimentModel,
    train: &[LabeledExample],
    held_out: &[LabeledExample],
) -> Result<HoldoutReport> {
    Ok(HoldoutReport {
        train: evaluate(model, train)?,
        held_out: evaluate(model, held_out)?,
    })
}

/// Seeded shuffle, then the first `1 - test_fraction` share is the
/// training part. Both parts keep at least one item when `items.len() >= 2`
/// and `0 < test_fraction < 1`.
pub fn train_test_split<T: Clone>(items: &[T], test_fraction: f64, seed: u64) -> (Vec<T>, Vec<T>) {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n = items.len();
    let mut n_test = (n as f64 * test_fraction.clamp(0.0, 1.0)).round() as usize;
    if n >= 2 && test_fraction > 0.0 && test_fraction < 1.0 {
        n_test = n_test.clamp(1, n - 1);
    }
    let (test, train) = idx.split_at(n_test);
    let pick = |ix: &[usize]| ix.iter().map(|&i| items[i].clone()).collect();
    (pick(train), pick(test))
}
