use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::label::{LabeledExample, SentimentLabel};
use super::model::{SentimentModel, TrainConfig};
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PseudoLabelConfig {
    /// Share of the pool that is labelled; the subset is a seeded sample.
    pub fraction: f64,
    /// Optional minimum winning score. Off by default.
    pub min_confidence: Option<f64>,
    pub seed: u64,
}

impl Default for PseudoLabelConfig {
    fn default() -> Self {
        Self {
            fraction: 1.0,
            min_confidence: None,
            seed: 0,
        }
    }
}

/// Labels pool items with the model's predictions. Items predicted
/// neutral, items with no known token, and (when configured) low-confidence
/// items are left out.
pub fn pseudo_label(
    model: &SentimentModel,
    pool: &[Vec<String>],
    cfg: &PseudoLabelConfig,
) -> Result<Vec<LabeledExample>> {
    if !model.is_binary_capable() {
        return Err(Error::Data(
            "pseudo-labelling needs a model that predicts negative and positive".into(),
        ));
    }
    let chosen: Vec<usize> = if cfg.fraction >= 1.0 {
        (0..pool.len()).collect()
    } else {
        let take = ((pool.len() as f64) * cfg.fraction.max(0.0)).ceil() as usize;
        let mut ix = sample(&mut ChaCha8Rng::seed_from_u64(cfg.seed), pool.len(), take).into_vec();
        ix.sort_unstable();
        ix
    };
    let predictions = par::map(&chosen, |&i| model.predict(&pool[i]));
    Ok(chosen
        .iter()
        .zip(predictions)
        .filter(|(_, p)| !p.fallback && p.label != SentimentLabel::Neutral)
        .filter(|(_, p)| cfg.min_confidence.is_none_or(|t| p.confidence() >= t))
        .map(|(&i, p)| LabeledExample::new(pool[i].clone(), p.label))
        .collect())
}

/// Original examples followed by the pseudo-labelled ones.
pub fn augment(original: &[LabeledExample], pseudo: &[LabeledExample]) -> Vec<LabeledExample> {
    original.iter().chain(pseudo).cloned().collect()
}

#[derive(Debug, Clone)]
pub struct SelfTrained {
    pub base: SentimentModel,
    pub model: SentimentModel,
    pub pseudo: Vec<LabeledExample>,
}

/// Train on `labeled`, pseudo-label `pool`, retrain on the union.
pub fn self_train(
    labeled: &[LabeledExample],
    pool: &[Vec<String>],
    classes: &[SentimentLabel],
    train: &TrainConfig,
    cfg: &PseudoLabelConfig,
) -> Result<SelfTrained> {
    let base = SentimentModel::train(labeled, classes, train)?;
    let pseudo = pseudo_label(&base, pool, cfg)?;
    let model = SentimentModel::train(&augment(labeled, &pseudo), classes, train)?;
    Ok(SelfTrained {
        base,
        model,
        pseudo,
    })
}
