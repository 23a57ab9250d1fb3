use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Post polarity. Ordering follows the numeric encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentLabel {
    Negative,
    Neutral,
    Positive,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 3] = [Self::Negative, Self::Neutral, Self::Positive];
    pub const BINARY: [SentimentLabel; 2] = [Self::Negative, Self::Positive];

    /// Negative → 0, Positive → 1; Neutral has no binary code.
    pub fn binary_code(self) -> Option<u8> {
        match self {
            Self::Negative => Some(0),
            Self::Positive => Some(1),
            Self::Neutral => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Negative => "negative",
            Self::Neutral => "neutral",
            Self::Positive => "positive",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "negative" => Ok(Self::Negative),
            "neutral" => Ok(Self::Neutral),
            "positive" => Ok(Self::Positive),
            other => Err(format!("unknown sentiment label `{other}`")),
        }
    }
}

/// Mean of binary codes, i.e. the positive fraction. Neutral labels are
/// skipped; `None` when nothing remains.
pub fn positive_share(labels: &[SentimentLabel]) -> Option<f64> {
    let codes: Vec<u8> = labels.iter().filter_map(|l| l.binary_code()).collect();
    if codes.is_empty() {
        return None;
    }
    Some(codes.iter().map(|&c| c as f64).sum::<f64>() / codes.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub tokens: Vec<String>,
    pub label: SentimentLabel,
    pub weight: f64,
}

impl LabeledExample {
    pub fn new(tokens: Vec<String>, label: SentimentLabel) -> Self {
        Self {
            tokens,
            label,
            weight: 1.0,
        }
    }
}
