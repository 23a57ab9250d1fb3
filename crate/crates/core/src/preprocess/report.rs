use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use super::clean::HASHTAG;
use super::emoji::emojis;
use super::lexicon::Polarity;
use crate::corpus::RawPost;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyRow {
    pub item: String,
    pub count: u64,
    pub share: f64,
}

/// Item frequencies sorted by count (descending) then item (ascending).
/// `total` always counts every occurrence, also after truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub rows: Vec<FrequencyRow>,
    pub total: u64,
}

impl FrequencyReport {
    pub fn from_counts(counts: HashMap<String, u64>) -> Self {
        let total: u64 = counts.values().sum();
        let mut rows: Vec<FrequencyRow> = counts
            .into_iter()
            .map(|(item, count)| FrequencyRow {
                share: count as f64 / total as f64,
                item,
                count,
            })
            .collect();
        rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.item.cmp(&b.item)));
        Self { rows, total }
    }

    pub fn top(&self, k: usize) -> Self {
        Self {
            rows: self.rows.iter().take(k).cloned().collect(),
            total: self.total,
        }
    }

    pub fn get(&self, item: &str) -> Option<&FrequencyRow> {
        self.rows.iter().find(|r| r.item == item)
    }

    /// CSV `item,count,share`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["item", "count", "share"])?;
        for r in &self.rows {
            w.write_record([r.item.clone(), r.count.to_string(), r.share.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Lowercased hashtag bodies (without `#`) in order of appearance.
pub fn hashtags(text: &str) -> Vec<String> {
    let text: String = text.nfc().collect();
    HASHTAG
        .captures_iter(&text)
        .map(|c| c[1].to_lowercase())
        .collect()
}

pub fn hashtag_report(posts: &[RawPost]) -> FrequencyReport {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for p in posts {
        for h in hashtags(&p.text) {
            *counts.entry(h).or_default() += 1;
        }
    }
    FrequencyReport::from_counts(counts)
}

pub fn emoji_report(posts: &[RawPost]) -> FrequencyReport {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for p in posts {
        let text: String = p.text.nfc().collect();
        for e in emojis(&text) {
            *counts.entry(e).or_default() += 1;
        }
    }
    FrequencyReport::from_counts(counts)
}

/// Emojis with an unambiguous polarity whose corpus share is at least
/// `min_share`.
pub fn select_emoji_whitelist(
    posts: &[RawPost],
    polarity: &HashMap<String, Polarity>,
    min_share: f64,
) -> BTreeSet<String> {
    emoji_report(posts)
        .rows
        .into_iter()
        .filter(|r| r.share >= min_share)
        .filter(|r| {
            matches!(
                polarity.get(&r.item),
                Some(Polarity::Positive | Polarity::Negative)
            )
        })
        .map(|r| r.item)
        .collect()
}
