//! Per-region sentiment aggregation around an event date and tests for a
//! before/after shift in the positive share.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::sentiment::SentimentLabel;
use crate::stats::{chi2_sf, ols, DesignMatrix, OlsFit};

pub const DEFAULT_MIN_POSTS: usize = 100;
pub const FLAG_NAME: &str = "after_event";

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedPost {
    pub region_id: Option<String>,
    pub timestamp: DateTime<Utc>,
    pub label: SentimentLabel,
}

/// Which period posts dated on the event day fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventDay {
    #[default]
    Before,
    After,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateConfig {
    pub event_date: NaiveDate,
    /// Regions need strictly more posts than this to be included.
    pub min_posts: usize,
    pub event_day: EventDay,
}

impl AggregateConfig {
    pub fn new(event_date: NaiveDate) -> Self {
        Self {
            event_date,
            min_posts: DEFAULT_MIN_POSTS,
            event_day: EventDay::Before,
        }
    }

    fn is_before(&self, ts: &DateTime<Utc>) -> bool {
        let day = ts.date_naive();
        match self.event_day {
            EventDay::Before => day <= self.event_date,
            EventDay::After => day < self.event_date,
        }
    }
}

/// Period × polarity counts: rows before/after, columns positive/negative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoByTwo {
    pub pos_before: u64,
    pub neg_before: u64,
    pub pos_after: u64,
    pub neg_after: u64,
}

impl TwoByTwo {
    pub fn total(&self) -> u64 {
        self.pos_before + self.neg_before + self.pos_after + self.neg_after
    }

    pub fn swap_rows(self) -> Self {
        Self {
            pos_before: self.pos_after,
            neg_before: self.neg_after,
            pos_after: self.pos_before,
            neg_after: self.neg_before,
        }
    }

    pub fn transpose(self) -> Self {
        Self {
            pos_before: self.pos_before,
            neg_before: self.pos_after,
            pos_after: self.neg_before,
            neg_after: self.neg_after,
        }
    }

    /// Pearson statistic without continuity correction; `None` when a
    /// margin is zero.
    pub fn chi2(&self) -> Option<f64> {
        let (a, b, c, d) = (
            self.pos_before as f64,
            self.neg_before as f64,
            self.pos_after as f64,
            self.neg_after as f64,
        );
        let margins = [a + b, c + d, a + c, b + d];
        if margins.contains(&0.0) {
            return None;
        }
        let n = a + b + c + d;
        let cross = a * d - b * c;
        Some(n * cross * cross / margins.iter().product::<f64>())
    }
}

impl std::ops::Add for TwoByTwo {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            pos_before: self.pos_before + o.pos_before,
            neg_before: self.neg_before + o.neg_before,
            pos_after: self.pos_after + o.pos_after,
            neg_after: self.neg_after + o.neg_after,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSentiment {
    pub region_id: String,
    pub n_pos_before: u64,
    pub n_neg_before: u64,
    pub n_pos_after: u64,
    pub n_neg_after: u64,
    /// Positive share over both periods.
    pub mean_sentiment: f64,
    pub included: bool,
}

impl RegionSentiment {
    pub fn from_counts(region_id: impl Into<String>, t: TwoByTwo, min_posts: usize) -> Self {
        let total = t.total();
        Self {
            region_id: region_id.into(),
            n_pos_before: t.pos_before,
            n_neg_before: t.neg_before,
            n_pos_after: t.pos_after,
            n_neg_after: t.neg_after,
            mean_sentiment: if total > 0 {
                (t.pos_before + t.pos_after) as f64 / total as f64
            } else {
                0.0
            },
            included: total > min_posts as u64,
        }
    }

    pub fn table(&self) -> TwoByTwo {
        TwoByTwo {
            pos_before: self.n_pos_before,
            neg_before: self.n_neg_before,
            pos_after: self.n_pos_after,
            neg_after: self.n_neg_after,
        }
    }

    pub fn total(&self) -> u64 {
        self.table().total()
    }

    pub fn mean_before(&self) -> Option<f64> {
        share(self.n_pos_before, self.n_neg_before)
    }

    pub fn mean_after(&self) -> Option<f64> {
        share(self.n_pos_after, self.n_neg_after)
    }
}

fn share(pos: u64, neg: u64) -> Option<f64> {
    (pos + neg > 0).then(|| pos as f64 / (pos + neg) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregation {
    /// Sorted by region id.
    pub regions: Vec<RegionSentiment>,
    pub unresolved: usize,
}

impl Aggregation {
    pub fn included(&self) -> impl Iterator<Item = &RegionSentiment> {
        self.regions.iter().filter(|r| r.included)
    }
}

/// Counts positive/negative posts per region and period. Labels must be
/// binary; posts without a region are counted and skipped.
pub fn aggregate(posts: &[ClassifiedPost], cfg: &AggregateConfig) -> Result<Aggregation> {
    let mut tables: BTreeMap<&str, TwoByTwo> = BTreeMap::new();
    let mut unresolved = 0;
    for p in posts {
        let Some(region) = p.region_id.as_deref() else {
            unresolved += 1;
            continue;
        };
        let positive = match p.label {
            SentimentLabel::Positive => true,
            SentimentLabel::Negative => false,
            SentimentLabel::Neutral => {
                return Err(Error::Data(
                    "aggregation needs binary labels, got neutral".into(),
                ))
            }
        };
        let t = tables.entry(region).or_default();
        match (cfg.is_before(&p.timestamp), positive) {
            (true, true) => t.pos_before += 1,
            (true, false) => t.neg_before += 1,
            (false, true) => t.pos_after += 1,
            (false, false) => t.neg_after += 1,
        }
    }
    Ok(Aggregation {
        regions: tables
            .into_iter()
            .map(|(id, t)| RegionSentiment::from_counts(id, t, cfg.min_posts))
            .collect(),
        unresolved,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Scope {
    Global,
    Region(String),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Global => f.write_str("global"),
            Scope::Region(r) => f.write_str(r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftTestResult {
    pub scope: Scope,
    pub chi2: f64,
    pub df: u32,
    pub p_value: f64,
    pub alpha: f64,
    /// A zero margin made the statistic undefined; reported as chi2 = 0, p = 1.
    pub degenerate: bool,
}

impl ShiftTestResult {
    pub fn significant(&self) -> bool {
        self.p_value < self.alpha
    }
}

/// Chi-square test of equal positive share before and after the event.
pub fn shift_test(table: TwoByTwo, scope: Scope, alpha: f64) -> ShiftTestResult {
    let (chi2, p_value, degenerate) = match table.chi2() {
        Some(x) => (x, chi2_sf(x, 1.0), false),
        None => (0.0, 1.0, true),
    };
    ShiftTestResult {
        scope,
        chi2,
        df: 1,
        p_value,
        alpha,
        degenerate,
    }
}

/// One test per included region, in input order.
pub fn region_shift_tests(regions: &[RegionSentiment], alpha: f64) -> Vec<ShiftTestResult> {
    let included: Vec<&RegionSentiment> = regions.iter().filter(|r| r.included).collect();
    par::map(&included, |r| {
        shift_test(r.table(), Scope::Region(r.region_id.clone()), alpha)
    })
}

/// Test on counts pooled over every region given.
pub fn global_shift_test(regions: &[RegionSentiment], alpha: f64) -> ShiftTestResult {
    let pooled = regions
        .iter()
        .map(|r| r.table())
        .fold(TwoByTwo::default(), |a, b| a + b);
    shift_test(pooled, Scope::Global, alpha)
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftRegression {
    pub fit: OlsFit,
    pub regions: usize,
    /// Region periods with no posts, which contribute no observation.
    pub empty_periods: usize,
}

/// OLS of per-period mean sentiment on an intercept and an after-event
/// flag, using each included region's before and after means.
pub fn shift_regression(regions: &[RegionSentiment]) -> Result<ShiftRegression> {
    let included: Vec<&RegionSentiment> = regions.iter().filter(|r| r.included).collect();
    if included.len() < 2 {
        return Err(Error::Data(format!(
            "shift regression needs at least 2 included regions, got {}",
            included.len()
        )));
    }
    let mut y = Vec::with_capacity(2 * included.len());
    let mut flag = Vec::with_capacity(2 * included.len());
    let mut empty_periods = 0;
    for r in &included {
        for (mean, f) in [(r.mean_before(), 0.0), (r.mean_after(), 1.0)] {
            match mean {
                Some(m) => {
                    y.push(m);
                    flag.push(f);
                }
                None => empty_periods += 1,
            }
        }
    }
    let d = DesignMatrix::new(vec![FLAG_NAME.to_string()], vec![flag], y)?;
    Ok(ShiftRegression {
        fit: ols(&d)?,
        regions: included.len(),
        empty_periods,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftSummary {
    pub alpha: f64,
    pub tested: usize,
    pub significant: Vec<String>,
}

pub fn shift_summary(results: &[ShiftTestResult], alpha: f64) -> ShiftSummary {
    ShiftSummary {
        alpha,
        tested: results.len(),
        significant: results
            .iter()
            .filter(|r| r.p_value < alpha)
            .map(|r| r.scope.to_string())
            .collect(),
    }
}

/// CSV `region_id,n_pos_before,n_neg_before,n_pos_after,n_neg_after,
/// mean_sentiment,included,chi2,p`. Test columns are blank for regions
/// without a result.
pub fn write_region_csv<W: Write>(
    regions: &[RegionSentiment],
    tests: &[ShiftTestResult],
    out: W,
) -> csv::Result<()> {
    let by_region: BTreeMap<String, &ShiftTestResult> =
        tests.iter().map(|t| (t.scope.to_string(), t)).collect();
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "region_id",
        "n_pos_before",
        "n_neg_before",
        "n_pos_after",
        "n_neg_after",
        "mean_sentiment",
        "included",
        "chi2",
        "p",
    ])?;
    for r in regions {
        let t = by_region.get(&r.region_id);
        w.write_record([
            r.region_id.clone(),
            r.n_pos_before.to_string(),
            r.n_neg_before.to_string(),
            r.n_pos_after.to_string(),
            r.n_neg_after.to_string(),
            r.mean_sentiment.to_string(),
            r.included.to_string(),
            t.map(|t| t.chi2.to_string()).unwrap_or_default(),
            t.map(|t| t.p_value.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the file written by [`write_region_csv`], recomputing the mean and
/// applying `min_posts` afresh.
pub fn read_region_csv(path: &std::path::Path, min_posts: usize) -> Result<Vec<RegionSentiment>> {
    #[derive(Deserialize)]
    struct Row {
        region_id: String,
        n_pos_before: u64,
        n_neg_before: u64,
        n_pos_after: u64,
        n_neg_after: u64,
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::record(path, 1, format!("{other:?}")),
    })?;
    rdr.deserialize::<Row>()
        .enumerate()
        .map(|(i, row)| {
            let row = row.map_err(|e| Error::record(path, i + 2, e.to_string()))?;
            Ok(RegionSentiment::from_counts(
                row.region_id,
                TwoByTwo {
                    pos_before: row.n_pos_before,
                    neg_before: row.n_neg_before,
                    pos_after: row.n_pos_after,
                    neg_after: row.n_neg_after,
                },
                min_posts,
            ))
        })
        .collect()
}
