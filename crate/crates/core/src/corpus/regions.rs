use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub region_id: String,
    pub population: u64,
    /// Dependent variable, a share in `[0, 1]`.
    pub outcome: f64,
    /// Values aligned with [`RegionTable::feature_names`].
    pub features: Vec<f64>,
}

/// Per-region socio-economic table.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTable {
    pub feature_names: Vec<String>,
    pub rows: Vec<RegionRow>,
}

impl RegionTable {
    pub fn new(feature_names: Vec<String>, rows: Vec<RegionRow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for row in &rows {
            if !seen.insert(row.region_id.as_str()) {
                return Err(Error::Data(format!("duplicate region `{}`", row.region_id)));
            }
            if row.population == 0 {
                return Err(Error::Data(format!(
                    "region `{}` has zero population",
                    row.region_id
                )));
            }
            if !(0.0..=1.0).contains(&row.outcome) {
                return Err(Error::Data(format!(
                    "region `{}` outcome {} outside [0, 1]",
                    row.region_id, row.outcome
                )));
            }
            if row.features.len() != feature_names.len() {
                return Err(Error::Data(format!(
                    "region `{}` has {} features, expected {}",
                    row.region_id,
                    row.features.len(),
                    feature_names.len()
                )));
            }
        }
        Ok(Self {
            feature_names,
            rows,
        })
    }

    /// Loads `region_id,population,outcome,<features...>`. When `schema` is
    /// given every feature column must be listed in it.
    pub fn load(path: &Path, schema: Option<&[String]>) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::record(path, 1, format!("{other:?}")),
        })?;
        let headers = rdr
            .headers()
            .map_err(|e| Error::record(path, 1, e.to_string()))?
            .clone();
        let fixed = ["region_id", "population", "outcome"];
        if headers.len() < 3 || headers.iter().take(3).ne(fixed.iter().copied()) {
            return Err(Error::record(
                path,
                1,
                "header must start with region_id,population,outcome",
            ));
        }
        let feature_names: Vec<String> = headers.iter().skip(3).map(String::from).collect();
        if let Some(schema) = schema {
            if let Some(bad) = feature_names.iter().find(|f| !schema.contains(f)) {
                return Err(Error::record(
                    path,
                    1,
                    format!("feature `{bad}` not in schema"),
                ));
            }
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| Error::record(path, line, e.to_string()))?;
            let num = |j: usize| -> Result<f64> {
                let cell = rec.get(j).unwrap_or("").trim();
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        Error::record(
                            path,
                            line,
                            format!("`{}` is not a number: {cell:?}", &headers[j]),
                        )
                    })
            };
            let population = rec
                .get(1)
                .unwrap_or("")
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::record(path, line, "population must be a positive integer"))?;
            rows.push(RegionRow {
                region_id: rec.get(0).unwrap_or("").trim().to_string(),
                population,
                outcome: num(2)?,
                features: (3..headers.len()).map(num).collect::<Result<_>>()?,
            });
        }
        Self::new(feature_names, rows).map_err(|e| match e {
            Error::Data(m) => Error::record(path, 0, m),
            e => e,
        })
    }

    pub fn get(&self, region_id: &str) -> Option<&RegionRow> {
        self.rows.iter().find(|r| r.region_id == region_id)
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|f| f == name)
    }

    pub fn populations(&self) -> HashMap<String, u64> {
        self.rows
            .iter()
            .map(|r| (r.region_id.clone(), r.population))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCount {
    pub count: usize,
    /// `count / population`; absent when the population is unknown.
    pub weighted: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RegionCounts {
    pub regions: BTreeMap<String, RegionCount>,
    pub unresolved: usize,
}

impl RegionCounts {
    pub fn resolved(&self) -> usize {
        self.regions.values().map(|c| c.count).sum()
    }
}

/// Tallies posts per resolved region; `None` entries are unresolved posts.
pub fn region_counts<'a, I>(resolved: I, populations: &HashMap<String, u64>) -> RegionCounts
where
    I: IntoIterator<Item = Option<&'a str>>,
{
    let mut out = RegionCounts::default();
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for r in resolved {
        match r {
            Some(id) => *tally.entry(id.to_string()).or_default() += 1,
            None => out.unresolved += 1,
        }
    }
    out.regions = tally
        .into_iter()
        .map(|(id, count)| {
            let weighted = populations
                .get(&id)
                .filter(|&&p| p > 0)
                .map(|&p| count as f64 / p as f64);
            (id, RegionCount { count, weighted })
        })
        .collect();
    out
}
