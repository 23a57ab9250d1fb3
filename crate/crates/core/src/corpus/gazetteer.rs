use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    pub place_name: String,
    pub commune: String,
    pub region_id: String,
    pub province: String,
    pub importance: f64,
    pub population: u64,
}

/// Canonical form used for place-name matching: trimmed, NFC, lowercased.
pub fn normalize_place_name(name: &str) -> String {
    let nfc: String = name.trim().nfc().collect();
    nfc.to_lowercase().nfc().collect()
}

/// Outcome of a successful lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution<'a> {
    pub region_id: &'a str,
    /// More than one region shared the top importance score.
    pub tied: bool,
}

/// Place-name index over gazetteer entries.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    entries: Vec<GazetteerEntry>,
    by_name: HashMap<String, Vec<usize>>,
}

impl Gazetteer {
    pub fn new(entries: Vec<GazetteerEntry>) -> Result<Self> {
        let mut by_name: HashMap<String, Vec<usize>> = HashMap::new();
        let mut pairs = HashSet::new();
        for (i, e) in entries.iter().enumerate() {
            if !e.importance.is_finite() || !(0.0..=1.0).contains(&e.importance) {
                return Err(Error::Data(format!(
                    "gazetteer entry `{}` has importance {} outside [0, 1]",
                    e.place_name, e.importance
                )));
            }
            let key = normalize_place_name(&e.place_name);
            if !pairs.insert((key.clone(), e.region_id.clone())) {
                return Err(Error::Data(format!(
                    "gazetteer lists `{}` in region {} twice",
                    e.place_name, e.region_id
                )));
            }
            by_name.entry(key).or_default().push(i);
        }
        Ok(Self { entries, by_name })
    }

    /// Loads `place_name,commune,region_id,province,importance,population`.
    pub fn load(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::record(path, 1, format!("{other:?}")),
        })?;
        let mut entries = Vec::new();
        for (i, row) in rdr.deserialize::<GazetteerEntry>().enumerate() {
            entries.push(row.map_err(|e| Error::record(path, i + 2, e.to_string()))?);
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[GazetteerEntry] {
        &self.entries
    }

    /// Region of the highest-importance entry named `place_name`. Equal
    /// importances resolve to the lexicographically smallest region id.
    pub fn resolve(&self, place_name: &str) -> Option<Resolution<'_>> {
        let candidates = self.by_name.get(&normalize_place_name(place_name))?;
        let top = candidates
            .iter()
            .map(|&i| &self.entries[i])
            .max_by(|a, b| {
                a.importance
                    .total_cmp(&b.importance)
                    .then_with(|| b.region_id.cmp(&a.region_id))
            })?;
        let tied = candidates
            .iter()
            .map(|&i| &self.entries[i])
            .any(|e| e.importance == top.importance && e.region_id != top.region_id);
        if tied {
            log::warn!(
                "place `{place_name}` matches several regions with importance {}; using {}",
                top.importance,
                top.region_id
            );
        }
        Some(Resolution {
            region_id: &top.region_id,
            tied,
        })
    }
}

pub fn resolve_region(place_name: &str, gazetteer: &Gazetteer) -> Option<String> {
    gazetteer
        .resolve(place_name)
        .map(|r| r.region_id.to_string())
}
