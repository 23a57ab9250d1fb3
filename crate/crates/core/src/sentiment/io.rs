//! CSV adapters: labelled training text and per-post predictions.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::label::SentimentLabel;
use crate::error::{Error, Result};

fn open_csv(path: &Path) -> Result<(csv::Reader<File>, csv::StringRecord)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr
        .headers()
        .map_err(|e| Error::record(path, 1, e.to_string()))?
        .clone();
    Ok((rdr, headers))
}

fn column(headers: &csv::StringRecord, path: &Path, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::record(path, 1, format!("missing `{name}` column")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainingRecord {
    pub id: String,
    pub label: SentimentLabel,
    pub text: String,
}

/// Reads `id,label,text`. An unknown label aborts with its line number.
pub fn load_training_csv(path: &Path) -> Result<Vec<TrainingRecord>> {
    let (mut rdr, headers) = open_csv(path)?;
    let (ci, cl, ct) = (
        column(&headers, path, "id")?,
        column(&headers, path, "label")?,
        column(&headers, path, "text")?,
    );
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::record(path, line, e.to_string()))?;
        let label = rec
            .get(cl)
            .unwrap_or("")
            .parse()
            .map_err(|m: String| Error::record(path, line, m))?;
        out.push(TrainingRecord {
            id: rec.get(ci).unwrap_or("").to_string(),
            label,
            text: rec.get(ct).unwrap_or("").to_string(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImportedPredictions {
    pub labels: BTreeMap<String, SentimentLabel>,
    /// Rows whose id is not among the known posts.
    pub unknown_ids: usize,
}

/// Reads `id,label` predictions produced by an external model. When
/// `known` is given, rows for other ids are dropped and counted. Unknown
/// labels and repeated ids abort with the offending line number.
pub fn import_external_predictions(
    path: &Path,
    known: Option<&HashSet<String>>,
) -> Result<ImportedPredictions> {
    let (mut rdr, headers) = open_csv(path)?;
    let (ci, cl) = (
        column(&headers, path, "id")?,
        column(&headers, path, "label")?,
    );
    let mut out = ImportedPredictions::default();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::record(path, line, e.to_string()))?;
        let id = rec.get(ci).unwrap_or("").trim().to_string();
        let label: SentimentLabel = rec
            .get(cl)
            .unwrap_or("")
            .parse()
            .map_err(|m: String| Error::record(path, line, m))?;
        if id.is_empty() {
            return Err(Error::record(path, line, "empty id"));
        }
        if known.is_some_and(|k| !k.contains(&id)) {
            out.unknown_ids += 1;
            continue;
        }
        if out.labels.insert(id.clone(), label).is_some() {
            return Err(Error::record(path, line, format!("duplicate id `{id}`")));
        }
    }
    Ok(out)
}

/// Writes `id,label` rows in the given order.
pub fn write_predictions<'a, W, I>(rows: I, out: W) -> csv::Result<()>
where
    W: Write,
    I: IntoIterator<Item = (&'a str, SentimentLabel)>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "label"])?;
    for (id, label) in rows {
        w.write_record([id, label.as_str()])?;
    }
    w.flush()?;
    Ok(())
}
