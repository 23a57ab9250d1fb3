//! Intermediate and output files inside the output directory.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::{DateTime, Utc};
use geosent::corpus::RawPost;
use geosent::preprocess::{RejectReason, Removed};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::ConfigError;

pub const RESOLVED_POSTS: &str = "posts_resolved.jsonl";
pub const REGION_COUNTS: &str = "region_counts.csv";
pub const INGEST_SUMMARY: &str = "ingest.json";
pub const CLEAN_POSTS: &str = "posts_clean.jsonl";
pub const CLEAN_SUMMARY: &str = "clean.json";
pub const EMOJI_WHITELIST: &str = "emoji_whitelist.txt";
pub const HASHTAGS: &str = "hashtags.csv";
pub const EMOJIS: &str = "emojis.csv";
pub const MODEL: &str = "model.json";
pub const TRAINING_SUMMARY: &str = "training.json";
pub const PREDICTIONS: &str = "predictions.csv";
pub const CLASSIFY_SUMMARY: &str = "classify.json";
pub const IMPORT_SUMMARY: &str = "import.json";
pub const REGION_SENTIMENT: &str = "region_sentiment.csv";
pub const AGGREGATE_SUMMARY: &str = "aggregate.json";
pub const SHIFT_TESTS: &str = "shift_tests.csv";
pub const SHIFT_REGRESSION: &str = "shift_regression.csv";
pub const SHIFT_SUMMARY: &str = "shift_summary.json";
pub const REGRESSION: &str = "regression.csv";
pub const REGRESSION_TABLE: &str = "regression.txt";
pub const STEPWISE: &str = "stepwise.csv";
pub const STEPWISE_TRACE: &str = "stepwise_trace.csv";
pub const STEPWISE_TABLE: &str = "stepwise.txt";
pub const SUMMARY: &str = "summary.md";

/// A located post with its resolved region.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolvedPost {
    #[serde(flatten)]
    pub post: RawPost,
    pub region_id: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CleanRecord {
    pub id: String,
    pub region_id: Option<String>,
    pub timestamp: DateTime<Utc>,
    pub tokens: Vec<String>,
    pub kept_emojis: Vec<String>,
    pub removed: Removed,
    pub rejected: Option<RejectReason>,
}

impl CleanRecord {
    /// Tokens followed by kept emojis, the classifier's input.
    pub fn features(&self) -> Vec<String> {
        self.tokens
            .iter()
            .chain(&self.kept_emojis)
            .cloned()
            .collect()
    }
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Path of an intermediate an earlier stage must have produced.
    pub fn input(&self, name: &str, producer: &str) -> Result<PathBuf> {
        let p = self.path(name);
        if !p.is_file() {
            return Err(ConfigError(format!(
                "missing intermediate {}; run `geosent {producer}` first",
                p.display()
            ))
            .into());
        }
        Ok(p)
    }

    pub fn create(&self, name: &str) -> Result<BufWriter<File>> {
        let p = self.path(name);
        let f = File::create(&p).with_context(|| format!("cannot write {}", p.display()))?;
        Ok(BufWriter::new(f))
    }

    pub fn write_with<F>(&self, name: &str, f: F) -> Result<()>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<()>,
    {
        let mut w = self.create(name)?;
        f(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        self.write_with(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            writeln!(w)?;
            Ok(())
        })
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<()> {
        self.write_with(name, |w| Ok(w.write_all(text.as_bytes())?))
    }

    pub fn write_jsonl<T: Serialize>(&self, name: &str, rows: &[T]) -> Result<()> {
        self.write_with(name, |w| {
            for r in rows {
                serde_json::to_writer(&mut *w, r)?;
                writeln!(w)?;
            }
            Ok(())
        })
    }
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let f = File::open(path).map_err(|e| geosent::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| geosent::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line).map_err(|e| geosent::Error::Record {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(row);
    }
    Ok(out)
}

pub fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}
