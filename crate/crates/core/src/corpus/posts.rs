use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One ingested micro-post.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    pub text: String,
    pub timestamp: DateTime<Utc>,
    #[serde(rename = "place")]
    pub place_name: Option<String>,
    #[serde(rename = "lang")]
    pub language: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PostFormat {
    Jsonl,
    Csv,
}

impl PostFormat {
    /// Guess from the file extension; anything other than `.csv` is JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => PostFormat::Csv,
            _ => PostFormat::Jsonl,
        }
    }
}

/// Why records were dropped during ingestion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SkipCounts {
    pub missing_id: usize,
    pub empty_text: usize,
    pub malformed: usize,
    pub duplicate_id: usize,
}

impl SkipCounts {
    pub fn total(&self) -> usize {
        self.missing_id + self.empty_text + self.malformed + self.duplicate_id
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedPosts {
    pub posts: Vec<RawPost>,
    pub skipped: SkipCounts,
}

#[derive(Debug, Deserialize)]
struct RecordIn {
    id: Option<String>,
    text: Option<String>,
    timestamp: Option<String>,
    place: Option<String>,
    lang: Option<String>,
}

fn non_empty(s: Option<String>) -> Option<String> {
    s.filter(|s| !s.trim().is_empty())
}

struct Collector {
    seen: HashSet<String>,
    out: LoadedPosts,
}

impl Collector {
    fn new() -> Self {
        Self {
            seen: HashSet::new(),
            out: LoadedPosts {
                posts: Vec::new(),
                skipped: SkipCounts::default(),
            },
        }
    }

    fn push(&mut self, rec: RecordIn, path: &Path, line: usize) {
        let skipped = &mut self.out.skipped;
        let Some(id) = non_empty(rec.id) else {
            skipped.missing_id += 1;
            return;
        };
        let Some(text) = non_empty(rec.text) else {
            skipped.empty_text += 1;
            return;
        };
        let timestamp = match rec.timestamp.as_deref().map(DateTime::parse_from_rfc3339) {
            Some(Ok(ts)) => ts.with_timezone(&Utc),
            _ => {
                log::warn!("{}:{line}: missing or invalid timestamp", path.display());
                skipped.malformed += 1;
                return;
            }
        };
        if !self.seen.insert(id.clone()) {
            log::warn!("{}:{line}: duplicate id {id}", path.display());
            skipped.duplicate_id += 1;
            return;
        }
        self.out.posts.push(RawPost {
            id,
            text,
            timestamp,
            place_name: non_empty(rec.place),
            language: non_empty(rec.lang),
        });
    }

    fn malformed(&mut self, path: &Path, line: usize, why: impl std::fmt::Display) {
        log::warn!(
            "{}:{line}: skipping malformed record: {why}",
            path.display()
        );
        self.out.skipped.malformed += 1;
    }
}

/// Reads posts from JSON lines or CSV, dropping records without an id or
/// with blank text. Input order is preserved.
pub fn load_posts(path: &Path, format: PostFormat) -> Result<LoadedPosts> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut c = Collector::new();
    match format {
        PostFormat::Jsonl => {
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| Error::io(path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<RecordIn>(&line) {
                    Ok(rec) => c.push(rec, path, i + 1),
                    Err(e) => c.malformed(path, i + 1, e),
                }
            }
        }
        PostFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(file);
            let headers = rdr
                .headers()
                .map_err(|e| Error::record(path, 1, e.to_string()))?
                .clone();
            for required in ["id", "text"] {
                if !headers.iter().any(|h| h == required) {
                    return Err(Error::record(
                        path,
                        1,
                        format!("missing `{required}` column"),
                    ));
                }
            }
            for (i, row) in rdr.records().enumerate() {
                let line = i + 2;
                let rec = row.and_then(|r| r.deserialize::<RecordIn>(Some(&headers)));
                match rec {
                    Ok(rec) => c.push(rec, path, line),
                    Err(e) => c.malformed(path, line, e),
                }
            }
        }
    }
    Ok(c.out)
}

/// Writes posts as JSON lines in the ingestion schema.
pub fn write_posts_jsonl<W: Write>(posts: &[RawPost], mut out: W) -> std::io::Result<()> {
    for p in posts {
        serde_json::to_writer(&mut out, p)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Posts that declare a place and carry the requested language tag
/// (compared ASCII case-insensitively).
pub fn filter_located(posts: &[RawPost], language: &str) -> Vec<RawPost> {
    posts
        .iter()
        .filter(|p| is_located(p, language))
        .cloned()
        .collect()
}

fn is_located(p: &RawPost, language: &str) -> bool {
    p.place_name
        .as_deref()
        .is_some_and(|s| !s.trim().is_empty())
        && p.language
            .as_deref()
            .is_some_and(|l| l.eq_ignore_ascii_case(language))
}
