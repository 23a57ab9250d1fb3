use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::emoji::canonical_emoji;
use crate::error::{Error, Result};

/// Lowercased NFC form used for every dictionary-style comparison.
pub fn normalize_term(s: &str) -> String {
    let s: String = s.trim().nfc().collect();
    s.to_lowercase()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// One term per line; blank lines ignored.
pub fn load_word_list(path: &Path) -> Result<HashSet<String>> {
    Ok(lines(&read(path)?)
        .map(|(_, l)| normalize_term(l))
        .collect())
}

/// `word<TAB>lemma` per line (any whitespace or a comma also separates).
pub fn load_lemma_map(path: &Path) -> Result<HashMap<String, String>> {
    let text = read(path)?;
    let mut map = HashMap::new();
    for (line, l) in lines(&text) {
        let mut parts = l
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|p| !p.is_empty());
        match (parts.next(), parts.next(), parts.next()) {
            (Some(w), Some(lemma), None) => {
                map.insert(normalize_term(w), normalize_term(lemma));
            }
            _ => return Err(Error::record(path, line, "expected `word lemma`")),
        }
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Ambiguous,
}

impl std::str::FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "pos" | "positive" => Ok(Polarity::Positive),
            "neg" | "negative" => Ok(Polarity::Negative),
            "amb" | "ambiguous" | "neutral" => Ok(Polarity::Ambiguous),
            other => Err(format!("unknown polarity `{other}`")),
        }
    }
}

/// `emoji<whitespace>polarity` per line.
pub fn load_emoji_polarity(path: &Path) -> Result<HashMap<String, Polarity>> {
    let text = read(path)?;
    let mut map = HashMap::new();
    for (line, l) in lines(&text) {
        let mut parts = l.split_whitespace();
        let (Some(emoji), Some(pol), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::record(path, line, "expected `emoji polarity`"));
        };
        let pol = pol
            .parse()
            .map_err(|m: String| Error::record(path, line, m))?;
        map.insert(canonical_emoji(emoji), pol);
    }
    Ok(map)
}

/// Locations of the lexical resources; any may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LexiconPaths {
    pub dictionary: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub stop_words: Option<PathBuf>,
    pub conjunctions: Option<PathBuf>,
    pub emoji_polarity: Option<PathBuf>,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicons {
    pub dictionary: HashSet<String>,
    pub lemmas: HashMap<String, String>,
    pub stop_words: HashSet<String>,
    pub conjunctions: HashSet<String>,
    pub emoji_polarity: HashMap<String, Polarity>,
}

impl Lexicons {
    pub fn load(paths: &LexiconPaths) -> Result<Self> {
        let words = |p: &Option<PathBuf>| p.as_deref().map(load_word_list).transpose();
        Ok(Self {
            dictionary: words(&paths.dictionary)?.unwrap_or_default(),
            lemmas: paths
                .lemmas
                .as_deref()
                .map(load_lemma_map)
                .transpose()?
                .unwrap_or_default(),
            stop_words: words(&paths.stop_words)?.unwrap_or_default(),
            conjunctions: words(&paths.conjunctions)?.unwrap_or_default(),
            emoji_polarity: paths
                .emoji_polarity
                .as_deref()
                .map(load_emoji_polarity)
                .transpose()?
                .unwrap_or_default(),
        })
    }
}
