use std::collections::{HashMap, HashSet};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::emoji::{segment, Piece};
use super::lexicon::Lexicons;
use crate::corpus::RawPost;
use crate::error::{Error, Result};
use crate::par;

static LINK: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(?:https?://|www\.)\S+").unwrap());
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@\w+").unwrap());
pub(crate) static HASHTAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"#(\w+)").unwrap());

/// Per-step switches. Whitespace collapsing is implicit in tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Steps {
    pub links: bool,
    pub mentions: bool,
    pub hashtags: bool,
    pub emojis: bool,
    pub nonword: bool,
    pub short_posts: bool,
    pub misspellings: bool,
    pub lemmatize: bool,
    pub stop_words: bool,
}

impl Default for Steps {
    fn default() -> Self {
        Self {
            links: true,
            mentions: true,
            hashtags: true,
            emojis: true,
            nonword: true,
            short_posts: true,
            misspellings: true,
            lemmatize: true,
            stop_words: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CleanConfig {
    pub steps: Steps,
    /// Posts with at most this many non-conjunction words are rejected.
    pub max_short_words: usize,
    pub conjunctions: HashSet<String>,
    pub emoji_whitelist: HashSet<String>,
    pub dictionary: HashSet<String>,
    pub lemmas: HashMap<String, String>,
    pub stop_words: HashSet<String>,
}

impl CleanConfig {
    pub fn new(steps: Steps, lexicons: Lexicons, emoji_whitelist: HashSet<String>) -> Self {
        Self {
            steps,
            max_short_words: 3,
            conjunctions: lexicons.conjunctions,
            emoji_whitelist,
            dictionary: lexicons.dictionary,
            lemmas: lexicons.lemmas,
            stop_words: lexicons.stop_words,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.misspellings && self.dictionary.is_empty() {
            return Err(Error::Config(
                "misspelling filter enabled but the dictionary is empty".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removed {
    pub links: usize,
    pub mentions: usize,
    pub hashtags: usize,
    /// Characters stripped by the non-word step.
    pub nonword: usize,
    pub emojis_dropped: usize,
    /// Non-whitespace characters removed by all steps up to tokenization.
    pub chars: usize,
}

impl std::ops::AddAssign for Removed {
    fn add_assign(&mut self, o: Self) {
        self.links += o.links;
        self.mentions += o.mentions;
        self.hashtags += o.hashtags;
        self.nonword += o.nonword;
        self.emojis_dropped += o.emojis_dropped;
        self.chars += o.chars;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    TooShort,
    Misspelled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanPost {
    pub id: String,
    pub tokens: Vec<String>,
    pub kept_emojis: Vec<String>,
    pub removed: Removed,
    pub rejected: Option<RejectReason>,
}

impl CleanPost {
    pub fn is_accepted(&self) -> bool {
        self.rejected.is_none()
    }

    /// Text form of the retained content: tokens, then kept emojis.
    pub fn render(&self) -> String {
        self.tokens
            .iter()
            .chain(&self.kept_emojis)
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpellVerdict {
    Pass,
    Fail,
}

/// Fails when any token is missing from the dictionary.
pub fn spell_gate(tokens: &[String], dictionary: &HashSet<String>) -> SpellVerdict {
    if tokens.iter().all(|t| dictionary.contains(t)) {
        SpellVerdict::Pass
    } else {
        SpellVerdict::Fail
    }
}

/// Replaces each token by its lemma (identity when unmapped), then drops
/// stop words. Either half can be switched off.
pub fn lemmatize_and_stop(
    tokens: &[String],
    lemmas: &HashMap<String, String>,
    stops: &HashSet<String>,
    lemmatize: bool,
    remove_stops: bool,
) -> Vec<String> {
    tokens
        .iter()
        .map(|t| match lemmas.get(t) {
            Some(l) if lemmatize => l.clone(),
            _ => t.clone(),
        })
        .filter(|t| !(remove_stops && stops.contains(t)))
        .collect()
}

fn strip(re: &Regex, text: &str, count: &mut usize, chars: &mut usize) -> String {
    re.replace_all(text, |caps: &regex::Captures<'_>| {
        *count += 1;
        *chars += caps[0].chars().filter(|c| !c.is_whitespace()).count();
        " "
    })
    .into_owned()
}

/// Runs the normalization chain on one post.
///
/// Order: links, mentions, hashtags, emoji filtering, non-word stripping,
/// tokenization (lowercased, whitespace-split), short-post rejection,
/// misspelling rejection, lemmatization, stop-word removal. A rejection
/// ends the chain with empty tokens.
pub fn clean(post: &RawPost, cfg: &CleanConfig) -> CleanPost {
    clean_text(&post.id, &post.text, cfg)
}

pub fn clean_text(id: &str, text: &str, cfg: &CleanConfig) -> CleanPost {
    let steps = cfg.steps;
    let mut removed = Removed::default();
    let mut s: String = text.nfc().collect();

    if steps.links {
        s = strip(&LINK, &s, &mut removed.links, &mut removed.chars);
    }
    if steps.mentions {
        s = strip(&MENTION, &s, &mut removed.mentions, &mut removed.chars);
    }
    if steps.hashtags {
        s = strip(&HASHTAG, &s, &mut removed.hashtags, &mut removed.chars);
    }

    let mut kept_emojis = Vec::new();
    if steps.emojis {
        let mut buf = String::with_capacity(s.len());
        for piece in segment(&s) {
            match piece {
                Piece::Text(t) => buf.push_str(t),
                Piece::Emoji(e, span) => {
                    let len = e.chars().count();
                    if cfg.emoji_whitelist.contains(&e) {
                        removed.chars += span - len;
                        kept_emojis.push(e);
                    } else {
                        removed.emojis_dropped += 1;
                        removed.chars += span;
                    }
                    buf.push(' ');
                }
            }
        }
        s = buf;
    }

    if steps.nonword {
        s = s
            .chars()
            .map(|c| {
                if c.is_alphabetic() || c.is_whitespace() {
                    c
                } else {
                    removed.nonword += 1;
                    removed.chars += 1;
                    ' '
                }
            })
            .collect();
    }

    let tokens: Vec<String> = s.split_whitespace().map(str::to_lowercase).collect();

    let reject = |reason| CleanPost {
        id: id.to_string(),
        tokens: Vec::new(),
        kept_emojis: kept_emojis.clone(),
        removed,
        rejected: Some(reason),
    };
    if steps.short_posts {
        let words = tokens
            .iter()
            .filter(|t| !cfg.conjunctions.contains(*t))
            .count();
        if words <= cfg.max_short_words {
            return reject(RejectReason::TooShort);
        }
    }
    if steps.misspellings && spell_gate(&tokens, &cfg.dictionary) == SpellVerdict::Fail {
        return reject(RejectReason::Misspelled);
    }

    let tokens = lemmatize_and_stop(
        &tokens,
        &cfg.lemmas,
        &cfg.stop_words,
        steps.lemmatize,
        steps.stop_words,
    );
    CleanPost {
        id: id.to_string(),
        tokens,
        kept_emojis,
        removed,
        rejected: None,
    }
}

/// Cleans every post; output order matches input.
pub fn clean_corpus(posts: &[RawPost], cfg: &CleanConfig) -> Vec<CleanPost> {
    par::map(posts, |p| clean(p, cfg))
}
