//! Shared lexicon and fuzz generator for the text-cleaning tests.

use std::collections::{HashMap, HashSet};

use geosent::preprocess::lexicon::Lexicons;
use geosent::preprocess::{CleanConfig, Steps};
use rand::Rng;

pub fn set(words: &[&str]) -> HashSet<String> {
    words.iter().map(|s| s.to_string()).collect()
}

pub const DICTIONARY: &[&str] = &[
    "dzisiaj",
    "sa",
    "wybory",
    "w",
    "polsce",
    "dobra",
    "dobry",
    "kot",
    "kotow",
    "ide",
    "glosowac",
    "na",
    "to",
    "jest",
    "sie",
    "i",
    "a",
    "ale",
    "oraz",
    "ze",
    "bardzo",
    "fajny",
    "dzien",
    "pogoda",
    "ladna",
    "wyborach",
    "byl",
    "kandydat",
    "mowi",
    "prawda",
    "nie",
    "wiem",
    "co",
    "myslec",
    "jutro",
    "debata",
    "o",
    "godzinie",
    "zobaczymy",
    "super",
    "duzo",
    "żółw",
    "zwierze",
    "bedzie",
    "wie",
];

pub fn config() -> CleanConfig {
    let lexicons = Lexicons {
        dictionary: set(DICTIONARY),
        lemmas: HashMap::from([
            ("dobra".to_string(), "dobry".to_string()),
            ("wyborach".to_string(), "wybory".to_string()),
            ("kotow".to_string(), "kot".to_string()),
        ]),
        stop_words: set(&["i", "a", "oraz", "to", "jest", "sie", "w", "na"]),
        conjunctions: set(&["i", "a", "ale", "oraz", "ze"]),
        emoji_polarity: HashMap::new(),
    };
    CleanConfig::new(Steps::default(), lexicons, set(&["😀", "❤"]))
}

pub const FUZZ_PIECES: &[&str] = &[
    "dzisiaj",
    "Wybory",
    "POLSCE",
    "dobra",
    "kotow",
    "i",
    "a",
    "ale",
    "oraz",
    "ze",
    "jest",
    "bardzo",
    "Fajny",
    "żółw",
    "Z\u{307}o\u{301}łw",
    "xyzzy",
    "qwerty",
    "123",
    "!",
    "?!",
    ",",
    "...",
    "-",
    "(",
    ")",
    "\"",
    "'",
    ":",
    "😀",
    "❤️",
    "❤",
    "👍🏽",
    "😡",
    "👨\u{200d}👩\u{200d}👧",
    "🇵🇱",
    "1\u{fe0f}\u{20e3}",
    "https://x.pl/a?b=1",
    "www.test.com",
    "@user_1",
    "#tag",
    "#",
    "@",
    "\t",
    "\n",
    "\u{a0}",
    "  ",
    "e\u{301}",
    "ß",
    "Ωmega",
];

pub fn fuzz_text(rng: &mut rand_chacha::ChaCha8Rng) -> String {
    let mut s = String::new();
    for _ in 0..rng.random_range(0..20) {
        s.push_str(FUZZ_PIECES[rng.random_range(0..FUZZ_PIECES.len())]);
        if rng.random_bool(0.7) {
            s.push(' ');
        }
    }
    s
}

/// Lexicons closed under their own mappings: stop words are conjunctions
/// (so removing them cannot shorten a post below the bar), lemma targets
/// are dictionary words that map to themselves and are not conjunctions.
pub fn closed_config() -> CleanConfig {
    let mut cfg = config();
    cfg.stop_words = set(&["i", "a", "oraz"]);
    cfg
}
