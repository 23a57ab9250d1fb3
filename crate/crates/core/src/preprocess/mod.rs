//! Text normalization for micro-posts and corpus-level hashtag/emoji
//! diagnostics.

pub mod clean;
pub mod emoji;
pub mod lexicon;
pub mod report;

pub use clean::{
    clean, clean_corpus, clean_text, lemmatize_and_stop, spell_gate, CleanConfig, CleanPost,
    RejectReason, Removed, SpellVerdict, Steps,
};
pub use lexicon::{LexiconPaths, Lexicons, Polarity};
pub use report::{
    emoji_report, hashtag_report, hashtags, select_emoji_whitelist, FrequencyReport, FrequencyRow,
};
