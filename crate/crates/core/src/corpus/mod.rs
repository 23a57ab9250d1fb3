//! Post ingestion, place-name resolution and per-region bookkeeping.

pub mod gazetteer;
pub mod posts;
pub mod regions;

pub use gazetteer::{normalize_place_name, resolve_region, Gazetteer, GazetteerEntry, Resolution};
pub use posts::{
    filter_located, load_posts, write_posts_jsonl, LoadedPosts, PostFormat, RawPost, SkipCounts,
};
pub use regions::{region_counts, RegionCount, RegionCounts, RegionRow, RegionTable};
