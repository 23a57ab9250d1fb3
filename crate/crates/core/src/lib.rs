//! Regional sentiment analysis of geolocated micro-posts.
//!
//! The crate covers the full batch pipeline: ingesting posts and resolving
//! declared places to administrative regions ([`corpus`]), normalizing post
//! text ([`preprocess`]), training and applying bag-of-words sentiment
//! classifiers with optional pseudo-labelling ([`sentiment`]), aggregating
//! polarity by region around an event date and testing for a shift
//! ([`regional`]), and explaining a regional outcome with OLS and stepwise
//! AIC selection ([`stats`], [`explain`]).
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is on (the default) and plain iterators otherwise.

pub mod corpus;
pub mod error;
pub mod explain;
pub mod par;
pub mod preprocess;
pub mod regional;
pub mod sentiment;
pub mod stats;

pub use error::{Error, ErrorKind, Result};
