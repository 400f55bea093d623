//! Core building blocks for turning heterogeneous bibliographic dumps into a
//! single corpus and analysing it.
//!
//! The crate is storage-agnostic: the SQLite-backed data manager lives in
//! `bibcorpus-store`, and everything here also compiles for `wasm32`.
//!
//! - [`ingest`]: streaming parsers for the XML and JSON-lines dumps.
//! - [`venues`]: raw venue string to canonical abbreviation mapping.
//! - [`normalize`]: title matching keys.
//! - [`filter`]: the boolean publication filter used by queries.
//! - [`textkit`]: preprocessing, TF-IDF and keyword ranking.
//! - [`trends`]: per-year rankings plus new/rising keyword detection.
//! - [`community`]: co-authorship graphs, components, cliques and summaries.

pub mod community;
pub mod filter;
pub mod ingest;
pub mod model;
pub mod normalize;
pub mod textkit;
pub mod trends;
pub mod venues;

pub use ingest::{decode_text, ParseReport, RawRecord, Source};
pub use model::Publication;
pub use normalize::normalize_title;
