use serde::Deserialize;
use std::path::Path;
use thiserror::Error;

use super::Source;

const SOURCE_B_TOML: &str = include_str!("../../data/fieldmap/source_b.toml");
const SOURCE_C_TOML: &str = include_str!("../../data/fieldmap/source_c.toml");

/// Only this field-map format version is understood.
pub const FIELD_MAP_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FieldMapError {
    #[error("cannot read field map {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid field map: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unsupported field map version {0} (expected {FIELD_MAP_VERSION})")]
    Version(u32),
    #[error("field map declares source {0:?}; only \"b\" and \"c\" use JSON field maps")]
    Source(String),
    #[error("field map has no title keys")]
    NoTitleKeys,
}

/// Key names for one JSON-lines source. Each list is tried in order.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct FieldMap {
    pub version: u32,
    source: String,
    pub title: Vec<String>,
    #[serde(rename = "abstract", default)]
    pub abstract_keys: Vec<String>,
    #[serde(default)]
    pub venue: Vec<String>,
    #[serde(default)]
    pub venue_nested: Vec<String>,
    #[serde(default)]
    pub year: Vec<String>,
    #[serde(default)]
    pub volume: Vec<String>,
    #[serde(default)]
    pub doi: Vec<String>,
    #[serde(default)]
    pub citations: Vec<String>,
    #[serde(default)]
    pub citation_lists: Vec<String>,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub author_name: Vec<String>,
}

impl FieldMap {
    pub fn parse(text: &str) -> Result<Self, FieldMapError> {
        let map: FieldMap = toml::from_str(text)?;
        if map.version != FIELD_MAP_VERSION {
            return Err(FieldMapError::Version(map.version));
        }
        map.source()?;
        if map.title.is_empty() {
            return Err(FieldMapError::NoTitleKeys);
        }
        Ok(map)
    }

    pub fn load(path: &Path) -> Result<Self, FieldMapError> {
        let text = std::fs::read_to_string(path).map_err(|source| FieldMapError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The shipped map for a JSON source. `None` for the XML source.
    pub fn builtin(source: Source) -> Option<Self> {
        let text = match source {
            Source::SourceA => return None,
            Source::SourceB => SOURCE_B_TOML,
            Source::SourceC => SOURCE_C_TOML,
        };
        Some(Self::parse(text).expect("shipped field map is valid"))
    }

    pub fn source(&self) -> Result<Source, FieldMapError> {
        match Source::from_code(&self.source) {
            Some(s @ (Source::SourceB | Source::SourceC)) => Ok(s),
            _ => Err(FieldMapError::Source(self.source.clone())),
        }
    }
}
