use bibcorpus_core::community::CommunityError;
use bibcorpus_core::filter::FilterParseError;
use bibcorpus_core::ingest::{FieldMapError, IngestError};
use bibcorpus_core::textkit::TextError;
use bibcorpus_core::trends::TrendError;
use bibcorpus_core::venues::VenueError;
use bibcorpus_store::StoreError;
use thiserror::Error;

/// Process exit codes. These values are stable.
pub mod exit {
    pub const OK: u8 = 0;
    /// Store or file system failure.
    pub const IO: u8 = 1;
    /// Bad flags, config file, query name or filter expression.
    pub const CONFIG: u8 = 2;
    /// A dump could not be read as a whole (broken XML structure, unreadable file).
    pub const PARSE: u8 = 3;
    /// The selection matched nothing; an empty but well-formed output was still written.
    pub const EMPTY: u8 = 4;
    /// An analysis hit a limit (such as the clique ceiling).
    pub const ANALYSIS: u8 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Filter(#[from] FilterParseError),
    #[error(transparent)]
    Venues(#[from] VenueError),
    #[error(transparent)]
    FieldMap(#[from] FieldMapError),
    #[error("parse failure: {0}")]
    Parse(IngestError),
    #[error(transparent)]
    Store(StoreError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Trend(#[from] TrendError),
    #[error(transparent)]
    Community(#[from] CommunityError),
    #[error("empty result: {0}")]
    Empty(String),
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Ingest(e) => CliError::from(e),
            other => CliError::Store(other),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::FieldMap(e) => CliError::FieldMap(e),
            other => CliError::Parse(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Filter(_) | CliError::Venues(_) | CliError::FieldMap(_) => exit::CONFIG,
            CliError::Text(_) | CliError::Trend(_) => exit::CONFIG,
            CliError::Parse(_) => exit::PARSE,
            CliError::Store(_) | CliError::Io(_) => exit::IO,
            CliError::Community(_) => exit::ANALYSIS,
            CliError::Empty(_) => exit::EMPTY,
        }
    }
}
