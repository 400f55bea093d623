//! Streaming parsers for the three source dump formats.
//!
//! Every parser is an iterator of [`RawRecord`] values. Per-record problems
//! never stop the stream: the offending entry is skipped (or a field is left
//! empty) and an [`Issue`] is appended to the parser's [`ParseReport`]. Only
//! container-level corruption, such as broken XML nesting or an I/O failure,
//! surfaces as an [`IngestError`].

mod decode;
mod fieldmap;
mod jsonl;
mod xml;

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub use decode::decode_text;
pub use fieldmap::{FieldMap, FieldMapError};
pub use jsonl::JsonLinesParser;
pub use xml::{SourceAParser, DEFAULT_RECORD_KINDS};

/// Upper bound on issues kept verbatim in a report; later ones are only counted.
pub const DEFAULT_MAX_ISSUES: usize = 100_000;

/// Which dump a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    /// Curated computer-science bibliography, XML. The only source trusted for authors.
    #[serde(rename = "a")]
    SourceA,
    /// General-purpose corpus with abstracts and citations, JSON lines.
    #[serde(rename = "b")]
    SourceB,
    /// Open academic graph with abstracts and citations, JSON lines.
    #[serde(rename = "c")]
    SourceC,
}

impl Source {
    pub const ALL: [Source; 3] = [Source::SourceA, Source::SourceB, Source::SourceC];

    pub fn code(self) -> &'static str {
        match self {
            Source::SourceA => "a",
            Source::SourceB => "b",
            Source::SourceC => "c",
        }
    }

    pub fn from_code(code: &str) -> Option<Source> {
        match code {
            "a" => Some(Source::SourceA),
            "b" => Some(Source::SourceB),
            "c" => Some(Source::SourceC),
            _ => None,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One article as read from a single source, before unification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub source: Source,
    /// Decoded title, whitespace-collapsed. Never empty.
    pub raw_title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: Option<String>,
    pub raw_venue: Option<String>,
    pub year: Option<i32>,
    pub volume: Option<String>,
    pub doi: Option<String>,
    pub author_names: Vec<String>,
    /// Source-native stable author identifiers, parallel to `author_names`
    /// when present. Empty for sources without trusted author keys.
    pub author_keys: Vec<String>,
    pub n_citations: Option<u64>,
}

impl RawRecord {
    /// Minimal record carrying only a title; mostly useful for tests and fixtures.
    pub fn new(source: Source, title: impl Into<String>) -> Self {
        RawRecord {
            source,
            raw_title: title.into(),
            abstract_text: None,
            raw_venue: None,
            year: None,
            volume: None,
            doi: None,
            author_names: Vec::new(),
            author_keys: Vec::new(),
            n_citations: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    /// The entry could not be parsed at all (broken JSON, invalid UTF-8, wrong shape).
    MalformedEntry,
    MissingTitle,
    MissingYear,
    InvalidYear,
    InvalidCitationCount,
    /// An element or value the field map does not describe.
    UnknownElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    /// `line N` for JSON lines, `byte N` (plus the record key when known) for XML.
    pub locator: String,
    pub kind: IssueKind,
    pub message: String,
}

/// Per-stream accounting. `records_emitted + records_skipped` equals the
/// number of entries encountered.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseReport {
    pub records_emitted: u64,
    pub records_skipped: u64,
    pub issues: Vec<Issue>,
    /// Issues beyond the retention cap that were counted but not stored.
    #[serde(default)]
    pub issues_truncated: u64,
    #[serde(skip)]
    max_issues: Option<usize>,
}

impl ParseReport {
    pub fn with_max_issues(max_issues: usize) -> Self {
        ParseReport {
            max_issues: Some(max_issues),
            ..Default::default()
        }
    }

    pub fn entries(&self) -> u64 {
        self.records_emitted + self.records_skipped
    }

    pub fn push(&mut self, locator: impl Into<String>, kind: IssueKind, message: impl Into<String>) {
        if self.issues.len() >= self.max_issues.unwrap_or(DEFAULT_MAX_ISSUES) {
            self.issues_truncated += 1;
            return;
        }
        self.issues.push(Issue {
            locator: locator.into(),
            kind,
            message: message.into(),
        });
    }

    pub fn count_of(&self, kind: IssueKind) -> usize {
        self.issues.iter().filter(|i| i.kind == kind).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("XML structure error at byte {position}: {message}")]
    Xml { position: u64, message: String },
    #[error(transparent)]
    FieldMap(#[from] FieldMapError),
}

/// Normalise a year as written in the dumps.
///
/// Accepts `YYYY` and `'YY` (mapped to `19YY`); anything else, or a value
/// outside `[1900, 2100]`, yields `None`.
pub fn normalize_year(text: &str) -> Option<i32> {
    let t = text.trim();
    let digits = if let Some(rest) = t.strip_prefix(['\'', '\u{2019}']) {
        if rest.len() != 2 || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        format!("19{rest}")
    } else {
        if t.len() != 4 || !t.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.to_string()
    };
    let year: i32 = digits.parse().ok()?;
    (1900..=2100).contains(&year).then_some(year)
}

/// Canonical DOI form: resolver prefix stripped, trimmed, case-folded.
pub fn normalize_doi(text: &str) -> Option<String> {
    let mut t = text.trim();
    for prefix in [
        "https://doi.org/",
        "http://doi.org/",
        "https://dx.doi.org/",
        "http://dx.doi.org/",
        "doi:",
    ] {
        if t.len() >= prefix.len() && t[..prefix.len()].eq_ignore_ascii_case(prefix) {
            t = t[prefix.len()..].trim();
            break;
        }
    }
    if t.is_empty() {
        None
    } else {
        Some(t.to_lowercase())
    }
}

pub(crate) fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub(crate) fn non_empty(text: String) -> Option<String> {
    if text.trim().is_empty() {
        None
    } else {
        Some(text)
    }
}
