//! Raw venue string to canonical abbreviation mapping.
//!
//! Rule file format, one rule per line:
//!
//! ```text
//! # comment
//! exact<TAB>ccgrid<TAB>CCGrid
//! pattern<TAB>cluster computing and the grid<TAB>CCGrid
//! ```
//!
//! Exact matchers are compared case-insensitively after trimming; patterns are
//! case-insensitive regular expressions searched anywhere in the raw string.
//! Exact rules are consulted before patterns, and within each kind the first
//! rule in file order wins.

use regex::{Regex, RegexBuilder};
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

/// The shipped rule table covering systems venues.
pub const DEFAULT_RULES: &str = include_str!("../data/venues.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Matcher {
    /// Stored case-folded.
    Exact(String),
    Pattern(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VenueRule {
    pub matcher: Matcher,
    pub canonical: String,
}

#[derive(Debug, Error)]
pub enum VenueError {
    #[error("cannot read venue rules {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: invalid pattern {pattern:?}: {message}")]
    Pattern {
        line: usize,
        pattern: String,
        message: String,
    },
    #[error("conflicting rules: line {first_line} maps {matcher:?} to {first:?}, line {second_line} maps it to {second:?}")]
    Conflict {
        matcher: String,
        first_line: usize,
        first: String,
        second_line: usize,
        second: String,
    },
}

/// Validated, immutable rule table.
#[derive(Debug, Clone)]
pub struct VenueTable {
    rules: Vec<VenueRule>,
    exact: HashMap<String, usize>,
    patterns: Vec<(Regex, usize)>,
    canonical_set: BTreeSet<String>,
}

impl PartialEq for VenueTable {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Default for VenueTable {
    fn default() -> Self {
        VenueTable::empty()
    }
}

impl VenueTable {
    pub fn empty() -> Self {
        VenueTable {
            rules: Vec::new(),
            exact: HashMap::new(),
            patterns: Vec::new(),
            canonical_set: BTreeSet::new(),
        }
    }

    /// The shipped default table.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_RULES).expect("shipped venue table is valid")
    }

    pub fn load(path: &Path) -> Result<Self, VenueError> {
        let text = std::fs::read_to_string(path).map_err(|source| VenueError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, VenueError> {
        let mut builder = Builder::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = trimmed.split('\t').collect();
            if parts.len() != 3 {
                return Err(VenueError::Syntax {
                    line,
                    message: format!("expected 3 tab-separated fields, found {}", parts.len()),
                });
            }
            let (kind, matcher, canonical) = (parts[0].trim(), parts[1].trim(), parts[2].trim());
            if matcher.is_empty() {
                return Err(VenueError::Syntax {
                    line,
                    message: "empty matcher".into(),
                });
            }
            let matcher = match kind {
                "exact" => Matcher::Exact(matcher.to_lowercase()),
                "pattern" => Matcher::Pattern(matcher.to_string()),
                other => {
                    return Err(VenueError::Syntax {
                        line,
                        message: format!("unknown rule kind {other:?} (expected exact or pattern)"),
                    })
                }
            };
            builder.add(
                VenueRule {
                    matcher,
                    canonical: canonical.to_string(),
                },
                line,
            )?;
        }
        Ok(builder.finish())
    }

    /// Build from rules in order, applying the same validation as [`VenueTable::parse`].
    /// Error line numbers are 1-based rule positions.
    pub fn from_rules(rules: impl IntoIterator<Item = VenueRule>) -> Result<Self, VenueError> {
        let mut builder = Builder::default();
        for (i, mut rule) in rules.into_iter().enumerate() {
            if let Matcher::Exact(m) = &mut rule.matcher {
                *m = m.trim().to_lowercase();
            }
            builder.add(rule, i + 1)?;
        }
        Ok(builder.finish())
    }

    pub fn rules(&self) -> &[VenueRule] {
        &self.rules
    }

    pub fn canonical_set(&self) -> &BTreeSet<String> {
        &self.canonical_set
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Serialise back to the rule file format.
    pub fn save(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            let (kind, m) = match &rule.matcher {
                Matcher::Exact(m) => ("exact", m),
                Matcher::Pattern(p) => ("pattern", p),
            };
            let _ = writeln!(out, "{kind}\t{m}\t{}", rule.canonical);
        }
        out
    }

    /// Canonical abbreviation for `raw_venue`, or `None` if no rule matches.
    pub fn map_venue(&self, raw_venue: &str) -> Option<&str> {
        let key = raw_venue.trim().to_lowercase();
        if key.is_empty() {
            return None;
        }
        if let Some(&i) = self.exact.get(&key) {
            return Some(&self.rules[i].canonical);
        }
        self.patterns
            .iter()
            .find(|(re, _)| re.is_match(raw_venue))
            .map(|&(_, i)| self.rules[i].canonical.as_str())
    }
}

/// Free-function form of [`VenueTable::map_venue`].
pub fn map_venue<'t>(raw_venue: &str, table: &'t VenueTable) -> Option<&'t str> {
    table.map_venue(raw_venue)
}

#[derive(Default)]
struct Builder {
    table: Option<VenueTable>,
    seen: HashMap<Matcher, (usize, String)>,
}

impl Builder {
    fn add(&mut self, rule: VenueRule, line: usize) -> Result<(), VenueError> {
        let table = self.table.get_or_insert_with(VenueTable::empty);
        if rule.canonical.is_empty() {
            return Err(VenueError::Syntax {
                line,
                message: "empty canonical abbreviation".into(),
            });
        }
        if let Some((first_line, first)) = self.seen.get(&rule.matcher) {
            if *first != rule.canonical {
                let matcher = match &rule.matcher {
                    Matcher::Exact(m) | Matcher::Pattern(m) => m.clone(),
                };
                return Err(VenueError::Conflict {
                    matcher,
                    first_line: *first_line,
                    first: first.clone(),
                    second_line: line,
                    second: rule.canonical,
                });
            }
            // Identical duplicate: the earlier rule already covers it.
            return Ok(());
        }
        let index = table.rules.len();
        match &rule.matcher {
            Matcher::Exact(m) => {
                table.exact.insert(m.clone(), index);
            }
            Matcher::Pattern(p) => {
                let re = RegexBuilder::new(p)
                    .case_insensitive(true)
                    .build()
                    .map_err(|e| VenueError::Pattern {
                        line,
                        pattern: p.clone(),
                        message: e.to_string(),
                    })?;
                table.patterns.push((re, index));
            }
        }
        self.seen.insert(rule.matcher.clone(), (line, rule.canonical.clone()));
        table.canonical_set.insert(rule.canonical.clone());
        table.rules.push(rule);
        Ok(())
    }

    fn finish(self) -> VenueTable {
        self.table.unwrap_or_else(VenueTable::empty)
    }
}
