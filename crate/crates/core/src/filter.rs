//! Boolean publication filters and result ordering.
//!
//! Expression syntax:
//!
//! ```text
//! expr      := and_expr ("OR" and_expr)*
//! and_expr  := atom ("AND" atom)*
//! atom      := "(" expr ")" | predicate
//! predicate := "title:" value | "abstract:" value | "text:" value
//!            | "year:" INT | "year:" INT ".." INT
//! value     := '"' chars '"' | bare-word
//! ```
//!
//! `title:` and `abstract:` are case-insensitive substring tests; `text:` is
//! shorthand for `(title:v OR abstract:v)`. A missing abstract never matches.
//! `AND` binds tighter than `OR`; keywords are case-insensitive.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

use crate::model::Publication;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    /// Needle is stored lowercased.
    Title(String),
    Abstract(String),
    /// Title or abstract.
    Text(String),
    /// Inclusive.
    Year(i32, i32),
    And(Vec<Filter>),
    Or(Vec<Filter>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("filter parse error at position {position}: {message}")]
pub struct FilterParseError {
    /// Character offset into the expression.
    pub position: usize,
    pub message: String,
}

/// Lowercased view of a publication used for matching.
pub struct Haystack {
    title: String,
    abstract_text: Option<String>,
    year: i32,
}

impl Haystack {
    pub fn new(title: &str, abstract_text: Option<&str>, year: i32) -> Self {
        Haystack {
            title: title.to_lowercase(),
            abstract_text: abstract_text.map(str::to_lowercase),
            year,
        }
    }

    pub fn of(p: &Publication) -> Self {
        Self::new(&p.title, p.abstract_text.as_deref(), p.year)
    }
}

impl Filter {
    pub fn title(needle: &str) -> Filter {
        Filter::Title(needle.to_lowercase())
    }

    pub fn abstract_(needle: &str) -> Filter {
        Filter::Abstract(needle.to_lowercase())
    }

    pub fn text(needle: &str) -> Filter {
        Filter::Text(needle.to_lowercase())
    }

    pub fn year(from: i32, to: i32) -> Filter {
        Filter::Year(from, to)
    }

    pub fn parse(expr: &str) -> Result<Filter, FilterParseError> {
        let tokens = lex(expr)?;
        let mut p = Parser { tokens, pos: 0, len: expr.chars().count() };
        let f = p.or_expr()?;
        if let Some(t) = p.peek() {
            return Err(FilterParseError {
                position: t.pos,
                message: format!("unexpected {}", t.kind),
            });
        }
        Ok(f)
    }

    pub fn matches(&self, h: &Haystack) -> bool {
        match self {
            Filter::Title(n) => h.title.contains(n.as_str()),
            Filter::Abstract(n) => h.abstract_text.as_deref().is_some_and(|a| a.contains(n.as_str())),
            Filter::Text(n) => {
                h.title.contains(n.as_str()) || h.abstract_text.as_deref().is_some_and(|a| a.contains(n.as_str()))
            }
            Filter::Year(lo, hi) => (*lo..=*hi).contains(&h.year),
            Filter::And(fs) => fs.iter().all(|f| f.matches(h)),
            Filter::Or(fs) => fs.iter().any(|f| f.matches(h)),
        }
    }

    pub fn matches_publication(&self, p: &Publication) -> bool {
        self.matches(&Haystack::of(p))
    }

    /// The year range constraining every match, when the filter is a year
    /// predicate or a conjunction containing one.
    pub fn year_span(&self) -> Option<(i32, i32)> {
        match self {
            Filter::Year(lo, hi) => Some((*lo, *hi)),
            Filter::And(fs) => fs.iter().filter_map(Filter::year_span).reduce(|a, b| (a.0.max(b.0), a.1.min(b.1))),
            _ => None,
        }
    }

    /// This filter restricted to a single year.
    pub fn and_year(&self, year: i32) -> Filter {
        match self {
            Filter::And(fs) => {
                let mut fs = fs.clone();
                fs.push(Filter::Year(year, year));
                Filter::And(fs)
            }
            other => Filter::And(vec![other.clone(), Filter::Year(year, year)]),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn quote(s: &str) -> String {
            format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
        }
        match self {
            Filter::Title(n) => write!(f, "title:{}", quote(n)),
            Filter::Abstract(n) => write!(f, "abstract:{}", quote(n)),
            Filter::Text(n) => write!(f, "text:{}", quote(n)),
            Filter::Year(lo, hi) if lo == hi => write!(f, "year:{lo}"),
            Filter::Year(lo, hi) => write!(f, "year:{lo}..{hi}"),
            Filter::And(fs) | Filter::Or(fs) => {
                let sep = if matches!(self, Filter::And(_)) { " AND " } else { " OR " };
                for (i, sub) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    if matches!(sub, Filter::And(_) | Filter::Or(_)) {
                        write!(f, "({sub})")?;
                    } else {
                        write!(f, "{sub}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Result ordering. Ties always fall back to ascending publication id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    #[default]
    Id,
    /// Most cited first; missing counts last.
    CitationsDesc,
    /// Newest first, then most cited; missing counts last within a year.
    YearDescCitationsDesc,
}

fn citations_desc(a: Option<u64>, b: Option<u64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => y.cmp(&x),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

impl Order {
    pub fn compare(self, a: &Publication, b: &Publication) -> Ordering {
        let primary = match self {
            Order::Id => Ordering::Equal,
            Order::CitationsDesc => citations_desc(a.n_citations, b.n_citations),
            Order::YearDescCitationsDesc => {
                b.year.cmp(&a.year).then_with(|| citations_desc(a.n_citations, b.n_citations))
            }
        };
        primary.then_with(|| a.id.cmp(&b.id))
    }

    pub fn sort(self, pubs: &mut [Publication]) {
        pubs.sort_by(|a, b| self.compare(a, b));
    }
}

/// A filter plus ordering and limit. `filter: None` selects everything.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Query {
    pub filter: Option<Filter>,
    pub order: Order,
    pub limit: Option<usize>,
}

impl Query {
    pub fn new(filter: Filter) -> Self {
        Query {
            filter: Some(filter),
            ..Default::default()
        }
    }

    pub fn ordered(mut self, order: Order) -> Self {
        self.order = order;
        self
    }

    pub fn limited(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn matches(&self, p: &Publication) -> bool {
        self.filter.as_ref().is_none_or(|f| f.matches_publication(p))
    }

    /// Apply to an in-memory collection.
    pub fn run<'a>(&self, pubs: impl IntoIterator<Item = &'a Publication>) -> Vec<Publication> {
        let mut out: Vec<Publication> = pubs.into_iter().filter(|p| self.matches(p)).cloned().collect();
        self.finish(&mut out);
        out
    }

    /// Sort and truncate an already filtered result.
    pub fn finish(&self, out: &mut Vec<Publication>) {
        self.order.sort(out);
        if let Some(limit) = self.limit {
            out.truncate(limit);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    LParen,
    RParen,
    And,
    Or,
    Field(String),
    Str(String),
    Int(i32),
    Range,
}

impl fmt::Display for TokKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokKind::LParen => f.write_str("'('"),
            TokKind::RParen => f.write_str("')'"),
            TokKind::And => f.write_str("AND"),
            TokKind::Or => f.write_str("OR"),
            TokKind::Field(n) => write!(f, "field {n}:"),
            TokKind::Str(s) => write!(f, "value {s:?}"),
            TokKind::Int(i) => write!(f, "number {i}"),
            TokKind::Range => f.write_str("'..'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    pos: usize,
}

fn lex(expr: &str) -> Result<Vec<Tok>, FilterParseError> {
    let chars: Vec<char> = expr.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let err = |position: usize, message: String| FilterParseError { position, message };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '(' => {
                tokens.push(Tok { kind: TokKind::LParen, pos: i });
                i += 1;
            }
            ')' => {
                tokens.push(Tok { kind: TokKind::RParen, pos: i });
                i += 1;
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(err(start, "unterminated string".into())),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some(&e) => s.push(e),
                                None => return Err(err(i, "dangling escape".into())),
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                tokens.push(Tok { kind: TokKind::Str(s), pos: start });
            }
            '.' if chars.get(i + 1) == Some(&'.') => {
                tokens.push(Tok { kind: TokKind::Range, pos: i });
                i += 2;
            }
            c if c.is_alphanumeric() || c == '_' || c == '-' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if chars.get(i) == Some(&':') {
                    i += 1;
                    let name = word.to_lowercase();
                    if !matches!(name.as_str(), "title" | "abstract" | "text" | "year") {
                        return Err(err(start, format!("unknown field {word:?}")));
                    }
                    tokens.push(Tok { kind: TokKind::Field(name), pos: start });
                } else if word.eq_ignore_ascii_case("and") {
                    tokens.push(Tok { kind: TokKind::And, pos: start });
                } else if word.eq_ignore_ascii_case("or") {
                    tokens.push(Tok { kind: TokKind::Or, pos: start });
                } else if word.bytes().all(|b| b.is_ascii_digit()) {
                    let n = word.parse().map_err(|_| err(start, format!("number out of range: {word}")))?;
                    tokens.push(Tok { kind: TokKind::Int(n), pos: start });
                } else {
                    tokens.push(Tok { kind: TokKind::Str(word), pos: start });
                }
            }
            other => return Err(err(i, format!("unexpected character {other:?}"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn end_err(&self, what: &str) -> FilterParseError {
        FilterParseError {
            position: self.len,
            message: format!("expected {what}, found end of input"),
        }
    }

    fn or_expr(&mut self) -> Result<Filter, FilterParseError> {
        let mut parts = vec![self.and_expr()?];
        while matches!(self.peek(), Some(Tok { kind: TokKind::Or, .. })) {
            self.pos += 1;
            parts.push(self.and_expr()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Filter::Or(parts) })
    }

    fn and_expr(&mut self) -> Result<Filter, FilterParseError> {
        let mut parts = vec![self.atom()?];
        while matches!(self.peek(), Some(Tok { kind: TokKind::And, .. })) {
            self.pos += 1;
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Filter::And(parts) })
    }

    fn atom(&mut self) -> Result<Filter, FilterParseError> {
        let Some(tok) = self.next() else {
            return Err(self.end_err("a predicate or '('"));
        };
        match tok.kind {
            TokKind::LParen => {
                let inner = self.or_expr()?;
                match self.next() {
                    Some(Tok { kind: TokKind::RParen, .. }) => Ok(inner),
                    Some(t) => Err(FilterParseError {
                        position: t.pos,
                        message: format!("expected ')', found {}", t.kind),
                    }),
                    None => Err(self.end_err("')'")),
                }
            }
            TokKind::Field(name) if name == "year" => self.year_value(),
            TokKind::Field(name) => {
                let value = match self.next() {
                    Some(Tok { kind: TokKind::Str(s), .. }) => s,
                    Some(Tok { kind: TokKind::Int(i), .. }) => i.to_string(),
                    Some(t) => {
                        return Err(FilterParseError {
                            position: t.pos,
                            message: format!("expected a value after {name}:, found {}", t.kind),
                        })
                    }
                    None => return Err(self.end_err("a value")),
                };
                if value.is_empty() {
                    return Err(FilterParseError {
                        position: tok.pos,
                        message: "empty search string".into(),
                    });
                }
                Ok(match name.as_str() {
                    "title" => Filter::title(&value),
                    "abstract" => Filter::abstract_(&value),
                    _ => Filter::text(&value),
                })
            }
            other => Err(FilterParseError {
                position: tok.pos,
                message: format!("expected a predicate or '(', found {other}"),
            }),
        }
    }

    fn year_value(&mut self) -> Result<Filter, FilterParseError> {
        let lo = match self.next() {
            Some(Tok { kind: TokKind::Int(i), .. }) => i,
            Some(t) => {
                return Err(FilterParseError {
                    position: t.pos,
                    message: format!("expected a year, found {}", t.kind),
                })
            }
            None => return Err(self.end_err("a year")),
        };
        if !matches!(self.peek(), Some(Tok { kind: TokKind::Range, .. })) {
            return Ok(Filter::Year(lo, lo));
        }
        let range_pos = self.next().unwrap().pos;
        let hi = match self.next() {
            Some(Tok { kind: TokKind::Int(i), .. }) => i,
            Some(t) => {
                return Err(FilterParseError {
                    position: t.pos,
                    message: format!("expected a year, found {}", t.kind),
                })
            }
            None => return Err(self.end_err("a year")),
        };
        if hi < lo {
            return Err(FilterParseError {
                position: range_pos,
                message: format!("empty year range {lo}..{hi}"),
            });
        }
        Ok(Filter::Year(lo, hi))
    }
}
