use serde_json::{Map, Value};
use std::io::BufRead;

use super::{
    collapse_whitespace, decode_text, non_empty, normalize_doi, normalize_year, FieldMap, IngestError,
    IssueKind, ParseReport, RawRecord, Source,
};

/// Streaming parser for the JSON-lines sources (B and C).
///
/// Reads one line at a time into a reused buffer, so memory stays bounded by
/// the longest line. Blank lines are not entries and are ignored.
pub struct JsonLinesParser<R> {
    reader: R,
    map: FieldMap,
    source: Source,
    line_no: u64,
    buf: Vec<u8>,
    report: ParseReport,
    done: bool,
}

impl<R: BufRead> JsonLinesParser<R> {
    pub fn new(reader: R, map: FieldMap) -> Result<Self, IngestError> {
        let source = map.source()?;
        Ok(JsonLinesParser {
            reader,
            map,
            source,
            line_no: 0,
            buf: Vec::with_capacity(8 * 1024),
            report: ParseReport::default(),
            done: false,
        })
    }

    /// Parser using the shipped field map for `source` (B or C).
    pub fn with_builtin(reader: R, source: Source) -> Result<Self, IngestError> {
        let map = FieldMap::builtin(source).ok_or_else(|| {
            IngestError::FieldMap(super::FieldMapError::Source(source.code().to_string()))
        })?;
        Self::new(reader, map)
    }

    pub fn report(&self) -> &ParseReport {
        &self.report
    }

    pub fn into_report(self) -> ParseReport {
        self.report
    }

    fn skip(&mut self, kind: IssueKind, message: impl Into<String>) {
        self.report.records_skipped += 1;
        let locator = format!("line {}", self.line_no);
        self.report.push(locator, kind, message);
    }

    fn parse_line(&mut self) -> Option<RawRecord> {
        let text = match std::str::from_utf8(&self.buf) {
            Ok(t) => t.trim(),
            Err(e) => {
                self.skip(IssueKind::MalformedEntry, format!("invalid UTF-8: {e}"));
                return None;
            }
        };
        if text.is_empty() {
            return None;
        }
        let value: Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => {
                self.skip(IssueKind::MalformedEntry, e.to_string());
                return None;
            }
        };
        let Value::Object(obj) = value else {
            self.skip(IssueKind::MalformedEntry, "entry is not a JSON object");
            return None;
        };
        let Some(title) = first_string(&obj, &self.map.title).map(|t| collapse_whitespace(&decode_text(&t)))
        else {
            self.skip(IssueKind::MissingTitle, "no title");
            return None;
        };
        if title.is_empty() {
            self.skip(IssueKind::MissingTitle, "empty title");
            return None;
        }

        let mut record = RawRecord::new(self.source, title);
        let locator = format!("line {}", self.line_no);
        record.abstract_text = first_string(&obj, &self.map.abstract_keys).map(|a| decode_text(a.trim()));
        record.raw_venue = self.venue(&obj).map(|v| collapse_whitespace(&decode_text(&v)));
        record.volume = first_string(&obj, &self.map.volume);
        record.doi = first_string(&obj, &self.map.doi).and_then(|d| normalize_doi(&d));

        match first_present(&obj, &self.map.year) {
            None => self.report.push(locator.clone(), IssueKind::MissingYear, "no year"),
            Some(v) => {
                let text = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                record.year = normalize_year(&text);
                if record.year.is_none() {
                    self.report
                        .push(locator.clone(), IssueKind::InvalidYear, format!("unrecognised year {text:?}"));
                }
            }
        }

        record.n_citations = self.citations(&obj, &locator);

        for key in &self.map.authors {
            if let Some(Value::Array(items)) = obj.get(key) {
                for item in items {
                    let name = match item {
                        Value::String(s) => Some(s.clone()),
                        Value::Object(o) => first_string(o, &self.map.author_name),
                        _ => None,
                    };
                    if let Some(n) = name.map(|n| collapse_whitespace(&decode_text(&n))) {
                        if !n.is_empty() {
                            record.author_names.push(n);
                        }
                    }
                }
                break;
            }
        }
        Some(record)
    }

    fn venue(&self, obj: &Map<String, Value>) -> Option<String> {
        for key in &self.map.venue {
            match obj.get(key) {
                Some(Value::String(s)) if !s.trim().is_empty() => return Some(s.clone()),
                Some(Value::Object(nested)) => {
                    if let Some(s) = first_string(nested, &self.map.venue_nested) {
                        return Some(s);
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn citations(&mut self, obj: &Map<String, Value>, locator: &str) -> Option<u64> {
        for key in &self.map.citations {
            let Some(v) = obj.get(key) else { continue };
            let parsed = match v {
                Value::Null => continue,
                Value::Number(n) => n.as_i64().or_else(|| n.as_f64().filter(|f| f.fract() == 0.0).map(|f| f as i64)),
                Value::String(s) => s.trim().parse::<i64>().ok(),
                _ => None,
            };
            match parsed {
                Some(n) if n >= 0 => return Some(n as u64),
                _ => {
                    self.report.push(
                        locator.to_string(),
                        IssueKind::InvalidCitationCount,
                        format!("{key} = {v}"),
                    );
                    return None;
                }
            }
        }
        for key in &self.map.citation_lists {
            if let Some(Value::Array(items)) = obj.get(key) {
                return Some(items.len() as u64);
            }
        }
        None
    }
}

impl<R: BufRead> Iterator for JsonLinesParser<R> {
    type Item = Result<RawRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => {
                    self.done = true;
                }
                Ok(_) => {
                    self.line_no += 1;
                    if let Some(record) = self.parse_line() {
                        self.report.records_emitted += 1;
                        return Some(Ok(record));
                    }
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(IngestError::Io(e)));
                }
            }
        }
        None
    }
}

fn first_present<'a>(obj: &'a Map<String, Value>, keys: &[String]) -> Option<&'a Value> {
    keys.iter()
        .filter_map(|k| obj.get(k))
        .find(|v| !v.is_null() && !matches!(v, Value::String(s) if s.trim().is_empty()))
}

/// First key holding a non-empty string (numbers are stringified).
fn first_string(obj: &Map<String, Value>, keys: &[String]) -> Option<String> {
    keys.iter().find_map(|k| match obj.get(k)? {
        Value::String(s) => non_empty(s.trim().to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    })
}
