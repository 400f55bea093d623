use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use std::collections::HashSet;
use std::io::BufRead;

use super::{
    collapse_whitespace, decode_text, non_empty, normalize_doi, normalize_year, IngestError, IssueKind,
    ParseReport, RawRecord, Source,
};

/// Record element kinds read by default.
pub const DEFAULT_RECORD_KINDS: [&str; 4] = ["article", "inproceedings", "proceedings", "incollection"];

/// Children that carry nothing we store but are expected in the dump.
const IGNORED_FIELDS: &[&str] = &[
    "pages", "url", "crossref", "number", "month", "publisher", "isbn", "series", "school", "note",
    "cdrom", "cite", "editor", "address", "chapter", "publnr", "stream", "rel",
];

#[derive(Default)]
struct Pending {
    key: Option<String>,
    title: Option<String>,
    year: Option<String>,
    volume: Option<String>,
    venue: Option<String>,
    doi: Option<String>,
    authors: Vec<(String, Option<String>)>,
}

/// Streaming parser for the XML bibliography dump (source A).
///
/// Entity references are resolved with the HTML entity table rather than the
/// document's (usually external) DTD.
pub struct SourceAParser<R> {
    reader: Reader<R>,
    kinds: HashSet<String>,
    buf: Vec<u8>,
    field_buf: Vec<u8>,
    report: ParseReport,
    depth: usize,
    done: bool,
}

impl<R: BufRead> SourceAParser<R> {
    pub fn new(reader: R) -> Self {
        Self::with_kinds(reader, DEFAULT_RECORD_KINDS)
    }

    pub fn with_kinds<I, S>(reader: R, kinds: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut reader = Reader::from_reader(reader);
        reader.config_mut().check_end_names = true;
        SourceAParser {
            reader,
            kinds: kinds.into_iter().map(|k| k.as_ref().to_string()).collect(),
            buf: Vec::with_capacity(4096),
            field_buf: Vec::with_capacity(1024),
            report: ParseReport::default(),
            depth: 0,
            done: false,
        }
    }

    pub fn report(&self) -> &ParseReport {
        &self.report
    }

    pub fn into_report(self) -> ParseReport {
        self.report
    }

    fn xml_error(&self, err: impl std::fmt::Display) -> IngestError {
        IngestError::Xml {
            position: self.reader.error_position(),
            message: err.to_string(),
        }
    }

    /// Read one record element whose start tag has been consumed.
    fn read_record(&mut self, start: &BytesStart<'_>) -> Result<Option<RawRecord>, IngestError> {
        let locator_pos = self.reader.buffer_position();
        let mut pending = Pending {
            key: attr(start, "key"),
            ..Default::default()
        };
        let record_name = start.name().as_ref().to_string();
        loop {
            self.buf.clear();
            let event = self.reader.read_event_into(&mut self.buf).map_err(|e| IngestError::Xml {
                position: self.reader.error_position(),
                message: e.to_string(),
            })?;
            match event {
                Event::Start(field) => {
                    let name = field.name().as_ref().to_string();
                    let author_key = (name == "author").then(|| attr(&field, "key").or_else(|| attr(&field, "pid")));
                    let text = self.read_field_text(&name)?;
                    self.store_field(&mut pending, &name, text, author_key.flatten(), locator_pos);
                }
                Event::Empty(_) => {}
                Event::End(end) if end.name().as_ref() == record_name => break,
                Event::End(_) => {}
                Event::Eof => {
                    return Err(IngestError::Xml {
                        position: self.reader.buffer_position(),
                        message: "unexpected end of document inside a record".into(),
                    })
                }
                _ => {}
            }
        }
        Ok(self.finish(pending, locator_pos))
    }

    /// Collect all text (including nested inline markup) up to the end of `name`.
    fn read_field_text(&mut self, name: &str) -> Result<String, IngestError> {
        let mut out = String::new();
        let mut nested = 0usize;
        loop {
            self.field_buf.clear();
            let event = match self.reader.read_event_into(&mut self.field_buf) {
                Ok(e) => e,
                Err(e) => {
                    return Err(IngestError::Xml {
                        position: self.reader.error_position(),
                        message: e.to_string(),
                    })
                }
            };
            match event {
                Event::Text(t) => out.push_str(&t.xml10_content()),
                Event::CData(c) => out.push_str(&c.xml10_content()),
                Event::GeneralRef(r) => {
                    out.push('&');
                    out.push_str(&r.into_inner());
                    out.push(';');
                }
                Event::Start(_) => nested += 1,
                Event::End(end) => {
                    if nested == 0 {
                        debug_assert_eq!(end.name().as_ref(), name);
                        break;
                    }
                    nested -= 1;
                }
                Event::Eof => {
                    return Err(IngestError::Xml {
                        position: self.reader.buffer_position(),
                        message: "unexpected end of document inside a field".into(),
                    })
                }
                _ => {}
            }
        }
        Ok(out)
    }

    fn store_field(&mut self, p: &mut Pending, name: &str, text: String, author_key: Option<String>, pos: u64) {
        let text = collapse_whitespace(&decode_text(&text));
        match name {
            "title" => p.title = Some(text),
            "year" => p.year = Some(text),
            "volume" => p.volume = non_empty(text),
            "booktitle" | "journal" => {
                if p.venue.is_none() {
                    p.venue = non_empty(text);
                }
            }
            "ee" => {
                if p.doi.is_none() && text.to_ascii_lowercase().contains("doi.org/") {
                    p.doi = normalize_doi(&text);
                }
            }
            "author" => {
                if !text.is_empty() {
                    p.authors.push((text, author_key));
                }
            }
            other if IGNORED_FIELDS.contains(&other) => {}
            other => {
                let name = other;
                self.report.push(
                    locator(p.key.as_deref(), pos),
                    IssueKind::UnknownElement,
                    format!("unknown element <{name}> ignored"),
                );
            }
        }
    }

    fn finish(&mut self, p: Pending, pos: u64) -> Option<RawRecord> {
        let loc = locator(p.key.as_deref(), pos);
        let title = p.title.filter(|t| !t.is_empty());
        let Some(title) = title else {
            self.report.records_skipped += 1;
            self.report.push(loc, IssueKind::MissingTitle, "record without title skipped");
            return None;
        };
        let mut record = RawRecord::new(Source::SourceA, title);
        match p.year.as_deref() {
            None => self.report.push(loc.clone(), IssueKind::MissingYear, "no year"),
            Some(y) => {
                record.year = normalize_year(y);
                if record.year.is_none() {
                    self.report.push(loc.clone(), IssueKind::InvalidYear, format!("unrecognised year {y:?}"));
                }
            }
        }
        record.volume = p.volume;
        record.raw_venue = p.venue;
        record.doi = p.doi;
        for (name, key) in p.authors {
            // Without a key attribute the (already disambiguated) name is the key.
            record.author_keys.push(key.unwrap_or_else(|| name.clone()));
            record.author_names.push(name);
        }
        self.report.records_emitted += 1;
        Some(record)
    }
}

impl<R: BufRead> Iterator for SourceAParser<R> {
    type Item = Result<RawRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(e) => e.into_owned(),
                Err(e) => {
                    self.done = true;
                    return Some(Err(self.xml_error(e)));
                }
            };
            match event {
                Event::Start(start) => {
                    if self.depth == 1 && self.kinds.contains(start.name().as_ref()) {
                        match self.read_record(&start) {
                            Ok(Some(r)) => return Some(Ok(r)),
                            Ok(None) => {}
                            Err(e) => {
                                self.done = true;
                                return Some(Err(e));
                            }
                        }
                    } else if self.depth >= 1 {
                        // Not an entry kind we read: skip the whole subtree.
                        let end = start.to_end().into_owned();
                        let mut skip_buf = Vec::new();
                        if let Err(e) = self.reader.read_to_end_into(end.name(), &mut skip_buf) {
                            self.done = true;
                            return Some(Err(self.xml_error(e)));
                        }
                    } else {
                        self.depth += 1;
                    }
                }
                Event::Empty(start) => {
                    if self.depth == 1 && self.kinds.contains(start.name().as_ref()) {
                        let pos = self.reader.buffer_position();
                        let key = attr(&start, "key");
                        self.report.records_skipped += 1;
                        self.report
                            .push(locator(key.as_deref(), pos), IssueKind::MissingTitle, "empty record element");
                    }
                }
                Event::End(_) => self.depth = self.depth.saturating_sub(1),
                Event::Eof => {
                    self.done = true;
                    if self.depth != 0 {
                        return Some(Err(IngestError::Xml {
                            position: self.reader.buffer_position(),
                            message: "document ended before the root element was closed".into(),
                        }));
                    }
                }
                _ => {}
            }
        }
        None
    }
}

fn attr(start: &BytesStart<'_>, key: &str) -> Option<String> {
    start
        .attributes()
        .flatten()
        .find(|a| a.key.as_ref() == key)
        .map(|a| decode_text(a.value.trim()))
        .filter(|v| !v.is_empty())
}

fn locator(key: Option<&str>, pos: u64) -> String {
    match key {
        Some(k) => format!("byte {pos} ({k})"),
        None => format!("byte {pos}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(xml: &str) -> (Vec<RawRecord>, ParseReport) {
        let mut p = SourceAParser::new(xml.as_bytes());
        let recs: Vec<_> = p.by_ref().map(|r| r.unwrap()).collect();
        (recs, p.into_report())
    }

    const DOC: &str = r#"<?xml version="1.0" encoding="ISO-8859-1"?>
<!DOCTYPE dblp SYSTEM "dblp.dtd">
<dblp>
<inproceedings key="conf/ccgrid/Foo09" mdate="2019-01-01">
<author pid="12/345">Ann Lee</author>
<author pid="67/890">J&ouml;rg Schl&#246;sser</author>
<title>A Study of <i>Workflow</i> Scheduling.</title>
<pages>1-10</pages>
<year>2009</year>
<booktitle>CCGRID</booktitle>
<ee>https://doi.org/10.1109/CCGRID.2009.1</ee>
<ee>https://ieeexplore.ieee.org/document/1/</ee>
</inproceedings>
<www key="homepages/1"><author>Someone</author><title>Home Page</title></www>
<article key="journals/fgcs/Bar90">
<author>Bo Chen</author>
<title>A Study.</title>
<year>'90</year>
<volume>6</volume>
<journal>Future Gener. Comput. Syst.</journal>
<frobnicate>x</frobnicate>
</article>
<article key="journals/x/NoTitle"><author>Z</author><year>2001</year></article>
<article key="journals/x/Empty"/>
</dblp>
"#;

    #[test]
    fn reads_records_and_skips_untitled() {
        let (recs, rep) = parse(DOC);
        assert_eq!(recs.len(), 2);
        assert_eq!(rep.records_emitted, 2);
        assert_eq!(rep.records_skipped, 2);
        assert_eq!(rep.count_of(IssueKind::MissingTitle), 2);
        assert_eq!(rep.count_of(IssueKind::UnknownElement), 1);

        let a = &recs[0];
        assert_eq!(a.source, Source::SourceA);
        assert_eq!(a.raw_title, "A Study of Workflow Scheduling.");
        assert_eq!(a.year, Some(2009));
        assert_eq!(a.raw_venue.as_deref(), Some("CCGRID"));
        assert_eq!(a.doi.as_deref(), Some("10.1109/ccgrid.2009.1"));
        assert_eq!(a.author_names, vec!["Ann Lee", "Jörg Schlösser"]);
        assert_eq!(a.author_keys, vec!["12/345", "67/890"]);

        let b = &recs[1];
        assert_eq!(b.raw_title, "A Study.");
        assert_eq!(b.year, Some(1990));
        assert_eq!(b.volume.as_deref(), Some("6"));
        assert_eq!(b.author_keys, vec!["Bo Chen"]);
    }

    #[test]
    fn missing_year_keeps_record() {
        let (recs, rep) = parse("<dblp><article><title>T</title></article></dblp>");
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].year, None);
        assert_eq!(rep.count_of(IssueKind::MissingYear), 1);
    }

    #[test]
    fn structural_error_aborts_with_position() {
        let mut p = SourceAParser::new("<dblp><article><title>T</year></article></dblp>".as_bytes());
        match p.next() {
            Some(Err(IngestError::Xml { position, .. })) => assert!(position > 0),
            other => panic!("expected XML error, got {other:?}"),
        }
        assert!(p.next().is_none());
    }

    #[test]
    fn truncated_document_is_an_error() {
        let mut p = SourceAParser::new("<dblp><article><title>T</title></article>".as_bytes());
        assert!(p.next().unwrap().is_ok());
        assert!(matches!(p.next(), Some(Err(IngestError::Xml { .. }))));
    }

    #[test]
    fn configurable_kinds() {
        let xml = "<dblp><book><title>B</title><year>2000</year></book><article><title>A</title></article></dblp>";
        let mut p = SourceAParser::with_kinds(xml.as_bytes(), ["book"]);
        let titles: Vec<_> = p.by_ref().map(|r| r.unwrap().raw_title).collect();
        assert_eq!(titles, vec!["B"]);
    }
}
