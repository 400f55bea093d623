//! Single-file corpus store.
//!
//! Records from all sources are unified into one `publications` table.
//! Incoming records are matched against stored rows by DOI first, then by
//! normalized title within the same venue (and year, when the record has
//! one). Matches are merged field by field; everything else is inserted.
//! Author data is taken from source A only.

mod schema;

use bibcorpus_core::community::AuthoredPublication;
use bibcorpus_core::filter::Query;
use bibcorpus_core::ingest::{IngestError, RawRecord, Source};
use bibcorpus_core::normalize::{display_title, normalize_title};
use bibcorpus_core::venues::VenueTable;
use bibcorpus_core::Publication;
use rusqlite::{params, Connection, OpenFlags, OptionalExtension, Row};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

pub use rusqlite;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("database error: {0}")]
    Sql(#[from] rusqlite::Error),
    #[error("schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: i64, expected: i64 },
    #[error("raw query result lacks column {0:?}")]
    MissingColumn(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("writing conflict report: {0}")]
    Report(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, StoreError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "publication_id", rename_all = "snake_case")]
pub enum MatchResult {
    MatchedByDoi(i64),
    MatchedByTitle(i64),
    NoMatch,
}

impl MatchResult {
    pub fn id(self) -> Option<i64> {
        match self {
            MatchResult::MatchedByDoi(id) | MatchResult::MatchedByTitle(id) => Some(id),
            MatchResult::NoMatch => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Upsert {
    Inserted(i64),
    Merged(MatchResult),
    /// No match and no year: the record cannot become a publication row.
    DroppedNoYear,
    /// The merge or insert would break a uniqueness rule; nothing was written.
    Rejected(Conflict),
}

/// One rejected record, written as a JSON line to the conflict report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub source: Source,
    pub title: String,
    pub venue: String,
    pub year: Option<i32>,
    pub doi: Option<String>,
    pub matched: Option<i64>,
    pub reason: String,
}

/// Counts for one ingest run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub records_seen: u64,
    pub inserted: u64,
    pub merged_by_doi: u64,
    pub merged_by_title: u64,
    pub dropped_no_venue: u64,
    pub dropped_no_year: u64,
    pub rejected: u64,
}

impl IngestSummary {
    /// Records of interest before deduplication (passed the venue gate and were stored).
    pub fn accepted(&self) -> u64 {
        self.inserted + self.merged_by_doi + self.merged_by_title
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub total_publications: u64,
    pub with_citations: u64,
    pub with_authors: u64,
    /// Absent when the store is empty.
    pub pct_with_citations: Option<f64>,
    pub pct_with_authors: Option<f64>,
}

const COLUMNS: &str = "id, title, normalized_title, abstract, venue, year, volume, doi, n_citations";
const BATCH: u64 = 5_000;

pub struct Store {
    conn: Connection,
}

impl Store {
    /// Open (creating if needed) a store file for writing.
    pub fn open(path: &Path) -> Result<Self> {
        Self::init(Connection::open(path)?)
    }

    pub fn open_in_memory() -> Result<Self> {
        Self::init(Connection::open_in_memory()?)
    }

    /// Open an existing store without write access.
    pub fn open_read_only(path: &Path) -> Result<Self> {
        let conn = Connection::open_with_flags(path, OpenFlags::SQLITE_OPEN_READ_ONLY | OpenFlags::SQLITE_OPEN_NO_MUTEX)?;
        let store = Store { conn };
        store.check_version()?;
        Ok(store)
    }

    fn init(conn: Connection) -> Result<Self> {
        conn.pragma_update(None, "foreign_keys", true)?;
        conn.execute_batch(schema::CREATE)?;
        let version: i64 = conn.pragma_query_value(None, "user_version", |r| r.get(0))?;
        if version == 0 {
            conn.pragma_update(None, "user_version", schema::SCHEMA_VERSION)?;
        }
        let store = Store { conn };
        store.check_version()?;
        Ok(store)
    }

    fn check_version(&self) -> Result<()> {
        let found: i64 = self.conn.pragma_query_value(None, "user_version", |r| r.get(0))?;
        if found != schema::SCHEMA_VERSION {
            return Err(StoreError::SchemaVersion {
                found,
                expected: schema::SCHEMA_VERSION,
            });
        }
        Ok(())
    }

    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    /// Find the stored publication an incoming record (with canonical venue) refers to.
    pub fn match_record(&self, r: &RawRecord, venue: &str) -> Result<MatchResult> {
        if let Some(doi) = &r.doi {
            let hit: Option<i64> = self
                .conn
                .prepare_cached("SELECT id FROM publications WHERE doi = ?1")?
                .query_row([doi], |row| row.get(0))
                .optional()?;
            if let Some(id) = hit {
                return Ok(MatchResult::MatchedByDoi(id));
            }
        }
        let key = normalize_title(&r.raw_title);
        let hit: Option<i64> = self
            .conn
            .prepare_cached(
                "SELECT id FROM publications WHERE normalized_title = ?1 AND venue = ?2 \
                 AND (?3 IS NULL OR year = ?3) ORDER BY id LIMIT 1",
            )?
            .query_row(params![key, venue, r.year], |row| row.get(0))
            .optional()?;
        Ok(hit.map_or(MatchResult::NoMatch, MatchResult::MatchedByTitle))
    }

    /// Insert or merge one record whose venue is already canonical.
    pub fn upsert_record(&mut self, r: &RawRecord, venue: &str) -> Result<Upsert> {
        self.conn.execute_batch("SAVEPOINT upsert")?;
        match self.upsert_inner(r, venue) {
            Ok(Upsert::Rejected(c)) => {
                self.conn.execute_batch("ROLLBACK TO upsert; RELEASE upsert")?;
                Ok(Upsert::Rejected(c))
            }
            Ok(done) => {
                self.conn.execute_batch("RELEASE upsert")?;
                Ok(done)
            }
            Err(e) => {
                self.conn.execute_batch("ROLLBACK TO upsert; RELEASE upsert")?;
                Err(e)
            }
        }
    }

    fn upsert_inner(&mut self, r: &RawRecord, venue: &str) -> Result<Upsert> {
        let conflict = |matched: Option<i64>, reason: String| Conflict {
            source: r.source,
            title: r.raw_title.clone(),
            venue: venue.to_string(),
            year: r.year,
            doi: r.doi.clone(),
            matched,
            reason,
        };
        let outcome = self.match_record(r, venue)?;
        let id = match outcome.id() {
            Some(id) => match self.merge(id, r) {
                Ok(()) => id,
                Err(StoreError::Sql(e)) if is_constraint(&e) => {
                    return Ok(Upsert::Rejected(conflict(Some(id), e.to_string())));
                }
                Err(e) => return Err(e),
            },
            None => {
                let Some(year) = r.year else {
                    return Ok(Upsert::DroppedNoYear);
                };
                let title = display_title(&r.raw_title);
                let inserted = self
                    .conn
                    .prepare_cached(
                        "INSERT INTO publications \
                         (title, normalized_title, abstract, venue, year, volume, doi, n_citations, title_source) \
                         VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9)",
                    )?
                    .execute(params![
                        title,
                        normalize_title(&title),
                        r.abstract_text,
                        venue,
                        year,
                        r.volume,
                        r.doi,
                        r.n_citations.map(to_sql_count),
                        r.source.code(),
                    ]);
                match inserted {
                    Ok(_) => self.conn.last_insert_rowid(),
                    Err(e) if is_constraint(&e) => return Ok(Upsert::Rejected(conflict(None, e.to_string()))),
                    Err(e) => return Err(e.into()),
                }
            }
        };
        self.conn
            .prepare_cached("INSERT OR IGNORE INTO provenance (publication_id, source) VALUES (?1, ?2)")?
            .execute(params![id, r.source.code()])?;
        if r.source == Source::SourceA && !r.author_keys.is_empty() {
            self.add_authors(id, r)?;
        }
        Ok(match outcome {
            MatchResult::NoMatch => Upsert::Inserted(id),
            m => Upsert::Merged(m),
        })
    }

    fn merge(&mut self, id: i64, r: &RawRecord) -> Result<()> {
        let (title_source,): (String,) = self
            .conn
            .prepare_cached("SELECT title_source FROM publications WHERE id = ?1")?
            .query_row([id], |row| Ok((row.get(0)?,)))?;
        self.conn
            .prepare_cached(
                "UPDATE publications SET \
                 abstract = COALESCE(abstract, ?2), \
                 doi = COALESCE(doi, ?3), \
                 volume = COALESCE(volume, ?4), \
                 n_citations = CASE WHEN ?5 IS NULL THEN n_citations \
                                    WHEN n_citations IS NULL OR n_citations < ?5 THEN ?5 \
                                    ELSE n_citations END \
                 WHERE id = ?1",
            )?
            .execute(params![id, r.abstract_text, r.doi, r.volume, r.n_citations.map(to_sql_count)])?;
        let a = Source::SourceA.code();
        if r.source == Source::SourceA && title_source != a {
            let title = display_title(&r.raw_title);
            self.conn
                .prepare_cached(
                    "UPDATE publications SET title = ?2, normalized_title = ?3, title_source = ?4 WHERE id = ?1",
                )?
                .execute(params![id, title, normalize_title(&title), a])?;
        }
        Ok(())
    }

    fn add_authors(&mut self, publication_id: i64, r: &RawRecord) -> Result<()> {
        for (i, key) in r.author_keys.iter().enumerate() {
            let name = r.author_names.get(i).map(String::as_str).unwrap_or(key);
            self.conn
                .prepare_cached("INSERT OR IGNORE INTO authors (source_key, name) VALUES (?1, ?2)")?
                .execute(params![key, name])?;
            let author_id: i64 = self
                .conn
                .prepare_cached("SELECT id FROM authors WHERE source_key = ?1")?
                .query_row([key], |row| row.get(0))?;
            self.conn
                .prepare_cached("INSERT OR IGNORE INTO authorships (author_id, publication_id) VALUES (?1, ?2)")?
                .execute(params![author_id, publication_id])?;
        }
        Ok(())
    }

    /// Gate each record by venue, then upsert it. Conflicts go to `conflicts`
    /// as JSON lines. Work is committed in batches.
    pub fn ingest<I>(&mut self, records: I, venues: &VenueTable, conflicts: &mut dyn Write) -> Result<IngestSummary>
    where
        I: IntoIterator<Item = std::result::Result<RawRecord, IngestError>>,
    {
        let mut summary = IngestSummary::default();
        self.conn.execute_batch("BEGIN")?;
        let result = (|| -> Result<()> {
            for rec in records {
                let rec = rec?;
                summary.records_seen += 1;
                let Some(venue) = rec.raw_venue.as_deref().and_then(|v| venues.map_venue(v)) else {
                    summary.dropped_no_venue += 1;
                    continue;
                };
                let venue = venue.to_string();
                match self.upsert_record(&rec, &venue)? {
                    Upsert::Inserted(_) => summary.inserted += 1,
                    Upsert::Merged(MatchResult::MatchedByDoi(_)) => summary.merged_by_doi += 1,
                    Upsert::Merged(_) => summary.merged_by_title += 1,
                    Upsert::DroppedNoYear => summary.dropped_no_year += 1,
                    Upsert::Rejected(c) => {
                        summary.rejected += 1;
                        log::debug!("conflict: {}", c.reason);
                        serde_json::to_writer(&mut *conflicts, &c).map_err(std::io::Error::from)?;
                        conflicts.write_all(b"\n")?;
                    }
                }
                if summary.records_seen % BATCH == 0 {
                    self.conn.execute_batch("COMMIT; BEGIN")?;
                }
            }
            Ok(())
        })();
        match result {
            Ok(()) => {
                self.conn.execute_batch("COMMIT")?;
                Ok(summary)
            }
            Err(e) => {
                self.conn.execute_batch("COMMIT")?;
                Err(e)
            }
        }
    }

    /// Publications matching `q`, in its order. The year range of the filter
    /// is pushed into SQL; all other predicates are evaluated row by row.
    pub fn query(&self, q: &Query) -> Result<Vec<Publication>> {
        let (lo, hi) = q
            .filter
            .as_ref()
            .and_then(|f| f.year_span())
            .unwrap_or((i32::MIN, i32::MAX));
        let mut stmt = self
            .conn
            .prepare_cached(&format!("SELECT {COLUMNS} FROM publications WHERE year BETWEEN ?1 AND ?2 ORDER BY id"))?;
        let mut out = Vec::new();
        let rows = stmt.query_map(params![lo, hi], publication_from_row)?;
        for p in rows {
            let p = p?;
            if q.matches(&p) {
                out.push(p);
            }
        }
        q.finish(&mut out);
        Ok(out)
    }

    /// Run a verbatim SQL query whose result carries the publication columns.
    pub fn raw_query(&self, sql: &str) -> Result<Vec<Publication>> {
        let mut stmt = self.conn.prepare(sql)?;
        let names: Vec<String> = stmt.column_names().iter().map(|s| s.to_string()).collect();
        let col = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n.eq_ignore_ascii_case(name))
                .ok_or_else(|| StoreError::MissingColumn(name.to_string()))
        };
        let idx = [
            col("id")?,
            col("title")?,
            col("normalized_title")?,
            col("abstract")?,
            col("venue")?,
            col("year")?,
            col("volume")?,
            col("doi")?,
            col("n_citations")?,
        ];
        let rows = stmt.query_map([], |row| {
            Ok(Publication {
                id: row.get(idx[0])?,
                title: row.get(idx[1])?,
                normalized_title: row.get(idx[2])?,
                abstract_text: row.get(idx[3])?,
                venue: row.get(idx[4])?,
                year: row.get(idx[5])?,
                volume: row.get(idx[6])?,
                doi: row.get(idx[7])?,
                n_citations: row.get::<_, Option<i64>>(idx[8])?.map(|c| c as u64),
            })
        })?;
        Ok(rows.collect::<std::result::Result<_, _>>()?)
    }

    pub fn publication(&self, id: i64) -> Result<Option<Publication>> {
        Ok(self
            .conn
            .prepare_cached(&format!("SELECT {COLUMNS} FROM publications WHERE id = ?1"))?
            .query_row([id], publication_from_row)
            .optional()?)
    }

    pub fn publication_count(&self) -> Result<u64> {
        Ok(self.conn.query_row("SELECT COUNT(*) FROM publications", [], |r| r.get::<_, i64>(0))? as u64)
    }

    pub fn coverage_stats(&self) -> Result<CoverageStats> {
        let (total, cites, authors): (i64, i64, i64) = self.conn.query_row(
            "SELECT COUNT(*), COUNT(n_citations), \
             (SELECT COUNT(DISTINCT publication_id) FROM authorships) FROM publications",
            [],
            |r| Ok((r.get(0)?, r.get(1)?, r.get(2)?)),
        )?;
        let pct = |n: i64| (total > 0).then(|| 100.0 * n as f64 / total as f64);
        Ok(CoverageStats {
            total_publications: total as u64,
            with_citations: cites as u64,
            with_authors: authors as u64,
            pct_with_citations: pct(cites),
            pct_with_authors: pct(authors),
        })
    }

    /// Stored publications per contributing source (after deduplication).
    pub fn source_counts(&self) -> Result<BTreeMap<Source, u64>> {
        let mut stmt = self.conn.prepare("SELECT source, COUNT(*) FROM provenance GROUP BY source")?;
        let rows = stmt.query_map([], |r| Ok((r.get::<_, String>(0)?, r.get::<_, i64>(1)?)))?;
        let mut out = BTreeMap::new();
        for row in rows {
            let (code, n) = row?;
            if let Some(s) = Source::from_code(&code) {
                out.insert(s, n as u64);
            }
        }
        Ok(out)
    }

    /// Author ids for each given publication (publications without authors included, with none).
    pub fn authored_publications(&self, pubs: &[Publication]) -> Result<Vec<AuthoredPublication>> {
        let mut stmt = self
            .conn
            .prepare_cached("SELECT author_id FROM authorships WHERE publication_id = ?1 ORDER BY author_id")?;
        let mut out = Vec::with_capacity(pubs.len());
        for p in pubs {
            let authors = stmt
                .query_map([p.id], |r| r.get::<_, i64>(0))?
                .collect::<std::result::Result<Vec<_>, _>>()?;
            out.push(AuthoredPublication::new(p.id, p.n_citations, authors));
        }
        Ok(out)
    }

    /// `(source_key, name)` for each author id.
    pub fn authors(&self, ids: impl IntoIterator<Item = i64>) -> Result<BTreeMap<i64, (String, String)>> {
        let mut stmt = self.conn.prepare_cached("SELECT source_key, name FROM authors WHERE id = ?1")?;
        let mut out = BTreeMap::new();
        for id in ids {
            if let Some(v) = stmt.query_row([id], |r| Ok((r.get(0)?, r.get(1)?))).optional()? {
                out.insert(id, v);
            }
        }
        Ok(out)
    }

    /// Violations of the store's invariants; empty when consistent.
    pub fn check_invariants(&self) -> Result<Vec<String>> {
        let mut problems = Vec::new();
        let mut stmt = self.conn.prepare("SELECT id, title, normalized_title FROM publications")?;
        let rows = stmt.query_map([], |r| Ok((r.get::<_, i64>(0)?, r.get::<_, String>(1)?, r.get::<_, String>(2)?)))?;
        for row in rows {
            let (id, title, key) = row?;
            if normalize_title(&title) != key {
                problems.push(format!("publication {id}: normalized_title out of date"));
            }
        }
        let checks = [
            ("dangling authorship author", "SELECT COUNT(*) FROM authorships WHERE author_id NOT IN (SELECT id FROM authors)"),
            (
                "dangling authorship publication",
                "SELECT COUNT(*) FROM authorships WHERE publication_id NOT IN (SELECT id FROM publications)",
            ),
            (
                "authorship on publication without source A provenance",
                "SELECT COUNT(*) FROM authorships WHERE publication_id NOT IN \
                 (SELECT publication_id FROM provenance WHERE source = 'a')",
            ),
            ("negative citation count", "SELECT COUNT(*) FROM publications WHERE n_citations < 0"),
            (
                "duplicate doi",
                "SELECT COUNT(*) FROM (SELECT doi FROM publications WHERE doi IS NOT NULL GROUP BY doi HAVING COUNT(*) > 1)",
            ),
            (
                "uppercase doi",
                "SELECT COUNT(*) FROM publications WHERE doi IS NOT NULL AND doi <> lower(doi)",
            ),
        ];
        for (what, sql) in checks {
            let n: i64 = self.conn.query_row(sql, [], |r| r.get(0))?;
            if n > 0 {
                problems.push(format!("{what}: {n}"));
            }
        }
        Ok(problems)
    }

    /// Logical content as sorted row lists, for comparing two stores.
    pub fn snapshot(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for sql in [
            "SELECT 'p', id, title, normalized_title, abstract, venue, year, volume, doi, n_citations, title_source FROM publications",
            "SELECT 'a', id, source_key, name FROM authors",
            "SELECT 's', author_id, publication_id FROM authorships",
            "SELECT 'v', publication_id, source FROM provenance",
        ] {
            let mut stmt = self.conn.prepare(sql)?;
            let n = stmt.column_count();
            let rows = stmt.query_map([], |r| {
                let mut cells = Vec::with_capacity(n);
                for i in 0..n {
                    cells.push(format!("{:?}", r.get_ref(i)?));
                }
                Ok(cells.join("|"))
            })?;
            for row in rows {
                out.push(row?);
            }
        }
        out.sort();
        Ok(out)
    }
}

fn publication_from_row(row: &Row<'_>) -> rusqlite::Result<Publication> {
    Ok(Publication {
        id: row.get(0)?,
        title: row.get(1)?,
        normalized_title: row.get(2)?,
        abstract_text: row.get(3)?,
        venue: row.get(4)?,
        year: row.get(5)?,
        volume: row.get(6)?,
        doi: row.get(7)?,
        n_citations: row.get::<_, Option<i64>>(8)?.map(|c| c as u64),
    })
}

fn to_sql_count(c: u64) -> i64 {
    i64::try_from(c).unwrap_or(i64::MAX)
}

fn is_constraint(e: &rusqlite::Error) -> bool {
    matches!(e, rusqlite::Error::SqliteFailure(f, _) if f.code == rusqlite::ErrorCode::ConstraintViolation)
}
