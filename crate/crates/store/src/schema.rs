pub(crate) const SCHEMA_VERSION: i64 = 1;

pub(crate) const CREATE: &str = r#"
CREATE TABLE IF NOT EXISTS publications (
    id INTEGER PRIMARY KEY,
    title TEXT NOT NULL,
    normalized_title TEXT NOT NULL,
    abstract TEXT,
    venue TEXT NOT NULL,
    year INTEGER NOT NULL,
    volume TEXT,
    doi TEXT UNIQUE,
    n_citations INTEGER CHECK (n_citations IS NULL OR n_citations >= 0),
    title_source TEXT NOT NULL,
    UNIQUE (normalized_title, venue, year)
);
CREATE TABLE IF NOT EXISTS authors (
    id INTEGER PRIMARY KEY,
    source_key TEXT NOT NULL UNIQUE,
    name TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS authorships (
    author_id INTEGER NOT NULL REFERENCES authors(id),
    publication_id INTEGER NOT NULL REFERENCES publications(id),
    UNIQUE (author_id, publication_id)
);
CREATE INDEX IF NOT EXISTS authorships_by_publication ON authorships(publication_id);
CREATE TABLE IF NOT EXISTS provenance (
    publication_id INTEGER NOT NULL REFERENCES publications(id),
    source TEXT NOT NULL,
    UNIQUE (publication_id, source)
);
"#;
