use crate::args::*;
use crate::canned::{canned, CannedName};
use crate::config::{RunConfig, TextSettings};
use crate::error::CliError;
use bibcorpus_core::community::{analyze, CommunityReport};
use bibcorpus_core::filter::{Filter, Order, Query};
use bibcorpus_core::ingest::{FieldMap, IngestError, JsonLinesParser, ParseReport, SourceAParser};
use bibcorpus_core::textkit::{
    custom_stopwords, english_stopwords, load_word_list, top_keywords, DictionaryLemmatizer, KeywordConfig,
    KeywordRanking, Preprocessor, RuleLemmatizer, TokenDoc,
};
use bibcorpus_core::trends::{keywords_per_year, trend_report, YearlyRankings};
use bibcorpus_core::venues::VenueTable;
use bibcorpus_core::{Publication, Source};
use bibcorpus_store::{IngestSummary, Store};
use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

pub struct Ctx {
    pub config: RunConfig,
    pub db: Option<PathBuf>,
}

impl Ctx {
    fn db_path(&self) -> Result<PathBuf, CliError> {
        self.config.db(self.db.as_deref())
    }

    fn read_store(&self) -> Result<Store, CliError> {
        let path = self.db_path()?;
        if !path.exists() {
            return Err(CliError::Config(format!("store {} does not exist", path.display())));
        }
        Ok(Store::open_read_only(&path)?)
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_all(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let mut w = output(path)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Resolve `Q1..Q9`, a file holding an expression, or an inline expression.
pub fn resolve_selection(spec: Option<&str>) -> Result<Query, CliError> {
    let Some(spec) = spec else {
        return Ok(Query::default());
    };
    if let Ok(name) = spec.parse::<CannedName>() {
        return Ok(canned(name).query);
    }
    let path = Path::new(spec);
    let expr = if path.is_file() {
        std::fs::read_to_string(path)?
    } else {
        spec.to_string()
    };
    Ok(Query::new(Filter::parse(expr.trim())?))
}

fn empty(what: &str) -> CliError {
    CliError::Empty(format!("{what} matched no publications"))
}

// ---- ingest ----

#[derive(Serialize)]
struct IngestOutput<'a> {
    source: Source,
    records_emitted: u64,
    records_skipped: u64,
    issues_by_kind: BTreeMap<String, usize>,
    #[serde(flatten)]
    summary: &'a IngestSummary,
}

pub fn ingest(ctx: &Ctx, a: &IngestArgs) -> Result<(), CliError> {
    let db = ctx.db_path()?;
    let venues = match a.venues.as_ref().or(ctx.config.venues.as_ref()) {
        Some(p) => VenueTable::load(p)?,
        None => VenueTable::builtin(),
    };
    let input = File::open(&a.input).map_err(|e| CliError::Parse(IngestError::Io(e)))?;
    let reader = BufReader::with_capacity(1 << 16, input);
    let mut store = Store::open(&db)?;
    let mut conflicts: Box<dyn Write> = match &a.conflicts {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::sink()),
    };
    let source = match a.source {
        SourceArg::A => Source::SourceA,
        SourceArg::B => Source::SourceB,
        SourceArg::C => Source::SourceC,
    };
    let (result, report): (Result<IngestSummary, CliError>, ParseReport) = match source {
        Source::SourceA => {
            if a.fieldmap.is_some() {
                return Err(CliError::Config("--fieldmap applies to JSON-lines sources only".into()));
            }
            let mut p = match &a.kinds {
                Some(kinds) => SourceAParser::with_kinds(reader, kinds.iter().map(|k| k.trim().to_string())),
                None => SourceAParser::new(reader),
            };
            let r = store.ingest(&mut p, &venues, &mut conflicts).map_err(CliError::from);
            (r, p.into_report())
        }
        Source::SourceB | Source::SourceC => {
            let mut p = match &a.fieldmap {
                Some(path) => {
                    let map = FieldMap::load(path)?;
                    if map.source()? != source {
                        return Err(CliError::Config(format!(
                            "field map describes source {}, not {}",
                            map.source()?.code(),
                            source.code()
                        )));
                    }
                    JsonLinesParser::new(reader, map)?
                }
                None => JsonLinesParser::with_builtin(reader, source)?,
            };
            let r = store.ingest(&mut p, &venues, &mut conflicts).map_err(CliError::from);
            (r, p.into_report())
        }
    };
    conflicts.flush()?;
    if let Some(p) = &a.report {
        write_all(Some(p), &report.to_json())?;
    }
    let summary = result?;
    let mut by_kind = BTreeMap::new();
    for issue in &report.issues {
        *by_kind.entry(serde_json::to_value(issue.kind)?.as_str().unwrap_or("").to_string()).or_insert(0) += 1;
    }
    let out = IngestOutput {
        source,
        records_emitted: report.records_emitted,
        records_skipped: report.records_skipped,
        issues_by_kind: by_kind,
        summary: &summary,
    };
    write_all(None, &format!("{}\n", serde_json::to_string_pretty(&out)?))?;
    log::info!(
        "inserted {} merged {} dropped(no venue) {}",
        summary.inserted,
        summary.merged_by_doi + summary.merged_by_title,
        summary.dropped_no_venue
    );
    Ok(())
}

// ---- query ----

const PUB_HEADER: [&str; 7] = ["id", "title", "venue", "year", "volume", "doi", "n_citations"];

fn write_publications(path: Option<&Path>, format: Format, pubs: &[Publication]) -> Result<(), CliError> {
    let mut w = output(path)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, pubs)?;
            w.write_all(b"\n")?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(PUB_HEADER)?;
            for p in pubs {
                c.write_record([
                    p.id.to_string(),
                    p.title.clone(),
                    p.venue.clone(),
                    p.year.to_string(),
                    p.volume.clone().unwrap_or_default(),
                    p.doi.clone().unwrap_or_default(),
                    p.n_citations.map(|n| n.to_string()).unwrap_or_default(),
                ])?;
            }
            c.flush()?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn query(ctx: &Ctx, a: &QueryArgs) -> Result<(), CliError> {
    let store = ctx.read_store()?;
    let format = ctx.config.format(a.format)?;
    let mut pubs = match &a.raw_sql {
        Some(sql) => store.raw_query(sql)?,
        None => store.query(&resolve_selection(a.selection.query.as_deref())?)?,
    };
    if let Some(limit) = a.limit {
        pubs.truncate(limit);
    }
    write_publications(a.out.as_deref(), format, &pubs)?;
    if pubs.is_empty() && a.limit != Some(0) {
        return Err(empty("query"));
    }
    Ok(())
}

pub fn list_queries() -> Result<(), CliError> {
    let all: Vec<_> = CannedName::ALL
        .into_iter()
        .map(|n| {
            let q = canned(n);
            json!({
                "name": q.name,
                "description": q.description,
                "filter": q.query.filter.as_ref().map(|f| f.to_string()),
                "order": q.query.order,
                "sql": q.sql,
            })
        })
        .collect();
    write_all(None, &format!("{}\n", serde_json::to_string_pretty(&all)?))
}

// ---- keywords, trends, emerging ----

fn preprocessor(s: &TextSettings) -> Result<Preprocessor, CliError> {
    let mut stop = english_stopwords();
    stop.extend(custom_stopwords());
    if let Some(p) = &s.stopwords {
        stop.extend(load_word_list(p)?);
    }
    Ok(match &s.lemma_dict {
        Some(p) => Preprocessor::new(DictionaryLemmatizer::load(p)?, stop),
        None => Preprocessor::new(RuleLemmatizer::default(), stop),
    })
}

fn keyword_config(s: &TextSettings) -> Result<KeywordConfig, CliError> {
    Ok(KeywordConfig {
        k_per_doc: s.kper_doc,
        top_n: s.top,
        max_df: s.max_df,
        suppress: match &s.suppress {
            Some(p) => load_word_list(p)?,
            None => BTreeSet::new(),
        },
    })
}

fn write_ranking(path: Option<&Path>, format: Format, r: &KeywordRanking) -> Result<(), CliError> {
    match format {
        Format::Csv => write_all(path, &r.to_csv()),
        Format::Json => write_all(path, &format!("{}\n", serde_json::to_string_pretty(r)?)),
    }
}

pub fn keywords(ctx: &Ctx, a: &KeywordArgs) -> Result<(), CliError> {
    let settings = ctx.config.text(&a.text)?;
    let format = ctx.config.format(a.format)?;
    let cfg = keyword_config(&settings)?;
    let pre = preprocessor(&settings)?;
    let store = ctx.read_store()?;
    let interest = store.query(&resolve_selection(a.selection.query.as_deref())?)?;
    if interest.is_empty() {
        write_ranking(a.out.as_deref(), format, &KeywordRanking { requested: cfg.top_n, ..Default::default() })?;
        return Err(empty("selection"));
    }
    let docs = |pubs: &[Publication]| -> Vec<TokenDoc> {
        pubs.iter().map(|p| TokenDoc::from_text(p.id, &p.text(), &pre)).collect()
    };
    let interest_docs = docs(&interest);
    let corpus_docs = match &a.corpus_query {
        None => interest_docs.clone(),
        Some(spec) => {
            let mut corpus = store.query(&resolve_selection(Some(spec))?)?;
            let have: BTreeSet<i64> = corpus.iter().map(|p| p.id).collect();
            let missing: Vec<Publication> = interest.iter().filter(|p| !have.contains(&p.id)).cloned().collect();
            if !missing.is_empty() {
                log::warn!("{} articles of interest are outside the corpus selection; adding them", missing.len());
                corpus.extend(missing);
            }
            docs(&corpus)
        }
    };
    let ranking = top_keywords(&interest_docs, &corpus_docs, &cfg)?;
    write_ranking(a.out.as_deref(), format, &ranking)
}

/// Year span from flags/config, else the filter, else the data.
fn span(ctx: &Ctx, s: &SpanArgs, q: &Query, pubs: &[Publication]) -> Option<(i32, i32)> {
    let (from, to) = ctx.config.span(s.from_year, s.to_year);
    let filter_span = q.filter.as_ref().and_then(Filter::year_span);
    let data_min = pubs.iter().map(|p| p.year).min();
    let data_max = pubs.iter().map(|p| p.year).max();
    let from = from.or(filter_span.map(|s| s.0)).or(data_min)?;
    let to = to.or(filter_span.map(|s| s.1)).or(data_max)?;
    Some((from, to))
}

fn yearly(ctx: &Ctx, sel: &Selection, s: &SpanArgs, text: &TextOptions) -> Result<Option<YearlyRankings>, CliError> {
    let settings = ctx.config.text(text)?;
    let cfg = keyword_config(&settings)?;
    let pre = preprocessor(&settings)?;
    let store = ctx.read_store()?;
    let q = resolve_selection(sel.query.as_deref())?;
    let pubs = store.query(&q)?;
    let Some((from, to)) = span(ctx, s, &q, &pubs) else {
        return Ok(None);
    };
    if !pubs.iter().any(|p| (from..=to).contains(&p.year)) {
        return Ok(None);
    }
    Ok(Some(keywords_per_year(&pubs, None, from, to, &cfg, &pre)?))
}

pub fn trends(ctx: &Ctx, a: &TrendArgs) -> Result<(), CliError> {
    let format = ctx.config.format(a.format)?;
    let rankings = yearly(ctx, &a.selection, &a.span, &a.text)?;
    let text = match (&rankings, format) {
        (Some(r), Format::Csv) => r.to_csv(),
        (Some(r), Format::Json) => format!("{}\n", serde_json::to_string_pretty(r)?),
        (None, Format::Csv) => "year,rank,keyword,count\n".to_string(),
        (None, Format::Json) => "null\n".to_string(),
    };
    write_all(a.out.as_deref(), &text)?;
    rankings.map(|_| ()).ok_or_else(|| empty("selection"))
}

pub fn emerging(ctx: &Ctx, a: &EmergingArgs) -> Result<(), CliError> {
    let Some(rankings) = yearly(ctx, &a.selection, &a.span, &a.text)? else {
        let v = json!({"split_year": null, "new_keywords": [], "rising_keywords": [], "rankings": null});
        write_all(a.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&v)?))?;
        return Err(empty("selection"));
    };
    let report = trend_report(&rankings, a.split_year)?;
    let v = json!({
        "split_year": report.split_year,
        "new_keywords": report.new_keywords,
        "rising_keywords": report.rising_keywords,
        "rankings": rankings,
    });
    write_all(a.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&v)?))
}

// ---- community ----

fn write_csv<P: AsRef<Path>>(path: P, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), CliError> {
    let mut c = csv::Writer::from_path(path)?;
    c.write_record(header)?;
    for r in rows {
        c.write_record(r)?;
    }
    c.flush()?;
    Ok(())
}

fn membership_rows(groups: &[Vec<i64>], names: &BTreeMap<i64, (String, String)>) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        for a in g {
            let (key, name) = names.get(a).cloned().unwrap_or_default();
            rows.push(vec![(i + 1).to_string(), g.len().to_string(), a.to_string(), key, name]);
        }
    }
    rows
}

fn write_community(dir: &Path, report: &CommunityReport, edges: &str, dot: &str, names: &BTreeMap<i64, (String, String)>) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)?)?;
    let s = &report.summary;
    write_csv(
        dir.join("summary.csv"),
        &["articles", "authors", "coauthorship_relations", "unique_relations", "cliques", "largest_clique", "one_time_fraction"],
        vec![vec![
            s.articles.to_string(),
            s.authors.to_string(),
            s.coauthorship_relations.to_string(),
            s.unique_relations.to_string(),
            s.cliques.to_string(),
            s.largest_clique.to_string(),
            report.one_time_fraction.map(|f| format!("{f:.6}")).unwrap_or_default(),
        ]],
    )?;
    let member_header = ["group", "size", "author_id", "author_key", "author_name"];
    write_csv(dir.join("components.csv"), &member_header, membership_rows(&report.components, names))?;
    write_csv(dir.join("cliques.csv"), &member_header, membership_rows(&report.cliques, names))?;
    write_csv(
        dir.join("clique_stats.csv"),
        &["clique", "size", "avg_author_citations", "max_author_citations", "members_without_citations"],
        report
            .clique_stats
            .iter()
            .enumerate()
            .map(|(i, c)| {
                vec![
                    (i + 1).to_string(),
                    c.clique_size.to_string(),
                    format!("{:.3}", c.avg_author_citations),
                    c.max_author_citations.to_string(),
                    c.members_without_citations.len().to_string(),
                ]
            })
            .collect(),
    )?;
    write_csv(
        dir.join("clique_sizes.csv"),
        &["size", "cliques", "authors"],
        report.clique_sizes.iter().map(|r| vec![r.size.to_string(), r.cliques.to_string(), r.authors.to_string()]).collect(),
    )?;
    write_csv(
        dir.join("articles_per_author_cdf.csv"),
        &["articles", "fraction_of_authors"],
        report.articles_per_author_cdf.iter().map(|(k, f)| vec![k.to_string(), format!("{f:.6}")]).collect(),
    )?;
    std::fs::write(dir.join("edges.txt"), edges)?;
    std::fs::write(dir.join("graph.dot"), dot)?;
    Ok(())
}

pub fn community(ctx: &Ctx, a: &CommunityArgs) -> Result<(), CliError> {
    let store = ctx.read_store()?;
    let pubs = store.query(&resolve_selection(a.selection.query.as_deref())?)?;
    let authored = store.authored_publications(&pubs)?;
    let (graph, report) = analyze(&authored, a.min_component, a.clique_ceiling)?;
    let names = store.authors(graph.authors().iter().copied())?;
    let dot = graph.to_dot(|id| names.get(&id).map(|(_, n)| n.clone()));
    write_community(&a.out_dir, &report, &graph.to_edge_list(), &dot, &names)?;
    write_all(None, &format!("{}\n", serde_json::to_string_pretty(&report.summary)?))?;
    if pubs.is_empty() {
        return Err(empty("selection"));
    }
    Ok(())
}

// ---- policies, stats ----

pub fn policy_query(category: Category, mode: Mode) -> CannedName {
    match (category, mode) {
        (Category::Allocation, Mode::TopCited) => CannedName::Q6,
        (Category::Allocation, Mode::Recent) => CannedName::Q7,
        (Category::Provisioning, Mode::TopCited) => CannedName::Q8,
        (Category::Provisioning, Mode::Recent) => CannedName::Q9,
    }
}

pub fn policies(ctx: &Ctx, a: &PolicyArgs) -> Result<(), CliError> {
    let store = ctx.read_store()?;
    let q = canned(policy_query(a.category, a.mode)).query.limited(a.limit);
    debug_assert_ne!(q.order, Order::Id);
    let pubs = store.query(&q)?;
    let mut w = output(a.out.as_deref())?;
    {
        let mut c = csv::Writer::from_writer(&mut w);
        c.write_record(["title", "year", "n_citations"])?;
        for p in &pubs {
            c.write_record([p.title.clone(), p.year.to_string(), p.n_citations.map(|n| n.to_string()).unwrap_or_default()])?;
        }
        c.flush()?;
    }
    w.flush()?;
    if pubs.is_empty() && a.limit > 0 {
        return Err(empty("policy query"));
    }
    Ok(())
}

pub fn stats(ctx: &Ctx) -> Result<(), CliError> {
    let store = ctx.read_store()?;
    let coverage = store.coverage_stats()?;
    let per_source: BTreeMap<&str, u64> = store.source_counts()?.into_iter().map(|(s, n)| (s.code(), n)).collect();
    let v = json!({ "coverage": coverage, "publications_per_source": per_source });
    write_all(None, &format!("{}\n", serde_json::to_string_pretty(&v)?))
}
