use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "bibcorpus", version, about = "Build a unified publication corpus and analyze it")]
pub struct Cli {
    /// Optional TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Store file.
    #[arg(long, global = true, value_name = "FILE")]
    pub db: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse one source dump and merge it into the store.
    Ingest(IngestArgs),
    /// Run a canned query, a filter expression or raw SQL and print the rows.
    Query(QueryArgs),
    /// List the canned queries with their SQL equivalents.
    ListQueries,
    /// Top keywords of the selected articles.
    Keywords(KeywordArgs),
    /// Top keywords per year.
    Trends(TrendArgs),
    /// New and rising keywords over a year span.
    Emerging(EmergingArgs),
    /// Co-authorship graph, cliques and summary tables.
    Community(CommunityArgs),
    /// Most cited or most recent allocation/provisioning policy articles.
    Policies(PolicyArgs),
    /// Coverage and per-source counts.
    Stats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, value_enum)]
    pub source: SourceArg,
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Venue rule table (TSV); the shipped table is used otherwise.
    #[arg(long, value_name = "FILE")]
    pub venues: Option<PathBuf>,
    /// Field map for JSON-lines sources.
    #[arg(long, value_name = "FILE")]
    pub fieldmap: Option<PathBuf>,
    /// Comma-separated record kinds kept from the XML dump.
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<String>>,
    /// Write the full parse report (JSON) here.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Write rejected records (JSON lines) here.
    #[arg(long, value_name = "FILE")]
    pub conflicts: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Selection {
    /// Q1..Q9, a file holding a filter expression, or an inline expression.
    #[arg(long, value_name = "Q1..Q9|FILE|EXPR")]
    pub query: Option<String>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub selection: Selection,
    /// Run this SQL text against the store instead of a filter.
    #[arg(long, value_name = "SQL", conflicts_with = "query")]
    pub raw_sql: Option<String>,
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct TextOptions {
    /// Ranking size.
    #[arg(long)]
    pub top: Option<usize>,
    /// Terms taken from each article.
    #[arg(long)]
    pub kper_doc: Option<usize>,
    /// Document-frequency cutoff in (0, 1]; 1 disables it.
    #[arg(long)]
    pub max_df: Option<f64>,
    /// Extra stopwords, one per line.
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Words removed from the final ranking, one per line.
    #[arg(long, value_name = "FILE")]
    pub suppress: Option<PathBuf>,
    /// Tab-separated `form<TAB>lemma` dictionary replacing the rule lemmatizer.
    #[arg(long, value_name = "FILE")]
    pub lemma_dict: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KeywordArgs {
    #[command(flatten)]
    pub selection: Selection,
    /// Wider selection used as the TF-IDF corpus; defaults to the articles of interest.
    #[arg(long, value_name = "Q1..Q9|FILE|EXPR")]
    pub corpus_query: Option<String>,
    #[command(flatten)]
    pub text: TextOptions,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpanArgs {
    #[arg(long)]
    pub from_year: Option<i32>,
    #[arg(long)]
    pub to_year: Option<i32>,
}

#[derive(Debug, Args)]
pub struct TrendArgs {
    #[command(flatten)]
    pub selection: Selection,
    #[command(flatten)]
    pub span: SpanArgs,
    #[command(flatten)]
    pub text: TextOptions,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmergingArgs {
    #[command(flatten)]
    pub selection: Selection,
    #[command(flatten)]
    pub span: SpanArgs,
    #[command(flatten)]
    pub text: TextOptions,
    /// First year of the late half; defaults to the middle of the span.
    #[arg(long)]
    pub split_year: Option<i32>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommunityArgs {
    #[command(flatten)]
    pub selection: Selection,
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    /// Smallest connected component reported.
    #[arg(long, default_value_t = bibcorpus_core::community::DEFAULT_MIN_COMPONENT)]
    pub min_component: usize,
    /// Abort when more maximal cliques than this are found.
    #[arg(long, default_value_t = bibcorpus_core::community::DEFAULT_CLIQUE_CEILING)]
    pub clique_ceiling: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Category {
    Allocation,
    Provisioning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    TopCited,
    Recent,
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    #[arg(long, value_enum)]
    pub category: Category,
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, default_value_t = 10)]
    pub limit: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
