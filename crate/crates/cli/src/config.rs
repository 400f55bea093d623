//! Optional TOML run configuration. Every key is optional and every key has
//! a flag of the same meaning that takes precedence.

use crate::args::{Format, TextOptions};
use crate::error::CliError;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub db: Option<PathBuf>,
    pub venues: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub suppress: Option<PathBuf>,
    pub lemma_dict: Option<PathBuf>,
    pub from_year: Option<i32>,
    pub to_year: Option<i32>,
    pub top: Option<usize>,
    pub kper_doc: Option<usize>,
    pub max_df: Option<f64>,
    pub format: Option<String>,
}

/// Keyword settings after merging flags, config and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct TextSettings {
    pub top: usize,
    pub kper_doc: usize,
    pub max_df: f64,
    pub stopwords: Option<PathBuf>,
    pub suppress: Option<PathBuf>,
    pub lemma_dict: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(f) = &cfg.format {
            parse_format(f)?;
        }
        Ok(cfg)
    }

    pub fn db(&self, flag: Option<&Path>) -> Result<PathBuf, CliError> {
        flag.map(Path::to_path_buf)
            .or_else(|| self.db.clone())
            .ok_or_else(|| CliError::Config("no store given; pass --db or set `db` in the config".into()))
    }

    pub fn format(&self, flag: Option<Format>) -> Result<Format, CliError> {
        match (flag, &self.format) {
            (Some(f), _) => Ok(f),
            (None, Some(s)) => parse_format(s),
            (None, None) => Ok(Format::Csv),
        }
    }

    pub fn span(&self, from: Option<i32>, to: Option<i32>) -> (Option<i32>, Option<i32>) {
        (from.or(self.from_year), to.or(self.to_year))
    }

    pub fn text(&self, o: &TextOptions) -> Result<TextSettings, CliError> {
        let s = TextSettings {
            top: o.top.or(self.top).unwrap_or(10),
            kper_doc: o.kper_doc.or(self.kper_doc).unwrap_or(50),
            max_df: o.max_df.or(self.max_df).unwrap_or(0.9),
            stopwords: o.stopwords.clone().or_else(|| self.stopwords.clone()),
            suppress: o.suppress.clone().or_else(|| self.suppress.clone()),
            lemma_dict: o.lemma_dict.clone().or_else(|| self.lemma_dict.clone()),
        };
        if !(s.max_df > 0.0 && s.max_df <= 1.0) {
            return Err(CliError::Config(format!("max_df must be in (0, 1], got {}", s.max_df)));
        }
        if s.top == 0 {
            return Err(CliError::Config("top must be at least 1".into()));
        }
        if s.kper_doc == 0 {
            return Err(CliError::Config("kper_doc must be at least 1".into()));
        }
        Ok(s)
    }
}

fn parse_format(s: &str) -> Result<Format, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Config(format!("unknown format `{other}`"))),
    }
}
