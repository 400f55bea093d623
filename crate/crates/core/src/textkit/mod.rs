//! Keyword analysis: preprocessing, term counting with a document-frequency
//! cutoff, smoothed TF-IDF, and aggregation of per-article top keywords into a
//! ranking.
//!
//! The ranking for a set of articles of interest is computed against a
//! (possibly larger) corpus: the corpus fixes vocabulary and document
//! frequencies, then each article of interest contributes its `k_per_doc`
//! highest-weighted terms, and terms are ranked by how many articles picked
//! them.

mod lemma;
mod preprocess;
mod tfidf;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

pub use lemma::{DictionaryLemmatizer, Lemmatize, NoLemmatizer, RuleLemmatizer};
pub use preprocess::{
    custom_stopwords, english_stopwords, load_word_list, parse_word_list, preprocess, Preprocessor,
};
pub use tfidf::{build_count_matrix, smooth_idf, tfidf, CountMatrix, TermWeight, TfidfDoc};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TextError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("max_df must be in (0, 1], got {0}")]
    InvalidMaxDf(f64),
    #[error("requested ranking size must be positive")]
    NonPositiveN,
    #[error("k_per_doc must be positive")]
    NonPositiveK,
    #[error("article {0} of interest is not part of the corpus")]
    NotInCorpus(i64),
}

/// Preprocessed text of one publication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenDoc {
    pub publication_id: i64,
    pub tokens: Vec<String>,
}

impl TokenDoc {
    pub fn from_text(publication_id: i64, text: &str, pre: &Preprocessor) -> Self {
        TokenDoc {
            publication_id,
            tokens: pre.preprocess(text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordCount {
    pub keyword: String,
    pub count: u32,
}

/// Keywords ordered by aggregated count descending, then keyword ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct KeywordRanking {
    pub entries: Vec<KeywordCount>,
    /// Words removed from the ranking on request.
    pub suppressed: BTreeSet<String>,
    /// Size that was asked for; the ranking is shorter when fewer distinct keywords exist.
    pub requested: usize,
}

impl KeywordRanking {
    pub fn is_short(&self) -> bool {
        self.entries.len() < self.requested
    }

    pub fn keywords(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.keyword.as_str()).collect()
    }

    /// 1-based position of `keyword`.
    pub fn rank_of(&self, keyword: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.keyword == keyword).map(|i| i + 1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,keyword,count\n");
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, csv_field(&e.keyword), e.count));
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Parameters of the keyword method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordConfig {
    /// Terms taken from each article of interest.
    pub k_per_doc: usize,
    /// Ranking size.
    pub top_n: usize,
    /// Terms in at least this fraction of corpus documents are discarded; 1.0 disables the cutoff.
    pub max_df: f64,
    /// Words dropped from the final ranking (backfilled from below).
    pub suppress: BTreeSet<String>,
}

impl Default for KeywordConfig {
    fn default() -> Self {
        KeywordConfig {
            k_per_doc: 50,
            top_n: 10,
            max_df: 0.9,
            suppress: BTreeSet::new(),
        }
    }
}

/// Rank keywords of `interest` documents against `corpus`.
///
/// Every interest document must also appear (by publication id) in the corpus.
pub fn top_keywords(
    interest: &[TokenDoc],
    corpus: &[TokenDoc],
    config: &KeywordConfig,
) -> Result<KeywordRanking, TextError> {
    if config.top_n == 0 {
        return Err(TextError::NonPositiveN);
    }
    if config.k_per_doc == 0 {
        return Err(TextError::NonPositiveK);
    }
    let matrix = build_count_matrix(corpus, config.max_df)?;
    let weighted = tfidf(&matrix);
    let by_id: HashMap<i64, &TfidfDoc> = weighted.iter().map(|d| (d.publication_id, d)).collect();
    let mut selected = Vec::with_capacity(interest.len());
    for doc in interest {
        let w = by_id
            .get(&doc.publication_id)
            .ok_or(TextError::NotInCorpus(doc.publication_id))?;
        selected.push(*w);
    }
    Ok(aggregate_top_keywords(&selected, config.k_per_doc, config.top_n, &config.suppress))
}

/// Count, across documents, how often each term is among a document's
/// `k_per_doc` best terms, and return the `n` most frequent non-suppressed terms.
pub fn aggregate_top_keywords(
    docs: &[&TfidfDoc],
    k_per_doc: usize,
    n: usize,
    suppress: &BTreeSet<String>,
) -> KeywordRanking {
    let mut counts: HashMap<&str, u32> = HashMap::new();
    for doc in docs {
        let mut seen = HashSet::new();
        for w in doc.top_k(k_per_doc) {
            if seen.insert(w.term.as_str()) {
                *counts.entry(w.term.as_str()).or_default() += 1;
            }
        }
    }
    let mut entries: Vec<KeywordCount> = counts
        .into_iter()
        .filter(|(k, _)| !suppress.contains(*k))
        .map(|(k, c)| KeywordCount {
            keyword: k.to_string(),
            count: c,
        })
        .collect();
    entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.keyword.cmp(&b.keyword)));
    entries.truncate(n);
    KeywordRanking {
        entries,
        suppressed: suppress.clone(),
        requested: n,
    }
}
