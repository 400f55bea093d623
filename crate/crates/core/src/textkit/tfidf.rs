use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

use super::{TextError, TokenDoc};

/// Corpus term counts after the document-frequency cutoff.
///
/// Columns are assigned in lexicographic term order so the matrix is
/// independent of document order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountMatrix {
    /// Term for each column.
    pub terms: Vec<String>,
    pub vocabulary: BTreeMap<String, usize>,
    /// Per document: `(publication_id, [(column, count)])`, columns ascending.
    pub doc_counts: Vec<(i64, Vec<(usize, u32)>)>,
    /// Documents containing each column's term.
    pub doc_freq: Vec<u32>,
    pub n_docs: usize,
    pub max_df: f64,
}

/// Weight of one term in one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermWeight {
    pub term: String,
    /// Raw count in the document.
    pub tf: u32,
    /// Documents in the corpus containing the term.
    pub df: u32,
    pub idf: f64,
    /// `tf * idf`, L2-normalised over the document.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfDoc {
    pub publication_id: i64,
    /// Sorted by term.
    pub weights: Vec<TermWeight>,
}

impl TfidfDoc {
    /// The `k` highest-weighted terms: weight descending, then raw count
    /// descending, then term ascending.
    pub fn top_k(&self, k: usize) -> Vec<&TermWeight> {
        let mut ranked: Vec<&TermWeight> = self.weights.iter().filter(|w| w.weight > 0.0).collect();
        ranked.sort_by(|a, b| {
            b.weight
                .total_cmp(&a.weight)
                .then_with(|| b.tf.cmp(&a.tf))
                .then_with(|| a.term.cmp(&b.term))
        });
        ranked.truncate(k);
        ranked
    }

    pub fn l2_norm(&self) -> f64 {
        self.weights.iter().map(|w| w.weight * w.weight).sum::<f64>().sqrt()
    }
}

/// Count terms over `docs`, discarding every term whose document frequency
/// is at least `max_df` of the corpus. `max_df = 1.0` keeps every term.
pub fn build_count_matrix(docs: &[TokenDoc], max_df: f64) -> Result<CountMatrix, TextError> {
    if docs.is_empty() {
        return Err(TextError::EmptyCorpus);
    }
    if !(max_df > 0.0 && max_df <= 1.0) {
        return Err(TextError::InvalidMaxDf(max_df));
    }
    let n_docs = docs.len();
    let per_doc: Vec<HashMap<&str, u32>> = docs
        .iter()
        .map(|d| {
            let mut counts: HashMap<&str, u32> = HashMap::new();
            for t in &d.tokens {
                *counts.entry(t.as_str()).or_default() += 1;
            }
            counts
        })
        .collect();
    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for counts in &per_doc {
        for term in counts.keys() {
            *df.entry(term).or_default() += 1;
        }
    }
    let kept: Vec<(&str, u32)> = df
        .into_iter()
        .filter(|&(_, f)| max_df >= 1.0 || (f as f64 / n_docs as f64) < max_df)
        .collect();
    let terms: Vec<String> = kept.iter().map(|(t, _)| t.to_string()).collect();
    let doc_freq: Vec<u32> = kept.iter().map(|&(_, f)| f).collect();
    let vocabulary: BTreeMap<String, usize> = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let doc_counts = docs
        .iter()
        .zip(&per_doc)
        .map(|(d, counts)| {
            let mut row: Vec<(usize, u32)> = counts
                .iter()
                .filter_map(|(t, &c)| vocabulary.get(*t).map(|&col| (col, c)))
                .collect();
            row.sort_unstable();
            (d.publication_id, row)
        })
        .collect();
    Ok(CountMatrix {
        terms,
        vocabulary,
        doc_counts,
        doc_freq,
        n_docs,
        max_df,
    })
}

/// Smoothed inverse document frequency: `ln((1 + n) / (1 + df)) + 1`.
pub fn smooth_idf(n_docs: usize, df: u32) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// TF-IDF weights (`tf * idf`, each document vector L2-normalised).
pub fn tfidf(matrix: &CountMatrix) -> Vec<TfidfDoc> {
    let idf: Vec<f64> = matrix.doc_freq.iter().map(|&df| smooth_idf(matrix.n_docs, df)).collect();
    matrix
        .doc_counts
        .iter()
        .map(|(id, row)| {
            let raw: Vec<f64> = row.iter().map(|&(col, c)| c as f64 * idf[col]).collect();
            let norm = raw.iter().map(|w| w * w).sum::<f64>().sqrt();
            let weights = row
                .iter()
                .zip(raw)
                .map(|(&(col, c), w)| TermWeight {
                    term: matrix.terms[col].clone(),
                    tf: c,
                    df: matrix.doc_freq[col],
                    idf: idf[col],
                    weight: if norm > 0.0 { w / norm } else { 0.0 },
                })
                .collect();
            TfidfDoc {
                publication_id: *id,
                weights,
            }
        })
        .collect()
}
