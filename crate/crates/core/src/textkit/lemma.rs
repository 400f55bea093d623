use std::collections::HashMap;
use std::path::Path;

const EXCEPTIONS_TSV: &str = include_str!("../../data/lemma_exceptions.tsv");

/// Maps an inflected token to its root form.
pub trait Lemmatize {
    fn lemma(&self, word: &str) -> String;
}

/// Deterministic suffix rules for English plural nouns backed by an exception table.
///
/// Only nominal inflection is undone: `workflows -> workflow`, `policies ->
/// policy`, `processes -> process`. Verb forms such as `scheduling` are kept
/// as they are.
#[derive(Debug, Clone)]
pub struct RuleLemmatizer {
    exceptions: HashMap<String, String>,
}

impl Default for RuleLemmatizer {
    fn default() -> Self {
        RuleLemmatizer {
            exceptions: parse_pairs(EXCEPTIONS_TSV),
        }
    }
}

impl RuleLemmatizer {
    /// Shipped rules plus extra `inflected -> lemma` exceptions (these win).
    pub fn with_exceptions(extra: impl IntoIterator<Item = (String, String)>) -> Self {
        let mut l = Self::default();
        l.exceptions.extend(extra);
        l
    }
}

impl Lemmatize for RuleLemmatizer {
    fn lemma(&self, word: &str) -> String {
        if let Some(l) = self.exceptions.get(word) {
            return l.clone();
        }
        let n = word.chars().count();
        if n <= 3 || !word.chars().all(char::is_alphabetic) {
            return word.to_string();
        }
        if word.ends_with("ss") || word.ends_with("us") || word.ends_with("is") {
            return word.to_string();
        }
        if n > 4 {
            if let Some(stem) = word.strip_suffix("ies") {
                return format!("{stem}y");
            }
        }
        for suffix in ["sses", "xes", "zzes", "ches", "shes"] {
            if word.ends_with(suffix) {
                return word[..word.len() - 2].to_string();
            }
        }
        match word.strip_suffix('s') {
            Some(stem) => stem.to_string(),
            None => word.to_string(),
        }
    }
}

/// Table-driven lemmatizer: unknown words map to themselves.
#[derive(Debug, Clone, Default)]
pub struct DictionaryLemmatizer {
    table: HashMap<String, String>,
}

impl DictionaryLemmatizer {
    /// Parse `inflected<TAB>lemma` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Self {
        DictionaryLemmatizer {
            table: parse_pairs(text),
        }
    }

    pub fn load(path: &Path) -> std::io::Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl Lemmatize for DictionaryLemmatizer {
    fn lemma(&self, word: &str) -> String {
        self.table.get(word).cloned().unwrap_or_else(|| word.to_string())
    }
}

/// Identity; useful to measure the lemmatizer's effect.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoLemmatizer;

impl Lemmatize for NoLemmatizer {
    fn lemma(&self, word: &str) -> String {
        word.to_string()
    }
}

fn parse_pairs(text: &str) -> HashMap<String, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter_map(|l| {
            let (a, b) = l.split_once('\t')?;
            Some((a.trim().to_lowercase(), b.trim().to_lowercase()))
        })
        .collect()
}
