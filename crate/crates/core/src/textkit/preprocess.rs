use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use super::lemma::{Lemmatize, RuleLemmatizer};

const ENGLISH_STOPWORDS: &str = include_str!("../../data/stopwords/english.txt");
const CUSTOM_STOPWORDS: &str = include_str!("../../data/stopwords/custom.txt");

/// Word list file: one entry per line, blank lines and `#` comments ignored.
/// Entries go through the same character filter as tokens, so `don't`
/// matches the token `dont`.
pub fn parse_word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| strip_disallowed(&l.to_lowercase()))
        .filter(|w| !w.is_empty())
        .collect()
}

pub fn load_word_list(path: &Path) -> std::io::Result<BTreeSet<String>> {
    Ok(parse_word_list(&std::fs::read_to_string(path)?))
}

/// The shipped standard English list.
pub fn english_stopwords() -> BTreeSet<String> {
    parse_word_list(ENGLISH_STOPWORDS)
}

/// The shipped custom list of domain boilerplate words.
pub fn custom_stopwords() -> BTreeSet<String> {
    parse_word_list(CUSTOM_STOPWORDS)
}

fn strip_disallowed(text: &str) -> String {
    text.chars()
        .filter(|c| c.is_alphanumeric() || *c == '_' || c.is_whitespace())
        .collect()
}

/// Text to token pipeline:
/// lowercase, strip characters other than alphanumerics, `_` and whitespace,
/// split on whitespace, lemmatize, drop stopwords.
#[derive(Clone)]
pub struct Preprocessor {
    lemmatizer: Arc<dyn Lemmatize + Send + Sync>,
    stopwords: BTreeSet<String>,
}

impl Default for Preprocessor {
    /// Rule lemmatizer with the English and custom stopword lists.
    fn default() -> Self {
        let mut stopwords = english_stopwords();
        stopwords.extend(custom_stopwords());
        Preprocessor::new(RuleLemmatizer::default(), stopwords)
    }
}

impl std::fmt::Debug for Preprocessor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Preprocessor")
            .field("stopwords", &self.stopwords.len())
            .finish_non_exhaustive()
    }
}

impl Preprocessor {
    pub fn new(lemmatizer: impl Lemmatize + Send + Sync + 'static, stopwords: BTreeSet<String>) -> Self {
        Preprocessor {
            lemmatizer: Arc::new(lemmatizer),
            stopwords,
        }
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn preprocess(&self, text: &str) -> Vec<String> {
        let lowered = text.to_lowercase();
        let cleaned = strip_disallowed(&lowered);
        cleaned
            .split_whitespace()
            .map(|w| self.lemmatizer.lemma(w))
            .filter(|w| !w.is_empty() && !self.stopwords.contains(w))
            .collect()
    }
}

/// [`Preprocessor::preprocess`] with the default configuration.
pub fn preprocess(text: &str) -> Vec<String> {
    thread_local! {
        static DEFAULT: Preprocessor = Preprocessor::default();
    }
    DEFAULT.with(|p| p.preprocess(text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pipeline_examples() {
        assert_eq!(preprocess("Scheduling Workflows!"), vec!["scheduling", "workflow"]);
        assert!(preprocess("the of and").is_empty());
        assert_eq!(preprocess("snake_case kept"), vec!["snake_case", "kept"]);
        assert!(preprocess("").is_empty());
    }

    #[test]
    fn punctuation_is_removed_not_split() {
        assert_eq!(preprocess("cloud-based, deadline-aware."), vec!["cloudbased", "deadlineaware"]);
        assert_eq!(preprocess("Don't stop"), vec!["stop"]);
    }

    #[test]
    fn lists_have_expected_sizes() {
        // "it's" folds onto "its".
        assert_eq!(english_stopwords().len(), 178);
        assert!(custom_stopwords().contains("paper"));
    }

    proptest! {
        #[test]
        fn tokens_are_clean(text in "\\PC{0,80}") {
            let p = Preprocessor::default();
            for t in p.preprocess(&text) {
                prop_assert!(!t.is_empty());
                prop_assert!(t.chars().all(|c| c.is_alphanumeric() || c == '_'));
                prop_assert!(!p.stopwords().contains(&t));
                prop_assert_eq!(t.to_lowercase(), t.clone());
            }
        }
    }
}
