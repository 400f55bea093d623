use serde::{Deserialize, Serialize};

/// A unified publication row as held by the corpus store.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub id: i64,
    /// Display form of the title.
    pub title: String,
    /// Matching key; always `normalize_title(title)`.
    pub normalized_title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: Option<String>,
    /// Canonical venue abbreviation.
    pub venue: String,
    pub year: i32,
    pub volume: Option<String>,
    /// Case-folded DOI without resolver prefix.
    pub doi: Option<String>,
    pub n_citations: Option<u64>,
}

impl Publication {
    /// Title and abstract joined by a single space, the text fed to keyword analysis.
    pub fn text(&self) -> String {
        match &self.abstract_text {
            Some(a) => format!("{} {}", self.title, a),
            None => self.title.clone(),
        }
    }
}
