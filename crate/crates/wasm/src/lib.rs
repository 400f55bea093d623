//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each exported function takes pasted text and returns a JSON string. The
//! plain-Rust versions in [`ops`] do the work and are tested natively.

use wasm_bindgen::prelude::*;

pub mod ops {
    use bibcorpus_core::community::{analyze, AuthoredPublication, DEFAULT_CLIQUE_CEILING};
    use bibcorpus_core::textkit::{top_keywords, KeywordConfig, Preprocessor, TokenDoc};
    use bibcorpus_core::trends::{keywords_per_year_tokens, trend_report};
    use serde_json::json;
    use std::collections::BTreeMap;

    /// Largest clique enumeration allowed in the browser.
    const BROWSER_CLIQUE_CEILING: usize = DEFAULT_CLIQUE_CEILING / 100;

    fn config(top: usize, max_df: f64) -> KeywordConfig {
        KeywordConfig {
            top_n: top,
            max_df,
            ..Default::default()
        }
    }

    /// Documents are separated by blank lines.
    pub fn rank_keywords(text: &str, top: usize, max_df: f64) -> Result<String, String> {
        let pre = Preprocessor::default();
        let docs: Vec<TokenDoc> = text
            .split("\n\n")
            .map(str::trim)
            .filter(|d| !d.is_empty())
            .enumerate()
            .map(|(i, d)| TokenDoc::from_text(i as i64, d, &pre))
            .collect();
        let ranking = top_keywords(&docs, &docs, &config(top, max_df)).map_err(|e| e.to_string())?;
        Ok(json!({ "documents": docs.len(), "ranking": ranking }).to_string())
    }

    /// One document per line, prefixed by its year: `2014 Some title text`.
    pub fn emerging_keywords(text: &str, top: usize, max_df: f64, split_year: Option<i32>) -> Result<String, String> {
        let pre = Preprocessor::default();
        let mut docs = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let (year, rest) = line.trim().split_once(char::is_whitespace).unwrap_or((line.trim(), ""));
            let year: i32 = year.parse().map_err(|_| format!("line {}: expected a year first", i + 1))?;
            docs.push((year, TokenDoc::from_text(i as i64, rest, &pre)));
        }
        let start = docs.iter().map(|d| d.0).min().ok_or("no documents")?;
        let end = docs.iter().map(|d| d.0).max().ok_or("no documents")?;
        let rankings = keywords_per_year_tokens(&docs, start, end, &config(top, max_df)).map_err(|e| e.to_string())?;
        let report = trend_report(&rankings, split_year).map_err(|e| e.to_string())?;
        let per_year: BTreeMap<i32, Vec<&str>> = rankings.per_year.iter().map(|(y, r)| (*y, r.keywords())).collect();
        Ok(json!({
            "split_year": report.split_year,
            "new_keywords": report.new_keywords,
            "rising_keywords": report.rising_keywords,
            "per_year": per_year,
        })
        .to_string())
    }

    /// One article per line, authors separated by commas or semicolons.
    pub fn coauthor_community(text: &str) -> Result<String, String> {
        let mut ids: BTreeMap<String, i64> = BTreeMap::new();
        let mut pubs = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let mut authors = Vec::new();
            for name in line.split([',', ';']).map(str::trim).filter(|n| !n.is_empty()) {
                let next = ids.len() as i64;
                authors.push(*ids.entry(name.to_string()).or_insert(next));
            }
            pubs.push(AuthoredPublication::new(i as i64, None, authors));
        }
        let names: BTreeMap<i64, &str> = ids.iter().map(|(n, id)| (*id, n.as_str())).collect();
        let (graph, report) = analyze(&pubs, 1, BROWSER_CLIQUE_CEILING).map_err(|e| e.to_string())?;
        let named = |groups: &[Vec<i64>]| -> Vec<Vec<&str>> {
            groups.iter().map(|g| g.iter().map(|a| names[a]).collect()).collect()
        };
        let edges: Vec<(&str, &str, u32)> = graph.edges().into_iter().map(|(a, b, w)| (names[&a], names[&b], w)).collect();
        Ok(json!({
            "summary": report.summary,
            "one_time_fraction": report.one_time_fraction,
            "components": named(&report.components),
            "cliques": named(&report.cliques),
            "edges": edges,
        })
        .to_string())
    }
}

#[wasm_bindgen]
pub fn rank_keywords(text: &str, top: usize, max_df: f64) -> Result<String, JsValue> {
    ops::rank_keywords(text, top, max_df).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn emerging_keywords(text: &str, top: usize, max_df: f64, split_year: Option<i32>) -> Result<String, JsValue> {
    ops::emerging_keywords(text, top, max_df, split_year).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn coauthor_community(text: &str) -> Result<String, JsValue> {
    ops::coauthor_community(text).map_err(|e| JsValue::from_str(&e))
}
