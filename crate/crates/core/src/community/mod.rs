//! Co-authorship community analysis over a set of publications: the graph,
//! its components and maximal cliques, citation statistics per clique, the
//! articles-per-author distribution and the summary table numbers.

mod cliques;
mod graph;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub use cliques::maximal_cliques;
pub use graph::{AuthoredPublication, CoauthorGraph};

/// Default ceiling on enumerated maximal cliques.
pub const DEFAULT_CLIQUE_CEILING: usize = 5_000_000;
/// Smallest component reported by default.
pub const DEFAULT_MIN_COMPONENT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommunityError {
    #[error("more than {ceiling} maximal cliques; narrow the query or raise the ceiling")]
    TooManyCliques { ceiling: usize },
}

/// The six headline numbers for a publication set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunitySummary {
    pub articles: usize,
    pub authors: usize,
    /// Author pairs summed over publications, repeats included.
    pub coauthorship_relations: u64,
    /// Distinct author pairs.
    pub unique_relations: u64,
    /// Maximal cliques with two or more members.
    pub cliques: usize,
    /// Size of the largest maximal clique (1 for a graph without edges, 0 without authors).
    pub largest_clique: usize,
}

/// Citation figures for the members of one clique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueStat {
    pub members: Vec<i64>,
    pub clique_size: usize,
    pub avg_author_citations: f64,
    pub max_author_citations: u64,
    /// Members none of whose in-scope publications carry a citation count.
    pub members_without_citations: Vec<i64>,
}

/// Per-author in-scope citation sums; `None` when none of the author's
/// publications has a citation count.
pub fn citation_index(pubs: &[AuthoredPublication]) -> BTreeMap<i64, Option<u64>> {
    let mut index: BTreeMap<i64, Option<u64>> = BTreeMap::new();
    for p in pubs {
        for a in p.distinct_authors() {
            let slot = index.entry(a).or_insert(None);
            if let Some(c) = p.n_citations {
                *slot = Some(slot.unwrap_or(0) + c);
            }
        }
    }
    index
}

pub fn clique_stats(cliques: &[Vec<i64>], citations: &BTreeMap<i64, Option<u64>>) -> Vec<CliqueStat> {
    cliques
        .iter()
        .map(|members| {
            let values: Vec<u64> = members
                .iter()
                .map(|a| citations.get(a).copied().flatten().unwrap_or(0))
                .collect();
            let missing = members
                .iter()
                .copied()
                .filter(|a| citations.get(a).copied().flatten().is_none())
                .collect();
            let sum: u64 = values.iter().sum();
            CliqueStat {
                members: members.clone(),
                clique_size: members.len(),
                avg_author_citations: if members.is_empty() { 0.0 } else { sum as f64 / members.len() as f64 },
                max_author_citations: values.iter().copied().max().unwrap_or(0),
                members_without_citations: missing,
            }
        })
        .collect()
}

/// Empirical CDF of articles per author: `(article_count, fraction of authors
/// with at most that many)` for each distinct count, ending at exactly 1.0.
pub fn articles_per_author_cdf(pubs: &[AuthoredPublication]) -> Vec<(usize, f64)> {
    let mut per_author: BTreeMap<i64, usize> = BTreeMap::new();
    for p in pubs {
        for a in p.distinct_authors() {
            *per_author.entry(a).or_default() += 1;
        }
    }
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for c in per_author.values() {
        *histogram.entry(*c).or_default() += 1;
    }
    let total = per_author.len();
    let mut cumulative = 0;
    histogram
        .into_iter()
        .map(|(count, authors)| {
            cumulative += authors;
            let f = if cumulative == total { 1.0 } else { cumulative as f64 / total as f64 };
            (count, f)
        })
        .collect()
}

/// Unique pairs divided by pair occurrences; absent when there are none.
pub fn one_time_fraction(graph: &CoauthorGraph) -> Option<f64> {
    let total = graph.relation_occurrences();
    (total > 0).then(|| graph.edge_count() as f64 / total as f64)
}

pub fn summarize(graph: &CoauthorGraph, all_cliques: &[Vec<i64>], articles: usize) -> CommunitySummary {
    CommunitySummary {
        articles,
        authors: graph.node_count(),
        coauthorship_relations: graph.relation_occurrences(),
        unique_relations: graph.edge_count() as u64,
        cliques: all_cliques.iter().filter(|c| c.len() >= 2).count(),
        largest_clique: all_cliques.iter().map(Vec::len).max().unwrap_or(0),
    }
}

pub fn community_summary(pubs: &[AuthoredPublication], ceiling: usize) -> Result<CommunitySummary, CommunityError> {
    let g = CoauthorGraph::build(pubs);
    let cliques = maximal_cliques(&g, 1, ceiling)?;
    Ok(summarize(&g, &cliques, pubs.len()))
}

/// Bar-plot series over clique size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueSizeRow {
    pub size: usize,
    /// Maximal cliques of this size.
    pub cliques: usize,
    /// Distinct authors belonging to at least one maximal clique of this size.
    pub authors: usize,
}

pub fn clique_size_distribution(cliques: &[Vec<i64>]) -> Vec<CliqueSizeRow> {
    let mut by_size: BTreeMap<usize, (usize, BTreeSet<i64>)> = BTreeMap::new();
    for c in cliques {
        let slot = by_size.entry(c.len()).or_default();
        slot.0 += 1;
        slot.1.extend(c.iter().copied());
    }
    by_size
        .into_iter()
        .map(|(size, (n, authors))| CliqueSizeRow {
            size,
            cliques: n,
            authors: authors.len(),
        })
        .collect()
}

/// Everything the community analysis produces for one publication set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityReport {
    pub summary: CommunitySummary,
    pub one_time_fraction: Option<f64>,
    pub components: Vec<Vec<i64>>,
    /// Maximal cliques of size two or more.
    pub cliques: Vec<Vec<i64>>,
    pub clique_sizes: Vec<CliqueSizeRow>,
    pub clique_stats: Vec<CliqueStat>,
    pub articles_per_author_cdf: Vec<(usize, f64)>,
    /// Authors in scope without any citation data.
    pub authors_without_citations: Vec<i64>,
}

pub fn analyze(
    pubs: &[AuthoredPublication],
    min_component: usize,
    ceiling: usize,
) -> Result<(CoauthorGraph, CommunityReport), CommunityError> {
    let g = CoauthorGraph::build(pubs);
    let all = maximal_cliques(&g, 1, ceiling)?;
    let summary = summarize(&g, &all, pubs.len());
    let cliques: Vec<Vec<i64>> = all.into_iter().filter(|c| c.len() >= 2).collect();
    let citations = citation_index(pubs);
    let report = CommunityReport {
        summary,
        one_time_fraction: one_time_fraction(&g),
        components: g.connected_components(min_component),
        clique_sizes: clique_size_distribution(&cliques),
        clique_stats: clique_stats(&cliques, &citations),
        cliques,
        articles_per_author_cdf: articles_per_author_cdf(pubs),
        authors_without_citations: citations.iter().filter(|(_, c)| c.is_none()).map(|(a, _)| *a).collect(),
    };
    Ok((g, report))
}
