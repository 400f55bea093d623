use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A publication reduced to what the co-authorship analysis needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthoredPublication {
    pub publication_id: i64,
    pub n_citations: Option<u64>,
    /// Author ids; duplicates are ignored.
    pub authors: Vec<i64>,
}

impl AuthoredPublication {
    pub fn new(publication_id: i64, n_citations: Option<u64>, authors: impl IntoIterator<Item = i64>) -> Self {
        AuthoredPublication {
            publication_id,
            n_citations,
            authors: authors.into_iter().collect(),
        }
    }

    /// Distinct authors in ascending order.
    pub fn distinct_authors(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.authors.iter().copied().collect();
        set.into_iter().collect()
    }
}

/// Undirected co-authorship graph over the publications in scope.
///
/// Nodes are dense indices into `nodes` (author ids ascending). Every author
/// of an in-scope publication is a node, including sole authors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoauthorGraph {
    nodes: Vec<i64>,
    index: BTreeMap<i64, usize>,
    adjacency: Vec<BTreeMap<usize, u32>>,
    scope: BTreeSet<i64>,
    relation_occurrences: u64,
}

impl CoauthorGraph {
    pub fn build(pubs: &[AuthoredPublication]) -> Self {
        let mut g = CoauthorGraph::default();
        let mut ids: BTreeSet<i64> = BTreeSet::new();
        for p in pubs {
            g.scope.insert(p.publication_id);
            ids.extend(p.authors.iter().copied());
        }
        g.nodes = ids.into_iter().collect();
        g.index = g.nodes.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        g.adjacency = vec![BTreeMap::new(); g.nodes.len()];
        for p in pubs {
            let authors: Vec<usize> = p.distinct_authors().iter().map(|a| g.index[a]).collect();
            for (i, &u) in authors.iter().enumerate() {
                for &v in &authors[i + 1..] {
                    *g.adjacency[u].entry(v).or_default() += 1;
                    *g.adjacency[v].entry(u).or_default() += 1;
                    g.relation_occurrences += 1;
                }
            }
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    /// Author id of a node index.
    pub fn author(&self, node: usize) -> i64 {
        self.nodes[node]
    }

    pub fn authors(&self) -> &[i64] {
        &self.nodes
    }

    pub fn node_of(&self, author: i64) -> Option<usize> {
        self.index.get(&author).copied()
    }

    pub fn scope(&self) -> &BTreeSet<i64> {
        &self.scope
    }

    /// Author pairs summed over publications, repeats included.
    pub fn relation_occurrences(&self) -> u64 {
        self.relation_occurrences
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[node].keys().copied()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains_key(&v)
    }

    pub fn weight(&self, a: i64, b: i64) -> Option<u32> {
        let (u, v) = (self.node_of(a)?, self.node_of(b)?);
        self.adjacency[u].get(&v).copied()
    }

    /// Edges as `(author, author, weight)` with the smaller id first, sorted.
    pub fn edges(&self) -> Vec<(i64, i64, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, adj) in self.adjacency.iter().enumerate() {
            for (&v, &w) in adj.range(u + 1..) {
                out.push((self.nodes[u], self.nodes[v], w));
            }
        }
        out
    }

    /// Connected components as sorted author-id lists, largest first, ties by
    /// smallest member; components smaller than `min_size` are dropped.
    pub fn connected_components(&self, min_size: usize) -> Vec<Vec<i64>> {
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(self.nodes[u]);
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            if members.len() >= min_size {
                members.sort_unstable();
                out.push(members);
            }
        }
        out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        out
    }

    /// `a b weight` per line.
    pub fn to_edge_list(&self) -> String {
        self.edges().iter().map(|(a, b, w)| format!("{a} {b} {w}\n")).collect()
    }

    /// Graphviz DOT; `label` supplies optional display names.
    pub fn to_dot(&self, label: impl Fn(i64) -> Option<String>) -> String {
        let mut out = String::from("graph coauthors {\n");
        for &a in &self.nodes {
            match label(a) {
                Some(name) => out.push_str(&format!("  {a} [label=\"{}\"];\n", dot_escape(&name))),
                None => out.push_str(&format!("  {a};\n")),
            }
        }
        for (a, b, w) in self.edges() {
            out.push_str(&format!("  {a} -- {b} [weight={w}];\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ")
}
