use super::{CoauthorGraph, CommunityError};

/// Maximal cliques with at least `min_size` members, as sorted author-id
/// lists ordered by size descending then lexicographically.
///
/// Enumeration is Bron–Kerbosch with Tomita pivoting. It stops with
/// [`CommunityError::TooManyCliques`] once more than `ceiling` cliques
/// (of any size) have been found.
pub fn maximal_cliques(g: &CoauthorGraph, min_size: usize, ceiling: usize) -> Result<Vec<Vec<i64>>, CommunityError> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = (0..g.node_count()).collect();
    expand(g, &mut r, p, Vec::new(), &mut found, ceiling)?;
    let mut out: Vec<Vec<i64>> = found
        .into_iter()
        .filter(|c| c.len() >= min_size)
        .map(|c| {
            let mut ids: Vec<i64> = c.into_iter().map(|v| g.author(v)).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn expand(
    g: &CoauthorGraph,
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    found: &mut Vec<Vec<usize>>,
    ceiling: usize,
) -> Result<(), CommunityError> {
    if p.is_empty() {
        if x.is_empty() {
            if found.len() >= ceiling {
                return Err(CommunityError::TooManyCliques { ceiling });
            }
            found.push(r.clone());
        }
        return Ok(());
    }
    // Pivot: the vertex of P ∪ X with most neighbours in P.
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| (p.iter().filter(|&&v| g.is_adjacent(u, v)).count(), std::cmp::Reverse(u)))
        .expect("P is non-empty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !g.is_adjacent(pivot, v)).collect();
    for v in candidates {
        let next_p = p.iter().copied().filter(|&w| g.is_adjacent(v, w)).collect();
        let next_x = x.iter().copied().filter(|&w| g.is_adjacent(v, w)).collect();
        r.push(v);
        expand(g, r, next_p, next_x, found, ceiling)?;
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
    Ok(())
}
