use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{DomainGraph, GraphError};

/// Per-community terms `(1/2m) * sum_{i,j in c} (A_ij - d_i d_j / 2m)` on the
/// undirected collapse, where `m` is the undirected edge count.
fn community_terms(g: &DomainGraph) -> Result<Vec<f64>, GraphError> {
    let m = g.undirected_edge_count();
    if m == 0 {
        return Err(GraphError::NoEdges);
    }
    let two_m = 2.0 * m as f64;
    let k = g.communities().len();
    let mut internal = vec![0usize; k];
    let mut degree_sum = vec![0usize; k];
    for v in 0..g.len() {
        let c = g.community_index(v);
        degree_sum[c] += g.degree(v);
        internal[c] += g.neighbors(v).iter().filter(|&&u| g.community_index(u) == c).count();
    }
    Ok((0..k)
        .map(|c| {
            let d = degree_sum[c] as f64;
            (internal[c] as f64 - d * d / two_m) / two_m
        })
        .collect())
}

pub fn modularity(g: &DomainGraph) -> Result<f64, GraphError> {
    Ok(community_terms(g)?.iter().sum())
}

/// Contribution of each community to the global modularity; the values sum
/// to [`modularity`].
pub fn per_community_modularity(g: &DomainGraph) -> Result<Vec<(String, f64)>, GraphError> {
    let terms = community_terms(g)?;
    Ok(g.communities().iter().cloned().zip(terms).collect())
}
