//! Vertex centralities on the undirected collapse.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::DomainGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    Degree,
    Betweenness,
    Closeness,
    Eigenvector,
}

impl Measure {
    pub const ALL: [Measure; 4] =
        [Measure::Degree, Measure::Betweenness, Measure::Closeness, Measure::Eigenvector];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Eigenvector => "eigenvector",
        }
    }
}

pub fn centrality(g: &DomainGraph, measure: Measure) -> Vec<f64> {
    match measure {
        Measure::Degree => degree(g),
        Measure::Betweenness => betweenness(g),
        Measure::Closeness => closeness(g),
        Measure::Eigenvector => eigenvector(g),
    }
}

pub fn degree(g: &DomainGraph) -> Vec<f64> {
    (0..g.len()).map(|v| g.degree(v) as f64).collect()
}

/// Shortest-path betweenness (Brandes), normalized by the number of vertex
/// pairs excluding the vertex itself, `(n-1)(n-2)/2`.
pub fn betweenness(g: &DomainGraph) -> Vec<f64> {
    let n = g.len();
    let mut bc = vec![0.0; n];
    if n < 3 {
        return bc;
    }
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for s in 0..n {
        if g.neighbors(s).is_empty() {
            continue;
        }
        for v in order.drain(..) {
            sigma[v] = 0.0;
            dist[v] = usize::MAX;
            delta[v] = 0.0;
            preds[v].clear();
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    // Each unordered pair was counted from both ends.
    let scale = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
    bc.iter_mut().for_each(|b| *b *= scale);
    bc
}

/// Inverse mean distance to the other vertices of the same component;
/// isolated vertices get 0.
pub fn closeness(g: &DomainGraph) -> Vec<f64> {
    let n = g.len();
    let mut out = vec![0.0; n];
    let mut dist = vec![usize::MAX; n];
    let mut seen = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for s in 0..n {
        for v in seen.drain(..) {
            dist[v] = usize::MAX;
        }
        dist[s] = 0;
        seen.push(s);
        queue.push_back(s);
        let mut total = 0usize;
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    total += dist[w];
                    seen.push(w);
                    queue.push_back(w);
                }
            }
        }
        if total > 0 {
            out[s] = (seen.len() - 1) as f64 / total as f64;
        }
    }
    out
}

/// Principal eigenvector of the undirected adjacency matrix scaled to a
/// maximum of 1. Power iteration runs on `A + I`, which has the same
/// eigenvectors but no ±λ ties on bipartite components.
pub fn eigenvector(g: &DomainGraph) -> Vec<f64> {
    let n = g.len();
    if n == 0 {
        return Vec::new();
    }
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..200_000 {
        for v in 0..n {
            next[v] = x[v] + g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>();
        }
        let max = next.iter().fold(0.0f64, |m, &v| m.max(v));
        next.iter_mut().for_each(|v| *v /= max);
        let diff = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        core::mem::swap(&mut x, &mut next);
        if diff < 1e-10 {
            break;
        }
    }
    x
}
