//! Labeled domain hyperlink graph and its structural measures.

mod centrality;
mod components;
mod modularity;
mod robustness;

pub use centrality::{betweenness, centrality, closeness, degree, eigenvector, Measure};
pub use components::{
    strongly_connected_components, summary_stats, weakly_connected_components, NetworkSummary,
};
pub use modularity::{modularity, per_community_modularity};
pub use robustness::{
    largest_component_curve, removal_order, robustness_coefficient, robustness_from_curve,
};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

/// Community of vertices without a topic label.
pub const UNLABELED: &str = "Unlabeled";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("need at least {needed} vertices, graph has {found}")]
    TooFewVertices { needed: usize, found: usize },
}

/// Directed graph of domains; every vertex carries a community label.
/// Vertices are ordered by name; edges are binary and never self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainGraph {
    names: Vec<String>,
    community: Vec<usize>,
    communities: Vec<String>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    und: Vec<Vec<usize>>,
    edges: usize,
}

#[derive(Debug, Clone, Default)]
pub struct DomainGraphBuilder {
    vertices: BTreeSet<String>,
    edges: BTreeSet<(String, String)>,
}

impl DomainGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, domain: &str) -> &mut Self {
        if !self.vertices.contains(domain) {
            self.vertices.insert(domain.to_string());
        }
        self
    }

    /// Adds `src -> dst`; self-loops only register the vertex.
    pub fn add_edge(&mut self, src: &str, dst: &str) -> &mut Self {
        self.add_vertex(src);
        self.add_vertex(dst);
        if src != dst {
            self.edges.insert((src.to_string(), dst.to_string()));
        }
        self
    }

    /// Domains absent from `labels` get [`UNLABELED`].
    pub fn build(&self, labels: &BTreeMap<String, String>) -> DomainGraph {
        let names: Vec<String> = self.vertices.iter().cloned().collect();
        let label_of = |n: &String| labels.get(n).map_or(UNLABELED, String::as_str);
        let communities: Vec<String> = names
            .iter()
            .map(label_of)
            .collect::<BTreeSet<&str>>()
            .into_iter()
            .map(str::to_string)
            .collect();
        let community = names
            .iter()
            .map(|n| communities.binary_search_by(|c| c.as_str().cmp(label_of(n))).unwrap())
            .collect();
        let index = |n: &str| names.binary_search_by(|x| x.as_str().cmp(n)).unwrap();
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|(a, b)| (index(a), index(b))).collect();
        DomainGraph::from_indexed(names, community, communities, &edges)
    }
}

impl DomainGraph {
    fn from_indexed(
        names: Vec<String>,
        community: Vec<usize>,
        communities: Vec<String>,
        edges: &[(usize, usize)],
    ) -> Self {
        let n = names.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        let mut und = vec![Vec::new(); n];
        for &(a, b) in edges {
            debug_assert_ne!(a, b);
            out[a].push(b);
            inn[b].push(a);
            und[a].push(b);
            und[b].push(a);
        }
        for lists in [&mut out, &mut inn, &mut und] {
            for l in lists.iter_mut() {
                l.sort_unstable();
                l.dedup();
            }
        }
        let edges = out.iter().map(Vec::len).sum();
        DomainGraph { names, community, communities, out, inn, und, edges }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of directed edges.
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of edges after collapsing direction.
    pub fn undirected_edge_count(&self) -> usize {
        self.und.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, domain: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(domain)).ok()
    }

    /// Sorted community labels present in the graph.
    pub fn communities(&self) -> &[String] {
        &self.communities
    }

    pub fn community_index(&self, v: usize) -> usize {
        self.community[v]
    }

    pub fn community_of(&self, v: usize) -> &str {
        &self.communities[self.community[v]]
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// Neighbors in the undirected collapse.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.und[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    /// Degree in the undirected collapse.
    pub fn degree(&self, v: usize) -> usize {
        self.und[v].len()
    }

    /// Directed edges in (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(a, l)| l.iter().map(move |&b| (a, b)))
    }

    /// Subgraph induced by `keep` (labels preserved).
    pub fn induced<F: Fn(usize) -> bool>(&self, keep: F) -> DomainGraph {
        let kept: Vec<usize> = (0..self.len()).filter(|&v| keep(v)).collect();
        let mut new_index = vec![usize::MAX; self.len()];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v] = i;
        }
        let names = kept.iter().map(|&v| self.names[v].clone()).collect();
        let used: BTreeSet<usize> = kept.iter().map(|&v| self.community[v]).collect();
        let communities: Vec<String> = used.iter().map(|&c| self.communities[c].clone()).collect();
        let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let community = kept.iter().map(|&v| remap[&self.community[v]]).collect();
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(a, b)| new_index[a] != usize::MAX && new_index[b] != usize::MAX)
            .map(|(a, b)| (new_index[a], new_index[b]))
            .collect();
        DomainGraph::from_indexed(names, community, communities, &edges)
    }

    /// Subgraph induced by the vertices carrying `label`.
    pub fn intra_subgraph(&self, label: &str) -> DomainGraph {
        match self.communities.iter().position(|c| c == label) {
            Some(c) => self.induced(|v| self.community[v] == c),
            None => self.induced(|_| false),
        }
    }

    /// Vertices with at least one incident edge.
    pub fn without_isolates(&self) -> DomainGraph {
        self.induced(|v| !self.und[v].is_empty())
    }

    pub fn community_degree_matrix(&self) -> CommunityDegreeMatrix {
        let k = self.communities.len();
        let mut counts = vec![0u64; k * k];
        for (a, b) in self.edges() {
            counts[self.community[a] * k + self.community[b]] += 1;
        }
        CommunityDegreeMatrix { labels: self.communities.clone(), counts }
    }
}

/// Directed edge counts between communities: `get(i, j)` counts edges from
/// community `i` to community `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityDegreeMatrix {
    pub labels: Vec<String>,
    counts: Vec<u64>,
}

impl CommunityDegreeMatrix {
    pub fn get(&self, from: usize, to: usize) -> u64 {
        self.counts[from * self.labels.len() + to]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn out_total(&self, from: usize) -> u64 {
        (0..self.labels.len()).map(|j| self.get(from, j)).sum()
    }

    pub fn in_total(&self, to: usize) -> u64 {
        (0..self.labels.len()).map(|i| self.get(i, to)).sum()
    }
}
