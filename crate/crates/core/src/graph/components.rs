use alloc::vec;
use alloc::vec::Vec;

use super::DomainGraph;

/// Weakly connected components, each sorted, ordered by smallest vertex.
pub fn weakly_connected_components(g: &DomainGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Strongly connected components (iterative Tarjan), each sorted, ordered
/// by smallest vertex.
pub fn strongly_connected_components(g: &DomainGraph) -> Vec<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let n = g.len();
    let mut index = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    // (vertex, next child position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            let succ = g.out_neighbors(v);
            if top.1 < succ.len() {
                let w = succ[top.1];
                top.1 += 1;
                if index[w] == UNSET {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Whole-network statistics. Degree and density use the undirected
/// collapse; edge and component counts use directed edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSummary {
    pub vertices: usize,
    pub edges: usize,
    pub undirected_edges: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub density: f64,
    pub wcc_count: usize,
    pub scc_count: usize,
    pub max_wcc: usize,
    pub max_scc: usize,
}

pub fn summary_stats(g: &DomainGraph) -> NetworkSummary {
    let n = g.len();
    if n == 0 {
        return NetworkSummary {
            vertices: 0,
            edges: 0,
            undirected_edges: 0,
            mean_degree: 0.0,
            max_degree: 0,
            density: 0.0,
            wcc_count: 0,
            scc_count: 0,
            max_wcc: 0,
            max_scc: 0,
        };
    }
    let m = g.undirected_edge_count();
    let wcc = weakly_connected_components(g);
    let scc = strongly_connected_components(g);
    NetworkSummary {
        vertices: n,
        edges: g.edge_count(),
        undirected_edges: m,
        mean_degree: 2.0 * m as f64 / n as f64,
        max_degree: (0..n).map(|v| g.degree(v)).max().unwrap_or(0),
        density: if n > 1 { m as f64 / (n as f64 * (n - 1) as f64 / 2.0) } else { 0.0 },
        wcc_count: wcc.len(),
        scc_count: scc.len(),
        max_wcc: wcc.iter().map(Vec::len).max().unwrap_or(0),
        max_scc: scc.iter().map(Vec::len).max().unwrap_or(0),
    }
}
