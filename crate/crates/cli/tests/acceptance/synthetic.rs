use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torcontent_core::graph::{modularity, robustness_coefficient, DomainGraph, DomainGraphBuilder, Measure};

use crate::Verdict;

fn graph(n: usize, edges: &[(usize, usize)], label: Option<&str>) -> DomainGraph {
    let mut b = DomainGraphBuilder::new();
    for i in 0..n {
        b.add_vertex(&format!("v{i}"));
    }
    for &(x, y) in edges {
        b.add_edge(&format!("v{x}"), &format!("v{y}"));
    }
    let labels: BTreeMap<String, String> =
        label.map(|l| (0..n).map(|i| (format!("v{i}"), l.to_string())).collect()).unwrap_or_default();
    b.build(&labels)
}

pub fn complete_graphs() -> Verdict {
    let mut off = Vec::new();
    for n in 4..=10 {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let g = graph(n, &edges, None);
        for m in [Measure::Betweenness, Measure::Closeness, Measure::Degree] {
            match robustness_coefficient(&g, m) {
                Ok(r) if r == 1.0 => {}
                other => off.push(format!("K{n}/{}: {other:?}", m.as_str())),
            }
        }
    }
    Verdict::new(off.is_empty(), format!("K4..K10 x 3 measures, not exactly 1: {off:?}"))
}

pub fn single_type() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for k in 0..100 {
        let n = rng.random_range(2..60);
        let p = rng.random_range(0.02..0.5);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && rng.random::<f64>() < p {
                    edges.push((x, y));
                }
            }
        }
        if edges.is_empty() {
            edges.push((0, 1));
        }
        match modularity(&graph(n, &edges, Some("only"))) {
            Ok(m) => worst = worst.max(m.abs()),
            Err(e) => errors.push(format!("graph {k}: {e}")),
        }
    }
    Verdict::new(errors.is_empty() && worst <= 1e-12, format!("100 random graphs, max |M| {worst:.1e}; errors {errors:?}"))
}
