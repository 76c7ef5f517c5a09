//! Robustness coefficient: area under the largest-component curve as
//! vertices are removed in decreasing centrality order, relative to a
//! linearly shrinking network.

use alloc::vec;
use alloc::vec::Vec;

use super::{centrality, DomainGraph, GraphError, Measure};

/// Static removal order: decreasing score, ties by domain name. Scores are
/// compared after rounding to 1e-9 so floating-point noise between
/// symmetric vertices does not decide the order.
pub fn removal_order(g: &DomainGraph, measure: Measure) -> Vec<usize> {
    let scores = centrality(g, measure);
    let key: Vec<i64> = scores.iter().map(|&s| libm::round(s * 1e9) as i64).collect();
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| key[b].cmp(&key[a]).then_with(|| g.name(a).cmp(g.name(b))));
    order
}

/// `C_i` for `i = 0..=|V|`: size of the largest connected component after
/// removing the first `i` vertices of `order`. Computed by adding vertices
/// back in reverse with a union-find.
pub fn largest_component_curve(g: &DomainGraph, order: &[usize]) -> Vec<usize> {
    let n = g.len();
    assert_eq!(order.len(), n);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut present = vec![false; n];
    let mut curve = vec![0usize; n + 1];
    let mut best = 0;
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for i in (0..n).rev() {
        let v = order[i];
        present[v] = true;
        best = best.max(1);
        for &u in g.neighbors(v) {
            if !present[u] {
                continue;
            }
            let (a, b) = (find(&mut parent, v), find(&mut parent, u));
            if a != b {
                let (big, small) = if size[a] >= size[b] { (a, b) } else { (b, a) };
                parent[small] = big;
                size[big] += size[small];
                best = best.max(size[big]);
            }
        }
        curve[i] = best;
    }
    curve
}

/// `6 * sum_i i * C_i / (|V| (|V|+1) (|V|-1))`.
pub fn robustness_from_curve(curve: &[usize]) -> f64 {
    let n = (curve.len() - 1) as f64;
    let s1: f64 = curve.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum();
    6.0 * s1 / (n * (n + 1.0) * (n - 1.0))
}

pub fn robustness_coefficient(g: &DomainGraph, measure: Measure) -> Result<f64, GraphError> {
    if g.len() < 2 {
        return Err(GraphError::TooFewVertices { needed: 2, found: g.len() });
    }
    let order = removal_order(g, measure);
    Ok(robustness_from_curve(&largest_component_curve(g, &order)))
}

#[cfg(test)]
mod tests {
    use super::super::tests::graph;
    use super::*;

    #[test]
    fn star_by_degree() {
        // Hub removed first shatters the star into singletons.
        let g = graph(&[("h", "a"), ("h", "b"), ("h", "c"), ("h", "d")], &[]);
        let order = removal_order(&g, Measure::Degree);
        assert_eq!(g.name(order[0]), "h");
        let curve = largest_component_curve(&g, &order);
        assert_eq!(curve, vec![5, 1, 1, 1, 1, 0]);
        // 6 * (1 + 2 + 3 + 4) / (5 * 6 * 4)
        assert!((robustness_coefficient(&g, Measure::Degree).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_small() {
        let g = graph(&[], &[("a", "x")]);
        assert!(robustness_coefficient(&g, Measure::Degree).is_err());
    }

    #[test]
    fn ties_by_name() {
        let g = graph(&[("b", "a"), ("c", "d")], &[]);
        let order = removal_order(&g, Measure::Degree);
        let names: Vec<&str> = order.iter().map(|&v| g.name(v)).collect();
        assert_eq!(names, ["a", "b", "c", "d"]);
    }
}
