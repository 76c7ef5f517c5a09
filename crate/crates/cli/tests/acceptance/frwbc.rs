use nalgebra::{DMatrix, DVector};
use torcontent_core::labeling::{FlowBetweenness, Ground};

use crate::enumerate::{all_graphs, is_connected, Graph};
use crate::Verdict;

/// Connected graphs per vertex count, 1..=8.
const CONNECTED: [usize; 8] = [1, 1, 2, 6, 21, 112, 853, 11117];
const TOL: f64 = 1e-9;

/// Throughput of every vertex for a unit current between each vertex pair,
/// from potentials `L⁺ (e_x - e_y)` with `L⁺ = (L + J/n)⁻¹ - J/n` for a
/// connected graph.
fn pair_currents(adj: &Graph) -> Vec<Vec<Vec<f64>>> {
    let n = adj.len();
    let a = DMatrix::from_fn(n, n, |i, j| f64::from(adj[i] >> j & 1));
    let d = DMatrix::from_diagonal(&DVector::from_iterator(n, (0..n).map(|i| a.row(i).sum())));
    let j = DMatrix::from_element(n, n, 1.0 / n as f64);
    let pinv = (d - &a + &j).try_inverse().unwrap() - j;
    let mut out = vec![vec![Vec::new(); n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let v = pinv.column(x) - pinv.column(y);
            out[x][y] = (0..n).map(|i| 0.5 * (0..n).map(|j| a[(i, j)] * (v[i] - v[j]).abs()).sum::<f64>()).collect();
        }
    }
    out
}

/// Mean throughput over the anchor pairs that do not end at the vertex.
fn oracle(currents: &[Vec<Vec<f64>>], anchors: &[usize]) -> Vec<f64> {
    let n = currents.len();
    (0..n)
        .map(|i| {
            let mut sum = 0.0;
            let mut pairs = 0;
            for (p, &x) in anchors.iter().enumerate() {
                for &y in &anchors[p + 1..] {
                    if i != x && i != y {
                        sum += currents[x][y][i];
                        pairs += 1;
                    }
                }
            }
            if pairs == 0 {
                0.0
            } else {
                sum / pairs as f64
            }
        })
        .collect()
}

pub fn check() -> Verdict {
    let levels = all_graphs(8);
    let mut counts = Vec::new();
    let (mut graphs, mut cases, mut worst_oracle, mut worst_ground) = (0usize, 0usize, 0.0f64, 0.0f64);
    for (n, level) in levels.iter().enumerate().skip(1) {
        let connected: Vec<&Graph> = level.iter().filter(|g| is_connected(g)).collect();
        counts.push(connected.len());
        for adj in connected {
            if n < 2 {
                continue;
            }
            graphs += 1;
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| adj[i] >> j & 1 == 1).collect();
            let currents = pair_currents(adj);
            let scorers: Vec<FlowBetweenness> =
                (0..n).map(|g| FlowBetweenness::new(n, &edges, Ground::Vertex(g))).collect();
            for mask in 0u32..(1 << n) {
                if !(2..=3).contains(&mask.count_ones()) {
                    continue;
                }
                let anchors: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let want = oracle(&currents, &anchors);
                let first = scorers[0].scores(&anchors).unwrap();
                for s in &scorers {
                    let got = s.scores(&anchors).unwrap();
                    for i in 0..n {
                        worst_oracle = worst_oracle.max((got[i] - want[i]).abs());
                        worst_ground = worst_ground.max((got[i] - first[i]).abs());
                    }
                    cases += 1;
                }
            }
        }
    }
    let counts_ok = counts == CONNECTED;
    Verdict::new(
        counts_ok && worst_oracle <= TOL && worst_ground <= TOL,
        format!(
            "connected graphs per size {counts:?}{}; {graphs} graphs, {cases} (anchor set, ground) cases, \
             max |oracle diff| {worst_oracle:.1e}, max |ground diff| {worst_ground:.1e}",
            if counts_ok { "" } else { " (expected 1,1,2,6,21,112,853,11117)" }
        ),
    )
}
