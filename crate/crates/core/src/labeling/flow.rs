//! Focused random-walk (current-flow) betweenness.
//!
//! Each component of the undirected graph gets its own reduced-Laplacian
//! inverse `T`: one grounded vertex has its row and column removed before
//! inversion and reinserted as zeros. For a unit current injected at `x` and
//! extracted at `y`, the potential of `i` is `T[i][x] - T[i][y]`, and the
//! current through `i` is half the absolute current on its incident edges.

use alloc::vec;
use alloc::vec::Vec;

use super::LabelError;
use crate::linalg::spd_inverse;

/// Which vertex of each component is grounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ground {
    /// Lowest-index vertex of the component.
    First,
    /// The given vertex in its component, `First` elsewhere.
    Vertex(usize),
}

#[derive(Debug, Clone)]
struct Component {
    vertices: Vec<usize>,
    /// `k`×`k` row-major, local indices.
    t: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct FlowBetweenness {
    adj: Vec<Vec<usize>>,
    components: Vec<Component>,
    /// (component, local index) per vertex.
    place: Vec<(usize, usize)>,
}

impl FlowBetweenness {
    /// Builds the scorer for `n` vertices. Edges are treated as undirected
    /// and unweighted; duplicates and self-loops are ignored.
    pub fn new(n: usize, edges: &[(usize, usize)], ground: Ground) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let mut place = vec![(usize::MAX, 0); n];
        let mut components = Vec::new();
        for start in 0..n {
            if place[start].0 != usize::MAX {
                continue;
            }
            let c = components.len();
            let mut vertices = vec![start];
            place[start] = (c, 0);
            let mut head = 0;
            while head < vertices.len() {
                let v = vertices[head];
                head += 1;
                for &u in &adj[v] {
                    if place[u].0 == usize::MAX {
                        place[u] = (c, 0);
                        vertices.push(u);
                    }
                }
            }
            vertices.sort_unstable();
            for (i, &v) in vertices.iter().enumerate() {
                place[v].1 = i;
            }
            let t = reduced_inverse(&adj, &vertices, &place, ground);
            components.push(Component { vertices, t });
        }
        FlowBetweenness { adj, components, place }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Entry of `T` for two vertices of the same component.
    fn t(&self, a: usize, b: usize) -> f64 {
        let (ca, la) = self.place[a];
        let (cb, lb) = self.place[b];
        debug_assert_eq!(ca, cb);
        let comp = &self.components[ca];
        comp.t[la * comp.vertices.len() + lb]
    }

    /// Current through `i` for a unit flow from `x` to `y`.
    pub fn current(&self, i: usize, x: usize, y: usize) -> f64 {
        if self.place[i].0 != self.place[x].0 || self.place[x].0 != self.place[y].0 {
            return 0.0;
        }
        let vi = self.t(i, x) - self.t(i, y);
        0.5 * self.adj[i].iter().map(|&j| (vi - (self.t(j, x) - self.t(j, y))).abs()).sum::<f64>()
    }

    /// Suitability of every vertex for the given anchor set.
    ///
    /// A vertex averages its current over the anchor pairs of its component
    /// that it is not an endpoint of: `C(n, 2)` pairs for a non-anchor and
    /// `(n-1)(n-2)/2` for an anchor, with `n` the anchors in the component.
    /// Vertices with no such pair score 0.
    pub fn scores(&self, anchors: &[usize]) -> Result<Vec<f64>, LabelError> {
        let mut anchors: Vec<usize> = anchors.to_vec();
        anchors.sort_unstable();
        anchors.dedup();
        if anchors.len() < 2 {
            return Err(LabelError::TooFewAnchors(anchors.len()));
        }
        let mut is_anchor = vec![false; self.adj.len()];
        for &a in &anchors {
            is_anchor[a] = true;
        }
        let mut gamma = vec![0.0; self.adj.len()];
        for (c, comp) in self.components.iter().enumerate() {
            let local: Vec<usize> =
                anchors.iter().copied().filter(|&a| self.place[a].0 == c).collect();
            let n = local.len();
            if n < 2 {
                continue;
            }
            for &i in &comp.vertices {
                let mut sum = 0.0;
                for (p, &x) in local.iter().enumerate() {
                    for &y in &local[p + 1..] {
                        if x != i && y != i {
                            sum += self.current(i, x, y);
                        }
                    }
                }
                let pairs = if is_anchor[i] { (n - 1) * (n - 2) / 2 } else { n * (n - 1) / 2 };
                gamma[i] = if pairs == 0 { 0.0 } else { sum / pairs as f64 };
            }
        }
        Ok(gamma)
    }
}

fn reduced_inverse(
    adj: &[Vec<usize>],
    vertices: &[usize],
    place: &[(usize, usize)],
    ground: Ground,
) -> Vec<f64> {
    let k = vertices.len();
    let g = match ground {
        Ground::Vertex(v) if v < place.len() && vertices.binary_search(&v).is_ok() => place[v].1,
        _ => 0,
    };
    let m = k - 1;
    let mut t = vec![0.0; k * k];
    if m == 0 {
        return t;
    }
    // Reduced Laplacian with row/column g removed.
    let skip = |i: usize| if i < g { i } else { i - 1 };
    let mut lap = vec![0.0; m * m];
    for (li, &v) in vertices.iter().enumerate() {
        if li == g {
            continue;
        }
        let ri = skip(li);
        lap[ri * m + ri] = adj[v].len() as f64;
        for &u in &adj[v] {
            let lu = place[u].1;
            if lu != g {
                lap[ri * m + skip(lu)] -= 1.0;
            }
        }
    }
    let inv = spd_inverse(&lap, m).expect("reduced Laplacian of a connected component is positive definite");
    for li in 0..k {
        if li == g {
            continue;
        }
        for lj in 0..k {
            if lj == g {
                continue;
            }
            t[li * k + lj] = inv[skip(li) * m + skip(lj)];
        }
    }
    t
}
