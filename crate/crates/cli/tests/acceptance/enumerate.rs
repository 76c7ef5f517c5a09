//! Non-isomorphic simple graphs on up to 8 vertices.
//!
//! Graphs on `n` vertices come from every graph on `n - 1` vertices plus a
//! new vertex with any neighbor set, deduplicated by a canonical code: the
//! largest upper-triangle bit string over the relabelings that keep
//! vertices sorted by (degree, sorted neighbor degrees).

use std::collections::BTreeSet;

/// Adjacency bitmasks, one per vertex.
pub type Graph = Vec<u8>;

fn code(adj: &[u8], perm: &[usize]) -> u32 {
    let n = perm.len();
    let mut c = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            c = c << 1 | u32::from(adj[perm[i]] >> perm[j] & 1);
        }
    }
    c
}

fn canonical(adj: &[u8]) -> u32 {
    let n = adj.len();
    let deg = |v: usize| adj[v].count_ones();
    let invariant: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(deg).collect();
            nd.sort_unstable();
            (deg(v), nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| invariant[a].cmp(&invariant[b]));
    // Cell boundaries in `order`.
    let mut cells = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || invariant[order[i]] != invariant[order[start]] {
            cells.push(order[start..i].to_vec());
            start = i;
        }
    }
    let mut best = 0;
    let mut perm = Vec::with_capacity(n);
    search(adj, &cells, 0, &mut vec![false; n], &mut perm, &mut best);
    best
}

fn search(adj: &[u8], cells: &[Vec<usize>], cell: usize, used: &mut [bool], perm: &mut Vec<usize>, best: &mut u32) {
    let Some(members) = cells.get(cell) else {
        *best = (*best).max(code(adj, perm));
        return;
    };
    let placed = members.iter().filter(|&&v| used[v]).count();
    if placed == members.len() {
        return search(adj, cells, cell + 1, used, perm, best);
    }
    for &v in members {
        if !used[v] {
            used[v] = true;
            perm.push(v);
            search(adj, cells, cell, used, perm, best);
            perm.pop();
            used[v] = false;
        }
    }
}

fn decode(n: usize, c: u32) -> Graph {
    let mut adj = vec![0u8; n];
    let mut bit = n * (n - 1) / 2;
    for i in 0..n {
        for j in i + 1..n {
            bit -= 1;
            if c >> bit & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

pub fn is_connected(adj: &[u8]) -> bool {
    let full = if adj.len() == 8 { u8::MAX } else { (1u8 << adj.len()) - 1 };
    let mut seen = 1u8;
    loop {
        let next = (0..adj.len()).filter(|&v| seen >> v & 1 == 1).fold(seen, |s, v| s | adj[v]);
        if next == seen {
            return seen == full;
        }
        seen = next;
    }
}

/// All graphs up to isomorphism, indexed by vertex count `0..=max_n`.
pub fn all_graphs(max_n: usize) -> Vec<Vec<Graph>> {
    assert!(max_n <= 8);
    let mut levels: Vec<Vec<Graph>> = vec![vec![vec![]], vec![vec![0]]];
    for n in 2..=max_n {
        let mut codes = BTreeSet::new();
        for g in &levels[n - 1] {
            for nb in 0u8..(1u8 << (n - 1)) {
                let mut adj = g.clone();
                adj.push(nb);
                for (v, row) in adj.iter_mut().enumerate().take(n - 1) {
                    *row |= (nb >> v & 1) << (n - 1);
                }
                codes.insert(canonical(&adj));
            }
        }
        levels.push(codes.into_iter().map(|c| decode(n, c)).collect());
    }
    levels.truncate(max_n + 1);
    levels
}
