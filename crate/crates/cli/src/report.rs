//! Tables and figure data derived from the graph, the topic model, and the
//! power-law tests, written as CSV.

use std::collections::BTreeMap;
use std::path::Path;

use torcontent_core::graph::{
    centrality, modularity, per_community_modularity, robustness_coefficient, DomainGraph,
    Measure, NetworkSummary,
};
use torcontent_core::powerlaw::{TailOutcome, TailRow};

use crate::formats::write_bytes;
use crate::{Error, Result};

/// Row label used for whole-network values.
pub const ALL: &str = "All";

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|s| s.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).unwrap();
        for r in &self.rows {
            w.write_record(r).unwrap();
        }
        w.into_inner().unwrap()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_bytes(path, &self.to_csv())
    }
}

pub fn num(x: f64, digits: usize) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.digits$}")
    }
}

pub fn summary_table(s: &NetworkSummary) -> Table {
    let mut t = Table::new(&["metric", "value"]);
    let pct = |part: usize| if s.vertices == 0 { 0.0 } else { 100.0 * part as f64 / s.vertices as f64 };
    let rows = [
        ("domains", s.vertices.to_string()),
        ("hyperlinks", s.edges.to_string()),
        ("undirected_edges", s.undirected_edges.to_string()),
        ("mean_degree", num(s.mean_degree, 4)),
        ("max_degree", s.max_degree.to_string()),
        ("density", num(s.density, 6)),
        ("wcc_count", s.wcc_count.to_string()),
        ("max_wcc", s.max_wcc.to_string()),
        ("max_wcc_percent", num(pct(s.max_wcc), 2)),
        ("scc_count", s.scc_count.to_string()),
        ("max_scc", s.max_scc.to_string()),
        ("max_scc_percent", num(pct(s.max_scc), 2)),
    ];
    for (k, v) in rows {
        t.push(vec![k.to_string(), v]);
    }
    t
}

/// Robustness of each community's internal network and of the whole graph.
pub fn robustness_table(g: &DomainGraph) -> Table {
    const ORDER: [Measure; 4] = [Measure::Betweenness, Measure::Closeness, Measure::Degree, Measure::Eigenvector];
    let mut t = Table::new(&["community", "vertices", "r_betweenness", "r_closeness", "r_degree", "r_eigenvector"]);
    let mut scopes: Vec<(String, DomainGraph)> =
        g.communities().iter().map(|c| (c.clone(), g.intra_subgraph(c))).collect();
    scopes.push((ALL.to_string(), g.clone()));
    for (name, sub) in scopes {
        let mut row = vec![name, sub.len().to_string()];
        for m in ORDER {
            row.push(robustness_coefficient(&sub, m).map_or(String::new(), |r| num(r, 6)));
        }
        t.push(row);
    }
    t
}

pub fn modularity_table(g: &DomainGraph) -> Result<Table> {
    let numeric = |e| Error::Data(format!("modularity: {e}"));
    let per = per_community_modularity(g).map_err(numeric)?;
    let total = modularity(g).map_err(numeric)?;
    let mut t = Table::new(&["community", "modularity"]);
    for (c, m) in per {
        t.push(vec![c, num(m, 6)]);
    }
    t.push(vec![ALL.to_string(), num(total, 6)]);
    Ok(t)
}

pub fn centrality_vectors(g: &DomainGraph) -> Vec<(Measure, Vec<f64>)> {
    Measure::ALL.iter().map(|&m| (m, centrality(g, m))).collect()
}

pub fn centrality_table(g: &DomainGraph, vectors: &[(Measure, Vec<f64>)]) -> Table {
    let mut header = vec!["domain".to_string(), "community".to_string()];
    header.extend(vectors.iter().map(|(m, _)| m.as_str().to_string()));
    let mut t = Table::new(&header);
    for v in 0..g.len() {
        let mut row = vec![g.name(v).to_string(), g.community_of(v).to_string()];
        row.extend(vectors.iter().map(|(_, x)| num(x[v], 9)));
        t.push(row);
    }
    t
}

/// Empirical CDF of each measure at its distinct values.
pub fn centrality_cdf_table(vectors: &[(Measure, Vec<f64>)]) -> Table {
    let mut t = Table::new(&["measure", "value", "cdf"]);
    for (m, x) in vectors {
        let mut sorted: Vec<f64> = x.iter().map(|v| (v * 1e9).round() / 1e9).collect();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        for (i, v) in sorted.iter().enumerate() {
            if sorted.get(i + 1) != Some(v) {
                t.push(vec![m.as_str().to_string(), num(*v, 9), num((i + 1) as f64 / n, 6)]);
            }
        }
    }
    t
}

/// Equal-width histogram of each measure over `[0, max]`.
pub fn centrality_hist_table(vectors: &[(Measure, Vec<f64>)], bins: usize) -> Table {
    let mut t = Table::new(&["measure", "bin_low", "bin_high", "count"]);
    for (m, x) in vectors {
        let max = x.iter().copied().fold(0.0f64, f64::max);
        let width = if max > 0.0 { max / bins as f64 } else { 1.0 };
        let mut counts = vec![0usize; bins];
        for &v in x {
            counts[((v / width) as usize).min(bins - 1)] += 1;
        }
        for (i, c) in counts.iter().enumerate() {
            t.push(vec![
                m.as_str().to_string(),
                num(i as f64 * width, 9),
                num((i + 1) as f64 * width, 9),
                c.to_string(),
            ]);
        }
    }
    t
}

/// Directed edge counts; rows are sources, columns targets.
pub fn community_matrix_table(g: &DomainGraph) -> Table {
    let m = g.community_degree_matrix();
    let mut header = vec!["from".to_string()];
    header.extend(m.labels.iter().cloned());
    header.push("out_total".to_string());
    let mut t = Table::new(&header);
    for (i, l) in m.labels.iter().enumerate() {
        let mut row = vec![l.clone()];
        row.extend((0..m.labels.len()).map(|j| m.get(i, j).to_string()));
        row.push(m.out_total(i).to_string());
        t.push(row);
    }
    let mut row = vec!["in_total".to_string()];
    row.extend((0..m.labels.len()).map(|j| m.in_total(j).to_string()));
    row.push(m.total().to_string());
    t.push(row);
    t
}

/// Share of domains per label.
pub fn label_distribution_table(labels: &BTreeMap<String, String>) -> Table {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels.values() {
        *counts.entry(l).or_default() += 1;
    }
    let mut rows: Vec<(&str, usize)> = counts.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let n = labels.len().max(1) as f64;
    let mut t = Table::new(&["label", "domains", "percent"]);
    for (l, c) in rows {
        t.push(vec![l.to_string(), c.to_string(), num(100.0 * c as f64 / n, 2)]);
    }
    t
}

pub fn powerlaw_table(rows: &[TailRow], threshold: f64) -> Table {
    let mut t = Table::new(&[
        "community", "direction", "status", "n", "n_tail", "xmin", "alpha_fit", "ks", "p_value", "n_boot", "alpha",
    ]);
    for r in rows {
        let community = r.community.clone().unwrap_or_else(|| ALL.to_string());
        let dir = r.direction.as_str().to_string();
        match &r.outcome {
            TailOutcome::Tested { fit, gof } => t.push(vec![
                community,
                dir,
                if gof.p_value < threshold { "rejected" } else { "not_rejected" }.to_string(),
                fit.n.to_string(),
                fit.n_tail.to_string(),
                fit.xmin.to_string(),
                num(fit.alpha, 4),
                num(fit.ks, 6),
                num(gof.p_value, 4),
                gof.n_boot.to_string(),
                r.alpha(threshold).map_or(String::new(), |a| num(a, 2)),
            ]),
            TailOutcome::Skipped(e) => {
                let mut row = vec![community, dir, format!("skipped: {e}")];
                row.extend(std::iter::repeat_n(String::new(), 8));
                t.push(row);
            }
        }
    }
    t
}
