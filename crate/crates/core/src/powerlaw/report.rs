use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{fit_power_law, goodness_of_fit, GofResult, PowerLawError, PowerLawFit};
use crate::graph::DomainGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    In,
    Out,
    Undirected,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
            Direction::Undirected => "undirected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    pub values: Vec<u64>,
    pub direction: Direction,
    /// `None` for the whole network.
    pub community: Option<String>,
}

impl DegreeSequence {
    /// Degrees of the members of `community` (or of every vertex), counted
    /// over the full graph so edges leaving the community are included.
    pub fn of(g: &DomainGraph, direction: Direction, community: Option<&str>) -> Self {
        let values = (0..g.len())
            .filter(|&v| community.is_none_or(|c| g.community_of(v) == c))
            .map(|v| match direction {
                Direction::In => g.in_degree(v),
                Direction::Out => g.out_degree(v),
                Direction::Undirected => g.degree(v),
            } as u64)
            .collect();
        DegreeSequence { values, direction, community: community.map(str::to_string) }
    }

    pub fn positive(&self) -> usize {
        self.values.iter().filter(|&&x| x > 0).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TailOutcome {
    Tested { fit: PowerLawFit, gof: GofResult },
    Skipped(PowerLawError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub community: Option<String>,
    pub direction: Direction,
    pub outcome: TailOutcome,
}

impl TailRow {
    pub fn p_value(&self) -> Option<f64> {
        match &self.outcome {
            TailOutcome::Tested { gof, .. } => Some(gof.p_value),
            TailOutcome::Skipped(_) => None,
        }
    }

    /// `Some(true)` when the power-tail hypothesis is rejected at `threshold`.
    pub fn rejected(&self, threshold: f64) -> Option<bool> {
        self.p_value().map(|p| p < threshold)
    }

    /// Exponent, reported only when the hypothesis survives.
    pub fn alpha(&self, threshold: f64) -> Option<f64> {
        match &self.outcome {
            TailOutcome::Tested { fit, gof } if gof.p_value >= threshold => Some(fit.alpha),
            _ => None,
        }
    }
}

/// In- and out-degree tests for every community, then for the whole
/// network. `gof` runs the bootstrap for one sequence.
pub fn community_tail_report_with<F>(g: &DomainGraph, mut gof: F) -> Vec<TailRow>
where
    F: FnMut(&[u64], &PowerLawFit) -> GofResult,
{
    let mut scopes: Vec<Option<&str>> = g.communities().iter().map(|c| Some(c.as_str())).collect();
    scopes.push(None);
    let mut rows = Vec::new();
    for scope in scopes {
        for direction in [Direction::In, Direction::Out] {
            let seq = DegreeSequence::of(g, direction, scope);
            let outcome = match fit_power_law(&seq.values) {
                Ok(fit) => TailOutcome::Tested { fit, gof: gof(&seq.values, &fit) },
                Err(e) => TailOutcome::Skipped(e),
            };
            rows.push(TailRow { community: seq.community, direction, outcome });
        }
    }
    rows
}

pub fn community_tail_report(g: &DomainGraph, n_boot: usize, seed: u64) -> Vec<TailRow> {
    community_tail_report_with(g, |data, fit| goodness_of_fit(data, fit, n_boot, seed))
}
