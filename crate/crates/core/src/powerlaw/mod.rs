//! Discrete power-law fits and the bootstrap goodness-of-fit test.

mod fit;
mod gof;
mod report;
mod zeta;

pub use fit::{fit_power_law, fit_with_xmin, ks_statistic, log_likelihood, PowerLawFit, MIN_SAMPLES};
pub use gof::{goodness_of_fit, replicate_rng, Bootstrap, DiscretePowerLaw, GofResult, DEFAULT_BOOTSTRAP};
pub use report::{
    community_tail_report, community_tail_report_with, DegreeSequence, Direction, TailOutcome, TailRow,
};
pub use zeta::hurwitz_zeta;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum PowerLawError {
    #[error("need at least {needed} positive samples, found {found}")]
    TooFewSamples { found: usize, needed: usize },
    #[error("all positive samples are equal")]
    Degenerate,
    #[error("xmin {0} is not an observed value below the maximum")]
    XminNotCandidate(u64),
}
