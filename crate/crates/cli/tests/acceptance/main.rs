//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! `cargo test -p torcontent --test acceptance -- 6 9` runs only criteria 6
//! and 9. Criteria 1-5 read the published edge list and labels from
//! `$TORCONTENT_DATASET/{edges.txt,labels.csv}`. The process exits non-zero
//! on a failed criterion only when `TORCONTENT_ACCEPTANCE_STRICT` is set.

mod crawler;
mod dataset;
mod enumerate;
mod frwbc;
mod lda;
mod powerlaw;
mod synthetic;

use std::process::ExitCode;
use std::time::{Duration, Instant};

pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into() }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Verdict::new(false, detail)
    }
}

/// Adds a wall-clock bound to a verdict.
pub fn within(v: Verdict, elapsed: Duration, limit: Duration) -> Verdict {
    if elapsed <= limit {
        v
    } else {
        Verdict::new(false, format!("{}; took {elapsed:.1?}, limit {limit:?}", v.detail))
    }
}

type Check = fn() -> Verdict;

const CRITERIA: [(u32, &str, Check); 11] = [
    (1, "dataset components", dataset::components),
    (2, "dataset robustness", dataset::robustness),
    (3, "dataset modularity", dataset::modularity),
    (4, "dataset power-law verdicts", dataset::power_law),
    (5, "betweenness landmark", dataset::betweenness),
    (6, "flow betweenness oracle", frwbc::check),
    (7, "complete-graph robustness", synthetic::complete_graphs),
    (8, "single-type modularity", synthetic::single_type),
    (9, "topic recovery", lda::check),
    (10, "power-law fit recovery", powerlaw::check),
    (11, "crawler contract", crawler::check),
];

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted: Vec<u32> = args.iter().filter_map(|a| a.parse().ok()).collect();
    if !args.is_empty() && wanted.is_empty() {
        // A name filter meant for another test target.
        return ExitCode::SUCCESS;
    }
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, check) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{status} [{id:>2}] {name}: {} ({:.2?})", v.detail, t.elapsed());
        ran += 1;
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 && std::env::var_os("TORCONTENT_ACCEPTANCE_STRICT").is_some() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
