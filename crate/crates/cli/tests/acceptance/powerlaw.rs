use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torcontent_core::powerlaw::{fit_power_law, goodness_of_fit, DEFAULT_BOOTSTRAP};

use crate::Verdict;

const ALPHA: f64 = 2.5;
const N: usize = 10_000;
const RUNS: u64 = 20;
const ALPHA_TOL: f64 = 0.1;
const P_FLOOR: f64 = 0.1;
const MIN_PASSING: usize = 19;

/// Exact inverse-CDF sampler for `P(x) = x^-α / ζ(α)`, `x >= 1`, over a
/// table of the first `TABLE` values. The remaining mass (about 1e-9 for
/// α = 2.5) falls back to the continuous approximation.
struct Sampler {
    cdf: Vec<f64>,
}

const TABLE: usize = 1_000_000;

impl Sampler {
    fn new(alpha: f64) -> Self {
        let terms: Vec<f64> = (1..=TABLE).map(|x| (x as f64).powf(-alpha)).collect();
        let nf = TABLE as f64;
        let tail = nf.powf(1.0 - alpha) / (alpha - 1.0) - nf.powf(-alpha) / 2.0 + alpha * nf.powf(-alpha - 1.0) / 12.0;
        // Sum smallest first.
        let zeta = terms.iter().rev().sum::<f64>() + tail;
        let mut acc = 0.0;
        let cdf = terms
            .iter()
            .map(|t| {
                acc += t / zeta;
                acc
            })
            .collect();
        Sampler { cdf }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c <= u);
        if i < TABLE {
            return i as u64 + 1;
        }
        let r = 1.0 - u;
        ((TABLE as f64 + 0.5) * r.powf(-1.0 / (ALPHA - 1.0)) + 0.5).floor() as u64
    }
}

pub fn check() -> Verdict {
    let sampler = Sampler::new(ALPHA);
    let mut alphas = Vec::new();
    let mut ps = Vec::new();
    for seed in 0..RUNS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<u64> = (0..N).map(|_| sampler.sample(&mut rng)).collect();
        let fit = match fit_power_law(&data) {
            Ok(f) => f,
            Err(e) => return Verdict::fail(format!("seed {seed}: {e}")),
        };
        alphas.push(fit.alpha);
        ps.push(goodness_of_fit(&data, &fit, DEFAULT_BOOTSTRAP, seed).p_value);
    }
    let worst = alphas.iter().map(|a| (a - ALPHA).abs()).fold(0.0, f64::max);
    let passing = ps.iter().filter(|&&p| p > P_FLOOR).count();
    let ps: Vec<String> = ps.iter().map(|p| format!("{p:.3}")).collect();
    Verdict::new(
        worst <= ALPHA_TOL && passing >= MIN_PASSING,
        format!(
            "{RUNS} runs of n={N}, max |alpha - {ALPHA}| {worst:.3}; p > {P_FLOOR} in {passing}/{RUNS} \
             (need {MIN_PASSING}) with {DEFAULT_BOOTSTRAP} replicates, p = [{}]",
            ps.join(", ")
        ),
    )
}
