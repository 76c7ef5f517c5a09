use alloc::vec::Vec;

use libm::{floor, pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fit::{PowerLawFit, Sample};
use super::zeta::hurwitz_zeta;

/// Replicates requested when the caller does not choose.
pub const DEFAULT_BOOTSTRAP: usize = 2500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub p_value: f64,
    pub n_boot: usize,
    pub seed: u64,
    pub observed_ks: f64,
}

/// Survival values tabulated from `xmin` upward; deeper tails use the zeta
/// function directly.
const TABLE_LEN: usize = 4096;

/// Upper limit of [`DiscretePowerLaw::quantile`]; only exponents near 1 with
/// vanishing survival probabilities reach it.
pub const SATURATION: u64 = 1_000_000_000_000_000;

/// Sampler for the discrete power law on `x >= xmin`.
#[derive(Debug, Clone)]
pub struct DiscretePowerLaw {
    alpha: f64,
    xmin: u64,
    z: f64,
    /// `ccdf[i] = P(X >= xmin + i)`.
    ccdf: Vec<f64>,
}

impl DiscretePowerLaw {
    pub fn new(alpha: f64, xmin: u64) -> Self {
        assert!(alpha > 1.0 && xmin >= 1);
        let z = hurwitz_zeta(alpha, xmin as f64);
        let mut ccdf = Vec::with_capacity(TABLE_LEN);
        let mut above = z;
        for i in 0..TABLE_LEN as u64 {
            ccdf.push(above / z);
            above -= pow((xmin + i) as f64, -alpha);
        }
        DiscretePowerLaw { alpha, xmin, z, ccdf }
    }

    pub fn ccdf(&self, x: u64) -> f64 {
        if x <= self.xmin {
            1.0
        } else if x - self.xmin < TABLE_LEN as u64 {
            self.ccdf[(x - self.xmin) as usize]
        } else {
            hurwitz_zeta(self.alpha, x as f64) / self.z
        }
    }

    /// Inverse CDF: the `x` with `P(X >= x+1) < r <= P(X >= x)`.
    pub fn quantile(&self, r: f64) -> u64 {
        let last = *self.ccdf.last().unwrap();
        if r > last {
            // Largest table index whose survival is still >= r.
            let i = self.ccdf.partition_point(|&c| c >= r);
            return self.xmin + i as u64 - 1;
        }
        // Continuous approximation, then exact correction.
        let guess = (self.xmin as f64 - 0.5) * pow(r, -1.0 / (self.alpha - 1.0)) + 0.5;
        if !(guess < SATURATION as f64) {
            return SATURATION;
        }
        // Smallest x in (lo, hi] with P(X >= x+1) < r; it is lo itself when
        // that already holds, since P(X >= lo) >= r.
        let mut lo = self.xmin + TABLE_LEN as u64 - 1;
        if self.ccdf(lo + 1) < r {
            return lo;
        }
        let mut hi = (floor(guess) as u64).max(lo + 1);
        while self.ccdf(hi + 1) >= r {
            lo = hi;
            hi = hi.saturating_mul(2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.ccdf(mid + 1) < r {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        // r in (0, 1]
        let r = 1.0 - rng.random::<f64>();
        self.quantile(r)
    }
}

/// Independent random stream for one bootstrap replicate, so replicates can
/// run in any order or in parallel with identical results.
pub fn replicate_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Semi-parametric bootstrap around a fit: each synthetic sample keeps the
/// size of the data, takes values below `xmin` from the observed body and
/// values in the tail from the fitted law.
#[derive(Debug, Clone)]
pub struct Bootstrap {
    body: Vec<u64>,
    n: usize,
    tail_prob: f64,
    law: DiscretePowerLaw,
    observed_ks: f64,
}

impl Bootstrap {
    pub fn new(data: &[u64], fit: &PowerLawFit) -> Self {
        let body = data.iter().copied().filter(|&x| x > 0 && x < fit.xmin).collect();
        Bootstrap {
            body,
            n: fit.n,
            tail_prob: fit.n_tail as f64 / fit.n as f64,
            law: DiscretePowerLaw::new(fit.alpha, fit.xmin),
            observed_ks: fit.ks,
        }
    }

    pub fn synthetic<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                if self.body.is_empty() || rng.random::<f64>() < self.tail_prob {
                    self.law.sample(rng)
                } else {
                    self.body[rng.random_range(0..self.body.len())]
                }
            })
            .collect()
    }

    /// KS distance of the refitted replicate `index`. A replicate that
    /// cannot be fitted counts as a worse fit than the data.
    pub fn replicate_ks(&self, seed: u64, index: usize) -> f64 {
        let mut rng = replicate_rng(seed, index);
        let data = self.synthetic(&mut rng);
        Sample::new(&data).fit().map_or(f64::INFINITY, |f| f.ks)
    }

    pub fn result(&self, ks: &[f64], seed: u64) -> GofResult {
        let hits = ks.iter().filter(|&&k| k >= self.observed_ks).count();
        GofResult {
            p_value: hits as f64 / ks.len() as f64,
            n_boot: ks.len(),
            seed,
            observed_ks: self.observed_ks,
        }
    }
}

/// Sequential goodness-of-fit test.
pub fn goodness_of_fit(data: &[u64], fit: &PowerLawFit, n_boot: usize, seed: u64) -> GofResult {
    let boot = Bootstrap::new(data, fit);
    let ks: Vec<f64> = (0..n_boot).map(|i| boot.replicate_ks(seed, i)).collect();
    boot.result(&ks, seed)
}
