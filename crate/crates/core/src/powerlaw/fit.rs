use alloc::vec::Vec;

use libm::{log, pow};
use serde::{Deserialize, Serialize};

use super::zeta::hurwitz_zeta;
use super::PowerLawError;

/// Fewest positive samples accepted by [`fit_power_law`].
pub const MIN_SAMPLES: usize = 10;

const ALPHA_LO: f64 = 1.0 + 1e-6;
const ALPHA_HI: f64 = 20.0;
const ALPHA_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub xmin: u64,
    /// Kolmogorov-Smirnov distance between the tail and the fitted law.
    pub ks: f64,
    /// Samples `>= xmin`.
    pub n_tail: usize,
    /// Positive samples.
    pub n: usize,
}

/// Sorted positive samples grouped by value, with suffix sums for the
/// tail of every candidate `xmin`.
pub(crate) struct Sample {
    pub values: Vec<u64>,
    counts: Vec<usize>,
    suffix_n: Vec<usize>,
    suffix_ln: Vec<f64>,
    pub n: usize,
}

impl Sample {
    pub fn new(data: &[u64]) -> Self {
        let mut sorted: Vec<u64> = data.iter().copied().filter(|&x| x > 0).collect();
        sorted.sort_unstable();
        let mut values = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for &x in &sorted {
            if values.last() == Some(&x) {
                *counts.last_mut().unwrap() += 1;
            } else {
                values.push(x);
                counts.push(1);
            }
        }
        let m = values.len();
        let mut suffix_n = alloc::vec![0; m + 1];
        let mut suffix_ln = alloc::vec![0.0; m + 1];
        for i in (0..m).rev() {
            suffix_n[i] = suffix_n[i + 1] + counts[i];
            suffix_ln[i] = suffix_ln[i + 1] + counts[i] as f64 * log(values[i] as f64);
        }
        Sample { values, counts, suffix_n, suffix_ln, n: sorted.len() }
    }

    fn check(&self) -> Result<(), PowerLawError> {
        if self.n < MIN_SAMPLES {
            return Err(PowerLawError::TooFewSamples { found: self.n, needed: MIN_SAMPLES });
        }
        if self.values.len() < 2 {
            return Err(PowerLawError::Degenerate);
        }
        Ok(())
    }

    fn fit_at(&self, i: usize) -> PowerLawFit {
        let xmin = self.values[i];
        let n_tail = self.suffix_n[i];
        let alpha = mle_alpha(xmin, n_tail, self.suffix_ln[i]);
        let ks = ks_distance(&self.values[i..], &self.counts[i..], n_tail, alpha);
        PowerLawFit { alpha, xmin, ks, n_tail, n: self.n }
    }

    pub fn fit(&self) -> Result<PowerLawFit, PowerLawError> {
        self.check()?;
        let mut best = self.fit_at(0);
        // The largest value alone cannot be a tail.
        for i in 1..self.values.len() - 1 {
            let f = self.fit_at(i);
            if f.ks < best.ks {
                best = f;
            }
        }
        Ok(best)
    }
}

/// Discrete log-likelihood of a tail with `n` samples, `sum_ln = sum ln x`.
pub fn log_likelihood(alpha: f64, xmin: u64, n: usize, sum_ln: f64) -> f64 {
    -(n as f64) * log(hurwitz_zeta(alpha, xmin as f64)) - alpha * sum_ln
}

/// The likelihood is concave in alpha, so golden-section search finds the
/// maximum on the bracket.
fn mle_alpha(xmin: u64, n: usize, sum_ln: f64) -> f64 {
    let f = |a: f64| log_likelihood(a, xmin, n, sum_ln);
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let (mut lo, mut hi) = (ALPHA_LO, ALPHA_HI);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > ALPHA_TOL {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    (lo + hi) / 2.0
}

/// Sum of `k^-alpha` for `k` in `from..to`.
fn partial_sum(alpha: f64, from: u64, to: u64) -> f64 {
    if to - from > 64 {
        hurwitz_zeta(alpha, from as f64) - hurwitz_zeta(alpha, to as f64)
    } else {
        (from..to).map(|k| pow(k as f64, -alpha)).sum()
    }
}

/// KS distance between a tail (distinct `values` with `counts`, the first
/// being `xmin`) and the discrete power law with exponent `alpha`. Both CDFs
/// are step functions, so the supremum is attained at an observed value or
/// just before the next one.
fn ks_distance(values: &[u64], counts: &[usize], n_tail: usize, alpha: f64) -> f64 {
    let z = hurwitz_zeta(alpha, values[0] as f64);
    // Unnormalized mass at or above the current point.
    let mut above = z;
    let mut cum = 0usize;
    let mut d = 0.0f64;
    for k in 0..values.len() {
        let x = values[k];
        above -= pow(x as f64, -alpha);
        cum += counts[k];
        let emp = cum as f64 / n_tail as f64;
        d = d.max((emp - (1.0 - above / z)).abs());
        if let Some(&next) = values.get(k + 1) {
            if next > x + 1 {
                above -= partial_sum(alpha, x + 1, next);
                d = d.max((emp - (1.0 - above / z)).abs());
            }
        }
    }
    d
}

/// Fits a discrete power law, choosing `xmin` among the observed values to
/// minimize the KS distance. Zeros are ignored.
pub fn fit_power_law(data: &[u64]) -> Result<PowerLawFit, PowerLawError> {
    Sample::new(data).fit()
}

/// Fit with `xmin` fixed; it must be an observed value below the maximum.
pub fn fit_with_xmin(data: &[u64], xmin: u64) -> Result<PowerLawFit, PowerLawError> {
    let s = Sample::new(data);
    s.check()?;
    match s.values.binary_search(&xmin) {
        Ok(i) if i + 1 < s.values.len() => Ok(s.fit_at(i)),
        _ => Err(PowerLawError::XminNotCandidate(xmin)),
    }
}

/// KS distance of the tail `x >= xmin` of `data` against an arbitrary law.
pub fn ks_statistic(data: &[u64], alpha: f64, xmin: u64) -> f64 {
    let s = Sample::new(data);
    let i = s.values.partition_point(|&v| v < xmin);
    if i == s.values.len() {
        return 1.0;
    }
    let values = &s.values[i..];
    let counts = &s.counts[i..];
    // The walk assumes the first value is the law's lower bound.
    if values[0] == xmin {
        return ks_distance(values, counts, s.suffix_n[i], alpha);
    }
    let mut v = alloc::vec![xmin];
    v.extend_from_slice(values);
    let mut c = alloc::vec![0];
    c.extend_from_slice(counts);
    ks_distance(&v, &c, s.suffix_n[i], alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn too_few_and_degenerate() {
        assert_eq!(
            fit_power_law(&[1, 2, 3, 0, 0]),
            Err(PowerLawError::TooFewSamples { found: 3, needed: 10 })
        );
        assert_eq!(fit_power_law(&[4; 50]), Err(PowerLawError::Degenerate));
    }

    #[test]
    fn mle_matches_grid_search() {
        let data = [1u64, 1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 4, 5, 7, 9, 15, 30];
        let f = fit_with_xmin(&data, 1).unwrap();
        let sum_ln: f64 = data.iter().map(|&x| log(x as f64)).sum();
        let mut best = (f64::NEG_INFINITY, 0.0);
        for k in 0..20000 {
            let a = 1.01 + k as f64 * 1e-4;
            let l = log_likelihood(a, 1, data.len(), sum_ln);
            if l > best.0 {
                best = (l, a);
            }
        }
        assert!((f.alpha - best.1).abs() < 2e-4, "{} vs {}", f.alpha, best.1);
    }

    #[test]
    fn ks_matches_explicit_cdf() {
        let data = [2u64, 2, 3, 5, 5, 5, 8, 13, 21, 40, 41];
        let alpha = 2.2;
        let z = hurwitz_zeta(alpha, 2.0);
        let n = data.len() as f64;
        let mut want = 0.0f64;
        let mut model = 0.0;
        for x in 2..=41u64 {
            model += pow(x as f64, -alpha) / z;
            let emp = data.iter().filter(|&&v| v <= x).count() as f64 / n;
            want = want.max((emp - model).abs());
        }
        assert!((ks_statistic(&data, alpha, 2) - want).abs() < 1e-12);
        let f = fit_with_xmin(&data, 2).unwrap();
        assert!((f.ks - ks_statistic(&data, f.alpha, 2)).abs() < 1e-12);
    }

    #[test]
    fn ks_with_unobserved_lower_bound() {
        let data = [3u64, 4, 4, 9];
        let alpha = 2.0;
        let z = hurwitz_zeta(alpha, 1.0);
        let mut want = 0.0f64;
        let mut model = 0.0;
        for x in 1..=9u64 {
            model += pow(x as f64, -alpha) / z;
            let emp = data.iter().filter(|&&v| v <= x).count() as f64 / 4.0;
            want = want.max((emp - model).abs());
        }
        assert!((ks_statistic(&data, alpha, 1) - want).abs() < 1e-12);
    }

    #[test]
    fn chosen_xmin_minimizes_ks() {
        let data: Vec<u64> = (1..200u64).map(|i| 1 + (1000 / i) % 37 + i % 3).collect();
        let best = fit_power_law(&data).unwrap();
        let s = Sample::new(&data);
        for i in 0..s.values.len() - 1 {
            assert!(best.ks <= s.fit_at(i).ks);
        }
    }
}
