use libm::pow;

// B_2j / (2j)! for j = 1..=7.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
];

/// Hurwitz zeta `sum_{k>=0} (q + k)^-s` for `s > 1`, `q > 0`, by
/// Euler-Maclaurin summation. Relative error is near machine precision.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    // Shift far enough that the correction series converges quickly even
    // for steep exponents.
    let shift = (10.0 + s - q).max(0.0) as usize;
    let mut head = 0.0;
    for k in 0..shift {
        head += pow(q + k as f64, -s);
    }
    let a = q + shift as f64;
    let a_s = pow(a, -s);
    let mut tail = a * a_s / (s - 1.0) + 0.5 * a_s;
    // Rising factorial s (s+1) ... (s+2j-2) times a^(-s-2j+1).
    let mut factor = s * a_s / a;
    let inv_a2 = 1.0 / (a * a);
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = b * factor;
        tail += term;
        if term.abs() < 1e-17 * tail.abs() {
            break;
        }
        let m = 2.0 * j as f64;
        factor *= (s + m + 1.0) * (s + m + 2.0) * inv_a2;
    }
    head + tail
}
