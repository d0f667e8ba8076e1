//! Shared oracles and generators for the acceptance suite.
//!
//! Everything here is deliberately independent of the library's own
//! evaluation machinery: plain `f64` summation, textbook bisection, and
//! direct combinatorial construction. Agreement between these oracles
//! and the library's certified paths is the point of the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct evaluation of `Σ a_n cos(nθ)` in plain `f64`.
pub fn eval_cos(coeffs: &[i64], theta: f64) -> f64 {
    let mut acc = 0.0;
    for (n, &a) in coeffs.iter().enumerate() {
        if a != 0 {
            acc += a as f64 * (n as f64 * theta).cos();
        }
    }
    acc
}

/// Direct evaluation of the derivative `-Σ n·a_n sin(nθ)`.
pub fn eval_cos_deriv(coeffs: &[i64], theta: f64) -> f64 {
    let mut acc = 0.0;
    for (n, &a) in coeffs.iter().enumerate() {
        if a != 0 && n > 0 {
            acc -= (n as f64) * a as f64 * (n as f64 * theta).sin();
        }
    }
    acc
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Sampling + bisection zero oracle for integer-coefficient cosine
/// polynomials: returns `(Z, d)` where `Z` counts distinct zeros in
/// `[0, 2π)` and `d` counts sign changes in the open interval `(0, π)`.
///
/// Strategy: the endpoints `0` and `π` are decided exactly (the values
/// are integers); on `(0, π)` sign alternations over a dense grid are
/// bisected into crossing zeros, and critical points of the derivative
/// whose function value is below a threshold are counted as touching
/// (even-order) zeros. Candidates closer than 1e-7 are merged — far
/// below the zero separation integer-coefficient polynomials of these
/// degrees can achieve, and far above bisection error. A genuinely
/// nonzero critical value below 1e-8·scale would fool the oracle, but
/// that requires a near-double-root coincidence no random integer input
/// realizes.
pub fn oracle_zero_count(coeffs: &[i64], grid: usize) -> (u64, u64) {
    let pi = std::f64::consts::PI;
    let scale: f64 = coeffs.iter().map(|&a| a.abs() as f64).sum::<f64>().max(1.0);
    let band = 1e-12 * scale;

    let f0: i64 = coeffs.iter().sum();
    let fpi: i64 = coeffs
        .iter()
        .enumerate()
        .map(|(n, &a)| if n % 2 == 0 { a } else { -a })
        .sum();
    assert!(
        coeffs.iter().any(|&a| a != 0),
        "oracle needs a nonzero polynomial"
    );
    let deg = coeffs.iter().rposition(|&a| a != 0).unwrap();
    if deg == 0 {
        return (0, 0); // nonzero constant
    }

    let f = |t: f64| eval_cos(coeffs, t);
    let df = |t: f64| eval_cos_deriv(coeffs, t);

    // crossing zeros from sign alternations of f
    let mut candidates: Vec<(f64, bool)> = Vec::new();
    let mut last: Option<(f64, f64)> = None; // (θ, sign)
    for i in 1..grid {
        let t = pi * i as f64 / grid as f64;
        let v = f(t);
        if v.abs() <= band {
            continue;
        }
        let s = v.signum();
        if let Some((t0, s0)) = last {
            if s != s0 {
                candidates.push((bisect(&f, t0, t), true));
            }
        }
        last = Some((t, s));
    }

    // touching zeros from critical points with a (numerically) zero value
    let scale_d: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(n, &a)| (n as f64) * a.abs() as f64)
        .sum::<f64>()
        .max(1.0);
    let band_d = 1e-12 * scale_d;
    let mut last_d: Option<(f64, f64)> = None;
    for i in 1..grid {
        let t = pi * i as f64 / grid as f64;
        let v = df(t);
        if v.abs() <= band_d {
            continue;
        }
        let s = v.signum();
        if let Some((t0, s0)) = last_d {
            if s != s0 {
                let tc = bisect(&df, t0, t);
                if tc > 0.0 && tc < pi && f(tc).abs() < 1e-8 * scale {
                    candidates.push((tc, false));
                }
            }
        }
        last_d = Some((t, s));
    }

    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut distinct = 0u64;
    let mut crossings = 0u64;
    let mut i = 0;
    while i < candidates.len() {
        let mut j = i + 1;
        let mut is_crossing = candidates[i].1;
        while j < candidates.len() && candidates[j].0 - candidates[j - 1].0 < 1e-7 {
            is_crossing |= candidates[j].1;
            j += 1;
        }
        distinct += 1;
        if is_crossing {
            crossings += 1;
        }
        i = j;
    }

    let z = 2 * distinct + u64::from(f0 == 0) + u64::from(fpi == 0);
    (z, crossings)
}

/// A structured polynomial with its ground-truth description.
pub struct StructuredCase {
    pub coeffs: Vec<i64>,
    pub intervals: Vec<(usize, usize)>,
    pub p: usize,
    /// Sum of one period of each interval's pattern.
    pub sums: Vec<i64>,
}

/// Whether a coarse sample of the polynomial shows both signs — a cheap
/// sufficient condition for at least one sign change in `(0, π)`.
fn shows_both_signs(coeffs: &[i64]) -> bool {
    let pi = std::f64::consts::PI;
    let n = 64 * coeffs.len().max(4);
    let mut pos = false;
    let mut neg = false;
    for i in 1..n {
        let v = eval_cos(coeffs, pi * i as f64 / n as f64);
        if v > 1e-9 {
            pos = true;
        }
        if v < -1e-9 {
            neg = true;
        }
        if pos && neg {
            return true;
        }
    }
    false
}

/// Random structured polynomials: `K ≤ max_k` intervals, each internally
/// periodic with a common period `P ≤ max_p`, interval lengths in
/// `[len_lo·P, len_hi·P]`, pattern values in `[-3, 3]`. Every emitted
/// case is nonzero and takes both signs (so `d ≥ 1`).
pub fn structured_family(
    seed: u64,
    count: usize,
    max_k: usize,
    max_p: usize,
    len_lo: usize,
    len_hi: usize,
) -> Vec<StructuredCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = rng.gen_range(1..=max_p);
        let k = rng.gen_range(1..=max_k);
        let mut coeffs: Vec<i64> = Vec::new();
        let mut intervals = Vec::with_capacity(k);
        let mut sums = Vec::with_capacity(k);
        for _ in 0..k {
            let pattern: Vec<i64> = (0..p).map(|_| rng.gen_range(-3..=3)).collect();
            let len = rng.gen_range(len_lo * p..=len_hi * p);
            let lo = coeffs.len();
            for i in 0..len {
                coeffs.push(pattern[i % p]);
            }
            intervals.push((lo, coeffs.len() - 1));
            sums.push(pattern.iter().sum());
        }
        if coeffs.iter().all(|&a| a == 0) || !shows_both_signs(&coeffs) {
            continue;
        }
        out.push(StructuredCase { coeffs, intervals, p, sums });
    }
    out
}

/// Deterministic RNG for the suite.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
