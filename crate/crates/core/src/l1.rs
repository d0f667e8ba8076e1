//! L¹ norms of cosine polynomials and the two-sided estimates that
//! sandwich the norm of a smoothed polynomial.
//!
//! The norm convention is the average over one period:
//! `‖p‖₁ = (1/π) ∫₀^π |p(θ)| dθ`, which equals `∫₀¹ |q(t)| dt` for the
//! unit-period form `q(t) = p(2πt)`. Everything downstream (lower bounds
//! from coefficient structure, upper bounds from antiderivative windows)
//! uses the same convention.

use crate::ceval::{CertValue, DdEval};
use crate::error::{CoslabError, Result};
use crate::poly::CosinePoly;
use crate::scalar::{rat_from_f64, rat_int, rat_to_f64, rat_to_f64_ceil, Rat};
use crate::sine_integral::{window_sum, WindowFamily};
use crate::smoothing::{block_form, build_tilde, BlockForm, PeriodicPartition};
use crate::zeros::sign_change_points;
use num_traits::{Signed, Zero};
use serde::Serialize;

/// `(1/π) ∫₀^π |p|`, certified.
///
/// Splits `[0, π]` at the sign-change points of `p` (isolated to a width
/// chosen from `tol`), integrates the exact antiderivative
/// `A(θ) = a₀θ + Σ aₙ sin(nθ)/n` between consecutive cuts in
/// double-double, and sums `|ΔA|`. The cut-placement error is at most
/// `2·width·sup|p|` per crossing; evaluation radii are carried through.
pub fn l1_norm(p: &CosinePoly, tol: f64) -> Result<CertValue> {
    if p.is_zero() {
        return Err(CoslabError::IdenticallyZero);
    }
    if !(tol > 0.0) {
        return Err(CoslabError::InvalidInput("l1_norm needs tol > 0".into()));
    }
    let sup = rat_to_f64_ceil(&p.sup_bound()) + 1.0;
    let deg = p.degree().max(1) as f64;

    // Budget: half of tol for cut placement, the rest for evaluation.
    let width = tol / (4.0 * sup * deg);
    let cuts = sign_change_points(p, &rat_from_f64(width))?;

    let ev = DdEval::new(p);
    let mut points = vec![0.0f64];
    for (lo, hi) in &cuts {
        points.push(rat_to_f64(&((lo + hi) / rat_int(2))));
    }
    points.push(std::f64::consts::PI);

    let mut total = 0.0f64;
    let mut err = 0.0f64;
    let mut prev = CertValue::exact(0.0); // A(0) = 0
    for w in points.windows(2) {
        let cur = ev.eval_antideriv(w[1]);
        total += (cur.value - prev.value).abs();
        err += cur.radius + prev.radius;
        prev = cur;
    }
    // cut placement + the f64-pi endpoint offset (|A'| <= sup there)
    err += cuts.len() as f64 * 2.0 * width * sup + sup * 3e-16;

    let value = total / std::f64::consts::PI;
    let err = crate::dd::bump(err / std::f64::consts::PI + value * 3.0 * f64::EPSILON);
    Ok(CertValue { value, radius: err })
}

/// Certified `‖p‖₁` for a polynomial whose sign flips are already
/// covered: every flip lies either inside one of `flip_brackets` or
/// within the stated distance of one of `extra_cuts` `(point, dist)`.
/// That premise is the caller's obligation — it typically holds
/// structurally, e.g. for `p = g · k` with `k ≥ 0`, whose flips are a
/// subset of `g`'s, or for factors with known cosine-domain roots.
///
/// This is the norm of choice when `p` has zeros of even multiplicity
/// (squared kernels, perturbation factors): the generic sign-change
/// scan of [`l1_norm`] cannot certify signs next to such zeros, while
/// here the exact antiderivative telescopes between cut points and each
/// covered flip adds at most `2·dist·sup|p|` to the radius. Cutting at
/// a point where `p` does not actually flip is harmless.
pub fn l1_norm_with_flips(
    p: &CosinePoly,
    flip_brackets: &[(Rat, Rat)],
    extra_cuts: &[(f64, f64)],
) -> Result<CertValue> {
    if p.is_zero() {
        return Err(CoslabError::IdenticallyZero);
    }
    let pi = std::f64::consts::PI;
    let sup = rat_to_f64_ceil(&p.sup_bound()) + 1.0;
    let mut pts: Vec<f64> = Vec::new();
    let mut flip_err = 0.0f64;
    for (lo, hi) in flip_brackets {
        pts.push(rat_to_f64(&((lo + hi) / rat_int(2))));
        let w = rat_to_f64(&((hi - lo) / rat_int(2))) + 1e-15;
        flip_err += 2.0 * w * sup;
    }
    for &(t, dist) in extra_cuts {
        pts.push(t);
        flip_err += 2.0 * (dist + 1e-15) * sup;
    }
    pts.retain(|t| *t > 0.0 && *t < pi);
    pts.sort_by(f64::total_cmp);

    let ev = DdEval::new(p);
    let mut total = 0.0f64;
    let mut err = flip_err + sup * 3e-16;
    let mut prev = CertValue::exact(0.0); // A(0) = 0
    for t in pts.into_iter().chain(std::iter::once(pi)) {
        let cur = ev.eval_antideriv(t);
        total += (cur.value - prev.value).abs();
        err += cur.radius + prev.radius;
        prev = cur;
    }
    let value = total / pi;
    let err = crate::dd::bump(err / pi + value * 3.0 * f64::EPSILON);
    Ok(CertValue { value, radius: err })
}

/// The reference lower-bound functional `Σ_{j=1}^k |a_j| / j` over a
/// spectrum listed by strictly increasing frequency, exactly. The
/// absolute constant in front is treated as 1; empirical ratios against
/// true norms are reported by callers, never asserted.
pub fn littlewood_lower(spectrum: &[(Rat, u64)]) -> Result<Rat> {
    if spectrum.windows(2).any(|w| w[0].1 >= w[1].1) {
        return Err(CoslabError::InvalidInput(
            "frequencies must be strictly increasing".into(),
        ));
    }
    Ok(spectrum
        .iter()
        .enumerate()
        .map(|(j, (a, _))| a.abs() / rat_int(j as i64 + 1))
        .sum())
}

/// Certified upper bound for `sup_x |G(x)|` where
/// `G(x) = ∫₀ˣ p(2πt) dt = A(2πx)/(2π)`: a grid of `grid_mult·deg` points
/// over one period plus derivative padding (`|G'| = |p| ≤ Σ|aₙ|`).
pub fn sup_abs_antiderivative(p: &CosinePoly, grid_mult: usize) -> f64 {
    let ev = DdEval::new(p);
    let n = (grid_mult * p.degree().max(1) as usize).max(8);
    let mut best = 0.0f64;
    for i in 0..=n {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let a = ev.eval_antideriv(theta);
        best = best.max(a.value.abs() + a.radius);
    }
    let sup_p = rat_to_f64_ceil(&p.sup_bound());
    // step in the unit-period variable is 1/n; |G'| <= sup_p
    let padding = sup_p / n as f64 / 2.0;
    crate::dd::bump(best / (2.0 * std::f64::consts::PI) + padding)
}

/// The exact two sides of the block-coverage inequality
/// `Σ_{c_j ≠ 0} |J̃_j| >= |g̃(0)| / (4 M(S))`: returns
/// `(Σ_{c_j ≠ 0} |J̃_j|, |g̃(0)| / (4 M(S)))` as exact rationals.
///
/// The inequality follows from `|c_j| <= 4 M(S)`, which holds for all
/// blocks at frequencies `>= 2P - 1`; when the polynomial's constant term
/// is nonzero, low-frequency blocks can exceed that bound slightly, so
/// the inequality is guaranteed only when interior blocks dominate
/// (degree comfortably above `2P`).
pub fn block_coverage_inequality(bf: &BlockForm) -> (Rat, Rat) {
    let lhs: Rat = bf
        .blocks
        .iter()
        .filter(|b| !b.c.is_zero())
        .map(|b| rat_int(b.len() as i64))
        .sum();
    let rhs = if bf.m_bound.is_zero() {
        Rat::zero()
    } else {
        bf.value_at_zero().abs() / &bf.m_bound
    };
    (lhs, rhs)
}

/// Grid size used for the sup in the window-sum upper bound.
const WINDOW_SUP_GRID: usize = 128;

/// The two-sided L¹ comparison for a smoothed polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct L1Report {
    /// `‖g̃‖₁` with certified radius.
    pub norm: f64,
    pub norm_err: f64,
    /// `Σ |c̃_n| / rank` over the smoothed polynomial's nonzero spectrum.
    pub lower_littlewood: f64,
    /// `P⁻² ln(|g(0)| / M(S))`, clamped at 0 when the log is nonpositive.
    pub lower_lemma32: f64,
    /// `d · M(S) · (sup_x Σ_j |Si(n_j x) - Si(n_{j-1} x)| + ln K̃)` over
    /// the block right-endpoints.
    pub upper_eq_l1: f64,
    /// `lower_lemma32 / norm` (0 when the norm vanishes).
    pub ratio_lower: f64,
    /// `norm / upper_eq_l1` (0 when the upper bound vanishes).
    pub ratio_upper: f64,
    /// Sign changes of the unsmoothed polynomial in `(0, π)` — identical
    /// to the smoothed one's, since the kernel square is nonnegative.
    pub d: u64,
    /// Number of blocks in the block form.
    pub k_tilde: usize,
}

/// Builds the smoothed polynomial and its block form, then computes the
/// certified norm, both lower bounds, and the window-sum upper bound.
///
/// The sign-change count is taken on the *unsmoothed* polynomial (the
/// kernel square preserves sign changes and the degree is lower). The sup
/// over `x` in the upper bound is a 128-point grid maximum — a reported
/// statistic, not a certified supremum.
pub fn sandwich_report(g: &CosinePoly, partition: &PeriodicPartition) -> Result<L1Report> {
    partition.validate_against(g)?;
    let p = partition.p();
    let gt = build_tilde(g, p)?;
    let bf = block_form(&gt, partition)?;

    let cuts = sign_change_points(g, &crate::zeros::default_report_width())?;
    let d = cuts.len() as u64;
    // the squared kernel is nonnegative, so the smoothed polynomial can
    // only flip sign where g does — and it has even-order zeros of its
    // own, which rules out the generic scan
    let norm = l1_norm_with_flips(&gt, &cuts, &[])?;

    let spectrum: Vec<(Rat, u64)> = gt
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (c.clone(), n as u64))
        .collect();
    let lower_littlewood = rat_to_f64(&littlewood_lower(&spectrum)?);

    let m_s = g.max_abs_coeff();
    let g0 = g.value_at_zero().abs();
    let lower_lemma32 = if m_s.is_zero() || g0 <= m_s {
        0.0
    } else {
        let ratio = rat_to_f64(&(g0 / &m_s));
        ratio.ln() / (p * p) as f64
    };

    let endpoints: Vec<u64> = bf
        .blocks
        .iter()
        .map(|b| b.hi as u64)
        .filter(|&h| h > 0)
        .collect();
    let mut sup_window = 0.0f64;
    if !endpoints.is_empty() {
        for i in 1..=WINDOW_SUP_GRID {
            let x = std::f64::consts::PI * i as f64 / WINDOW_SUP_GRID as f64;
            let w = WindowFamily::new(endpoints.clone(), x)?;
            let s = window_sum(&w, 1e-6)?;
            sup_window = sup_window.max(s.value + s.err);
        }
    }
    let k_tilde = bf.k_tilde();
    let m_f = rat_to_f64(&m_s);
    let upper_eq_l1 = d as f64 * m_f * (sup_window + (k_tilde.max(1) as f64).ln());

    let ratio_lower = if norm.value > 0.0 { lower_lemma32 / norm.value } else { 0.0 };
    let ratio_upper = if upper_eq_l1 > 0.0 { norm.value / upper_eq_l1 } else { 0.0 };

    Ok(L1Report {
        norm: norm.value,
        norm_err: norm.radius,
        lower_littlewood,
        lower_lemma32,
        upper_eq_l1,
        ratio_lower,
        ratio_upper,
        d,
        k_tilde,
    })
}
