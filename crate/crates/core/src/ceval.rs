//! Certified pointwise evaluation of cosine polynomials.
//!
//! Two lanes share one contract: every returned value carries a rigorous
//! absolute error radius valid for the *exact* rational interpretation of the
//! evaluation point.
//!
//! - Fast lane: double-double arithmetic with a rotation recurrence for the
//!   trigonometric table. Rotations are isometries, so the table error grows
//!   linearly in the frequency (a three-term Chebyshev recurrence would grow
//!   exponentially and is avoided on purpose).
//! - Exact lane: rational interval arithmetic at escalating precision, used
//!   when the fast lane cannot meet the requested radius or when a sign must
//!   be decided exactly.
//!
//! For rational t != 0 the value `sum a_n cos(n t)` is a nonzero combination
//! of exponentials at distinct algebraic points and therefore never exactly
//! zero (Lindemann-Weierstrass), so sign queries at nonzero rational points
//! terminate; a hard precision cap still guards against pathological inputs.

use crate::dd::{bump, cos_dd_reduced, sin_dd_reduced, Dd, EPS_DD};
use crate::error::{CoslabError, Result};
use crate::fixed::FxIvl;
use crate::interval::{two_pi_cached, RatInterval};
use crate::poly::CosinePoly;
use crate::scalar::{rat_int, rat_to_f64, rat_to_f64_ceil, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// A certified real value: `|value - exact| <= radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertValue {
    pub value: f64,
    pub radius: f64,
}

impl CertValue {
    pub fn exact(value: f64) -> Self {
        Self { value, radius: 0.0 }
    }

    /// Sign if the enclosure excludes zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.value - self.radius > 0.0 {
            Some(Ordering::Greater)
        } else if self.value + self.radius < 0.0 {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn abs_lower(&self) -> f64 {
        (self.value.abs() - self.radius).max(0.0)
    }

    pub fn abs_upper(&self) -> f64 {
        self.value.abs() + self.radius
    }
}

/// Hard cap for the exact-lane working precision, in bits.
const MAX_BITS: u32 = 12_288;

/// Double-double trig table at a point: `(cos(n r), sin(n r))` for
/// `n = 0..=deg`, where `r` is the reduced argument, plus a per-entry error
/// bound `n * per_step`.
struct DdTable {
    cs: Vec<(Dd, Dd)>,
    per_step: f64,
}

impl DdTable {
    /// Builds the table for the exact real `t` (the f64 read exactly),
    /// reduced modulo 2*pi.
    fn build(t: f64, deg: usize) -> Self {
        let two_pi = two_pi_cached();
        let tp_mid = two_pi.midpoint();
        let tp_dd = Dd::from_rat(&tp_mid);
        // |tp_dd - 2pi| <= interval half-width + faithful-rounding slack.
        let tp_err = rat_to_f64_ceil(&(two_pi.width() / rat_int(2))) + 7.0 * EPS_DD;

        let k = (t / 6.283_185_307_179_586).round();
        let r = Dd::from_f64(t).sub(tp_dd.mul_f64(k));
        // Reduction error: k * tp_err plus dd rounding on O(|t|) magnitudes.
        let red_err = k.abs() * tp_err + (t.abs() + 7.0) * 4.0 * EPS_DD;

        let (c1, c_err) = cos_dd_reduced(r);
        let (s1, s_err) = sin_dd_reduced(r);
        // d(cos)/dt, d(sin)/dt are bounded by 1, so the reduction error
        // propagates with factor 1 into each component.
        let base_err = c_err.max(s_err) + red_err;

        let mut cs = Vec::with_capacity(deg + 1);
        cs.push((Dd::ONE, Dd::ZERO));
        if deg >= 1 {
            cs.push((c1, s1));
            for n in 2..=deg {
                let (c_prev, s_prev) = cs[n - 1];
                let c = c_prev.mul(c1).sub(s_prev.mul(s1));
                let s = s_prev.mul(c1).add(c_prev.mul(s1));
                cs.push((c, s));
            }
        }
        // Per-step error: the rotation is an isometry, so the incoming error
        // is preserved (up to the base vector's own error, entering as a
        // cross term <= 1.5 * base_err) and each step adds dd rounding.
        let per_step = bump(1.5 * base_err + 30.0 * EPS_DD);
        Self { cs, per_step }
    }

    fn cos_n(&self, n: usize) -> (Dd, f64) {
        (self.cs[n].0, (n as f64) * self.per_step)
    }

    fn sin_n(&self, n: usize) -> (Dd, f64) {
        (self.cs[n].1, (n as f64) * self.per_step)
    }
}

/// Reusable fast-lane evaluator for one polynomial: caches coefficients as
/// double-doubles and their magnitudes.
pub struct DdEval {
    coeffs: Vec<(usize, Dd, f64)>, // (n, a_n, |a_n| rounded up)
    deg: usize,
}

impl DdEval {
    pub fn new(p: &CosinePoly) -> Self {
        let mut coeffs = Vec::new();
        for (n, a) in p.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let a_dd = Dd::from_rat(a);
            let mag = bump(rat_to_f64_ceil(&a.abs()));
            coeffs.push((n, a_dd, mag));
        }
        let deg = coeffs.last().map_or(0, |&(n, _, _)| n);
        Self { coeffs, deg }
    }

    /// `p(t)` with certified radius.
    pub fn eval(&self, t: f64) -> CertValue {
        let table = DdTable::build(t, self.deg);
        let mut sum = Dd::ZERO;
        let mut err = 0.0_f64;
        for &(n, a, mag) in &self.coeffs {
            let (c, c_err) = table.cos_n(n);
            sum = sum.add(a.mul(c));
            // conversion + table + two dd ops of rounding
            err += mag * (c_err + EPS_DD * 1.02) + EPS_DD * (mag + sum.to_f64().abs()) * 4.0;
        }
        collapse(sum, err)
    }

    /// `p'(t) = -sum n a_n sin(n t)` with certified radius.
    pub fn eval_deriv(&self, t: f64) -> CertValue {
        let table = DdTable::build(t, self.deg);
        let mut sum = Dd::ZERO;
        let mut err = 0.0_f64;
        for &(n, a, mag) in &self.coeffs {
            if n == 0 {
                continue;
            }
            let (s, s_err) = table.sin_n(n);
            let nf = n as f64;
            sum = sum.sub(a.mul(s).mul_f64(nf));
            err += nf * mag * (s_err + EPS_DD * 1.02)
                + EPS_DD * (nf * mag + sum.to_f64().abs()) * 6.0;
        }
        collapse(sum, err)
    }

    /// `(p(t), p'(t), p''(t))` from a single trig-table build. The table
    /// (the dominant cost) is shared; the three sums reuse its entries:
    /// `p = sum a_n cos`, `p' = -sum n a_n sin`, `p'' = -sum n^2 a_n cos`.
    pub fn eval_with_derivs(&self, t: f64) -> (CertValue, CertValue, CertValue) {
        let table = DdTable::build(t, self.deg);
        let mut s0 = Dd::ZERO;
        let mut s1 = Dd::ZERO;
        let mut s2 = Dd::ZERO;
        let mut e0 = 0.0_f64;
        let mut e1 = 0.0_f64;
        let mut e2 = 0.0_f64;
        for &(n, a, mag) in &self.coeffs {
            let (c, c_err) = table.cos_n(n);
            s0 = s0.add(a.mul(c));
            e0 += mag * (c_err + EPS_DD * 1.02) + EPS_DD * (mag + s0.to_f64().abs()) * 4.0;
            if n == 0 {
                continue;
            }
            let (s, s_err) = table.sin_n(n);
            let nf = n as f64;
            s1 = s1.sub(a.mul(s).mul_f64(nf));
            e1 += nf * mag * (s_err + EPS_DD * 1.02)
                + EPS_DD * (nf * mag + s1.to_f64().abs()) * 6.0;
            let n2 = nf * nf;
            s2 = s2.sub(a.mul(c).mul_f64(n2));
            e2 += n2 * mag * (c_err + EPS_DD * 1.02)
                + EPS_DD * (n2 * mag + s2.to_f64().abs()) * 6.0;
        }
        (collapse(s0, e0), collapse(s1, e1), collapse(s2, e2))
    }

    /// Antiderivative `A(t) = a_0 t + sum_{n>=1} a_n sin(n t)/n`, normalized
    /// by `A(0) = 0`, with certified radius.
    pub fn eval_antideriv(&self, t: f64) -> CertValue {
        let table = DdTable::build(t, self.deg);
        let mut sum = Dd::ZERO;
        let mut err = 0.0_f64;
        for &(n, a, mag) in &self.coeffs {
            if n == 0 {
                sum = sum.add(a.mul_f64(t));
                err += EPS_DD * mag * t.abs() * 4.0;
                continue;
            }
            let (s, s_err) = table.sin_n(n);
            let nf = n as f64;
            sum = sum.add(a.mul(s).div_u64(n as u64));
            err += mag / nf * (s_err + EPS_DD * 2.0)
                + EPS_DD * (mag / nf + sum.to_f64().abs()) * 6.0;
        }
        collapse(sum, err)
    }
}

/// Certified `(sin a, cos a, err)` for a double-double argument: range
/// reduction modulo 2*pi in double-double, then the reduced-argument
/// series kernels. Valid for |a| well below 2^53 (the reduction multiple
/// must be exactly representable); the error bound covers reduction,
/// truncation, and rounding for both components.
pub fn sin_cos_dd(a: Dd) -> (Dd, Dd, f64) {
    let two_pi = two_pi_cached();
    let tp_dd = Dd::from_rat(&two_pi.midpoint());
    let tp_err = rat_to_f64_ceil(&(two_pi.width() / rat_int(2))) + 7.0 * EPS_DD;
    let af = a.to_f64();
    let k = (af / 6.283_185_307_179_586).round();
    let r = a.sub(tp_dd.mul_f64(k));
    let red_err = k.abs() * tp_err + (af.abs() + 7.0) * 4.0 * EPS_DD;
    let (s, s_err) = sin_dd_reduced(r);
    let (c, c_err) = cos_dd_reduced(r);
    (s, c, bump(s_err.max(c_err) + red_err))
}

/// Collapses a double-double with accumulated error `err` into a CertValue,
/// accounting for the final rounding to a single f64.
fn collapse(sum: Dd, err: f64) -> CertValue {
    let value = sum.to_f64();
    // |value - (hi + lo)| is at most half an ulp of value.
    let quant = value.abs() * (f64::EPSILON / 2.0) + f64::MIN_POSITIVE;
    CertValue { value, radius: bump(err + quant) }
}

/// Exact-lane evaluation: `p(t)` as a rational interval at roughly `bits`
/// of working precision, for an exact rational `t`.
///
/// Runs the `cos(nt)` rotation recurrence on the fixed-point interval
/// kernel: rotations are isometries, so enclosure widths grow only linearly
/// in the degree, and the integer mantissas sidestep rational
/// normalization costs.
pub fn eval_rat(p: &CosinePoly, t: &Rat, bits: u32) -> RatInterval {
    if p.is_zero() {
        return RatInterval::point(Rat::zero());
    }
    let deg = p.degree() as usize;
    let wp = bits + 24;
    let c1 = crate::fixed::fx_trig_point(t, wp, false);
    let s1 = crate::fixed::fx_trig_point(t, wp, true);
    let mut acc = FxIvl::from_rat(&p.coeff(0), wp);
    let (mut c_prev, mut s_prev) = (FxIvl::one(wp), FxIvl::zero(wp));
    for n in 1..=deg {
        let c = c_prev.mul(&c1).sub(&s_prev.mul(&s1));
        let s = s_prev.mul(&c1).add(&c_prev.mul(&s1));
        let a = p.coeff(n);
        if !a.is_zero() {
            acc = acc.add(&c.mul(&FxIvl::from_rat(&a, wp)));
        }
        c_prev = c;
        s_prev = s;
    }
    acc.to_rat_interval()
}

/// Certified evaluation meeting `tol` when achievable: double-double first,
/// rational intervals at escalating precision otherwise.
pub fn eval_certified(p: &CosinePoly, t: f64, tol: f64) -> Result<CertValue> {
    if !t.is_finite() || !(tol > 0.0) {
        return Err(CoslabError::InvalidInput(format!(
            "evaluation needs finite t and positive tol, got t={t}, tol={tol}"
        )));
    }
    if p.is_zero() {
        return Ok(CertValue::exact(0.0));
    }
    let fast = DdEval::new(p).eval(t);
    if fast.radius <= tol {
        return Ok(fast);
    }
    let t_rat = crate::scalar::rat_from_f64(t);
    let mut bits = ((-tol.log2()).ceil() as u32 + 64).max(128);
    let mut best = fast;
    while bits <= MAX_BITS {
        let iv = eval_rat(p, &t_rat, bits);
        let cv = interval_to_cert(&iv);
        if cv.radius < best.radius {
            best = cv;
        }
        if cv.radius <= tol {
            return Ok(cv);
        }
        bits *= 2;
    }
    Err(CoslabError::ToleranceUnachievable { requested: tol, floor: best.radius })
}

/// Collapses a rational interval to an f64 value with certified radius.
pub fn interval_to_cert(iv: &RatInterval) -> CertValue {
    let mid = iv.midpoint();
    let value = rat_to_f64(&mid);
    let value_rat = crate::scalar::rat_from_f64(value);
    let rad = (&iv.hi - &value_rat).max((&value_rat - &iv.lo).max(Rat::zero()));
    CertValue { value, radius: bump(rat_to_f64_ceil(&rad)) }
}

/// Exact sign of `p(t)` at a rational point. Exact immediately at `t = 0`;
/// otherwise escalates precision (termination is guaranteed for nonzero
/// rational `t` unless `p` is the zero polynomial).
pub fn sign_at(p: &CosinePoly, t: &Rat) -> Result<Ordering> {
    if p.is_zero() {
        return Ok(Ordering::Equal);
    }
    if t.is_zero() {
        return Ok(p.value_at_zero().cmp(&Rat::zero()));
    }
    let mut bits = 96u32;
    while bits <= MAX_BITS {
        let iv = eval_rat(p, t, bits);
        if let Some(s) = iv.sign() {
            return Ok(s);
        }
        bits *= 2;
    }
    Err(CoslabError::AmbiguousSign { near: rat_to_f64(t) })
}

/// Taylor-germ analysis at t = 0: returns the sign of `p` on a punctured
/// right neighborhood `(0, delta]` together with such a `delta > 0`.
///
/// Uses exact even moments `M_{2k} = sum a_n n^{2k}`: the first nonzero
/// moment dominates the tail for `t` below an explicitly computed radius.
/// A nonzero polynomial always has a nonzero moment among `k = 0..=deg`
/// (Vandermonde in the distinct squares of the support frequencies).
pub fn germ_at_zero(p: &CosinePoly) -> Result<(Ordering, Rat)> {
    if p.is_zero() {
        return Err(CoslabError::IdenticallyZero);
    }
    let deg = p.degree() as usize;
    if deg == 0 {
        // Constant polynomial: sign everywhere; any delta works.
        let s = p.coeff(0).cmp(&Rat::zero());
        return Ok((s, rat_int(1)));
    }
    let n_rat = rat_int(deg as i64);
    let a_sum = p.sup_bound(); // sum |a_n| > 0 here
    for k in 0..=deg {
        let m2k: Rat = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, a)| a * Rat::from(BigInt::from(n).pow(2 * k as u32)))
            .sum();
        if m2k.is_zero() {
            continue;
        }
        // Dominance radius: t^2 < (3/4) |M_2k| (2k+1)(2k+2) / (A N^{2k+2}),
        // valid together with N t <= 1/2.
        let num = m2k.abs()
            * rat_int((2 * k + 1) as i64)
            * rat_int((2 * k + 2) as i64)
            * crate::scalar::rat(3, 4);
        let den = &a_sum * Rat::from(BigInt::from(deg).pow(2 * k as u32 + 2));
        let delta = sqrt_lower(&(num / den)).min(crate::scalar::rat(1, 2) / &n_rat);
        let sign = if k % 2 == 0 {
            m2k.cmp(&Rat::zero())
        } else {
            Rat::zero().cmp(&m2k)
        };
        return Ok((sign, delta));
    }
    unreachable!("nonzero cosine polynomial with all even moments zero");
}

/// Germ at t = pi: sign of `p` on `[pi - delta, pi)`.
pub fn germ_at_pi(p: &CosinePoly) -> Result<(Ordering, Rat)> {
    germ_at_zero(&p.reflect_at_pi())
}

/// A positive rational strictly below sqrt(r), for r > 0 (dyadic output).
pub fn sqrt_lower(r: &Rat) -> Rat {
    assert!(r.is_positive(), "sqrt_lower needs positive input");
    let mut m: u32 = 64;
    loop {
        let scaled = (r * Rat::from(BigInt::one() << (2 * m))).floor().to_integer();
        if scaled.is_positive() {
            let root = scaled.sqrt();
            // root^2 <= scaled <= r * 4^m, so root / 2^m <= sqrt(r).
            let cand = Rat::new(root, BigInt::one() << m);
            if cand.is_positive() {
                // Nudge strictly below in the (measure-zero) exact case.
                let sq = &cand * &cand;
                return if &sq == r { cand * crate::scalar::rat(1023, 1024) } else { cand };
            }
        }
        m *= 2;
        assert!(m <= 1 << 20, "sqrt_lower failed to converge");
    }
}
