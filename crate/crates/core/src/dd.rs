//! Double-double arithmetic built on error-free transformations.
//!
//! This is the fast lane under the certified evaluators: ~106 bits of
//! precision at f64 speed. Every consumer accounts errors explicitly with
//! the conservative per-operation relative bound [`EPS_DD`]; when that is
//! not enough the caller escalates to exact rational intervals.

use crate::scalar::{rat_from_f64, rat_to_f64, Rat};


/// Conservative relative rounding bound per double-double operation
/// (published bounds for add/mul/div are all below 5 * 2^-106).
pub const EPS_DD: f64 = 7.9e-31; // 2^-100

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134217729.0; // 2^27 + 1
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Conversion with relative error below `EPS_DD`.
    pub fn from_rat(r: &Rat) -> Self {
        let hi = rat_to_f64(r);
        if !hi.is_finite() {
            return Dd { hi, lo: 0.0 };
        }
        let rem = r - rat_from_f64(hi);
        let lo = rat_to_f64(&rem);
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn to_rat(self) -> Rat {
        rat_from_f64(self.hi) + rat_from_f64(self.lo)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Self {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Self {
        let (p, e) = two_prod(self.hi, rhs);
        let e = e + self.lo * rhs;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, rhs: Dd) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn div_u64(self, n: u64) -> Self {
        self.div(Dd::from_f64(n as f64))
    }
}

/// cos at a double-double point with |x| <= 4.
///
/// Returns the value and a certified absolute error bound covering both the
/// series truncation and the double-double rounding.
pub fn cos_dd_reduced(x: Dd) -> (Dd, f64) {
    trig_dd_reduced(x, false)
}

/// sin at a double-double point with |x| <= 4.
pub fn sin_dd_reduced(x: Dd) -> (Dd, f64) {
    trig_dd_reduced(x, true)
}

fn trig_dd_reduced(x: Dd, sine: bool) -> (Dd, f64) {
    debug_assert!(x.hi.abs() <= 4.0 + 1e-9, "argument not reduced: {}", x.hi);
    let x2 = x.mul(x);
    let mut term = if sine { x } else { Dd::ONE };
    let mut n: u64 = if sine { 1 } else { 0 };
    let mut sum = Dd::ZERO;
    let mut ops = 0u32;
    loop {
        sum = sum.add(term);
        term = term.mul(x2).div_u64((n + 1) * (n + 2)).neg();
        n += 2;
        ops += 1;
        // |x| <= 4 makes terms strictly decreasing once n >= 4, so the
        // remainder after stopping is below the first omitted term.
        if ops >= 3 && term.hi.abs() < 1e-40 {
            break;
        }
        if ops > 80 {
            break;
        }
    }
    // Partial magnitudes never exceed cosh(4) < 28; each op contributes at
    // most EPS_DD * 28 of absolute error, plus the omitted-term remainder.
    let rounding = (6 * ops) as f64 * EPS_DD * 28.0;
    let remainder = term.hi.abs() * 1.01 + 1e-300;
    (sum, rounding + remainder)
}

/// Compare a double-double against an exact rational: positive, negative,
/// or indeterminate within `err`.
pub fn dd_sign_with_err(v: Dd, err: f64) -> Option<std::cmp::Ordering> {
    let val = v.to_f64();
    if val - err > 0.0 {
        Some(std::cmp::Ordering::Greater)
    } else if val + err < 0.0 {
        Some(std::cmp::Ordering::Less)
    } else if err == 0.0 && val == 0.0 {
        Some(std::cmp::Ordering::Equal)
    } else {
        None
    }
}

/// Round an f64 error bound upward by a safety factor; keeps hand-computed
/// bound arithmetic (done in plain f64) conservative.
#[inline]
pub fn bump(e: f64) -> f64 {
    e * (1.0 + 1e-9) + 1e-300
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use num_traits::Signed;

    fn check_against_rat(d: Dd, r: &Rat, tol: &Rat) {
        let diff = (d.to_rat() - r).abs();
        assert!(&diff <= tol, "dd {} vs rat {}", d.to_f64(), crate::scalar::rat_to_f64(r));
    }

    #[test]
    fn dd_ops_match_exact_rationals() {
        let a = Dd::from_rat(&rat(1, 3));
        let b = Dd::from_rat(&rat(-7, 11));
        let tol = rat(1, 1) * Rat::new(1.into(), num_bigint::BigInt::from(2).pow(95));
        check_against_rat(a.add(b), &(rat(1, 3) + rat(-7, 11)), &tol);
        check_against_rat(a.mul(b), &(rat(1, 3) * rat(-7, 11)), &tol);
        check_against_rat(a.sub(b), &(rat(1, 3) - rat(-7, 11)), &tol);
        check_against_rat(a.div(b), &(rat(1, 3) / rat(-7, 11)), &tol);
    }

    #[test]
    fn dd_trig_matches_rational_interval_oracle() {
        use crate::interval::{cos_interval, sin_interval, RatInterval};
        for &x in &[0.0f64, 0.25, 1.0, 2.0, 3.0, -1.5, 3.9] {
            let xr = rat_from_f64(x);
            let (c, ce) = cos_dd_reduced(Dd::from_f64(x));
            let enc = cos_interval(&RatInterval::point(xr.clone()), 140);
            let lo = c.to_rat() - rat_from_f64(bump(ce));
            let hi = c.to_rat() + rat_from_f64(bump(ce));
            assert!(lo <= enc.hi && hi >= enc.lo, "cos dd vs interval disagree at {x}");
            assert!(ce < 3e-26, "cos error bound too loose: {ce}");
            let (s, se) = sin_dd_reduced(Dd::from_f64(x));
            let enc = sin_interval(&RatInterval::point(xr), 140);
            let lo = s.to_rat() - rat_from_f64(bump(se));
            let hi = s.to_rat() + rat_from_f64(bump(se));
            assert!(lo <= enc.hi && hi >= enc.lo, "sin dd vs interval disagree at {x}");
        }
    }

    #[test]
    fn from_rat_is_faithful() {
        let r = rat(22, 7) - rat_int(3); // 1/7
        let d = Dd::from_rat(&r);
        let diff = (d.to_rat() - &r).abs();
        assert!(diff < Rat::new(1.into(), num_bigint::BigInt::from(2).pow(100)));
    }
}
