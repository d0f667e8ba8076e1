//! Dyadic fixed-point interval kernel.
//!
//! Exact rational interval arithmetic (`RatInterval`) normalizes through a
//! gcd after every operation, which dominates the runtime of iterated
//! kernels (trig series, rotation recurrences). This module represents
//! interval endpoints as `mant * 2^-prec` with `BigInt` mantissas at a
//! shared scale: addition is integer addition, multiplication is an integer
//! product followed by a directed shift, and no normalization ever happens.
//! All rounding is outward, so every interval is a true enclosure.

use crate::interval::RatInterval;
use crate::scalar::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

/// Floor division by 2^s (arithmetic shift).
fn shr_floor(x: &BigInt, s: u32) -> BigInt {
    // num-bigint's Shr matches primitive semantics (floor); keep a guard in
    // tests rather than paying for div_floor here.
    x >> s
}

/// Ceiling division by 2^s.
fn shr_ceil(x: &BigInt, s: u32) -> BigInt {
    -shr_floor(&-x, s)
}

/// Interval `[lo, hi] * 2^-prec` with integer mantissas.
#[derive(Clone, Debug)]
pub struct FxIvl {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

impl FxIvl {
    pub fn point_mant(mant: BigInt, prec: u32) -> Self {
        Self { lo: mant.clone(), hi: mant, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::point_mant(BigInt::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::point_mant(BigInt::one() << prec, prec)
    }

    /// Outward-rounded conversion from an exact rational.
    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        let scaled_num = r.numer() << prec;
        let lo = scaled_num.div_floor(r.denom());
        let hi = scaled_num.div_ceil(r.denom());
        Self { lo, hi, prec }
    }

    pub fn to_rat_interval(&self) -> RatInterval {
        let den = BigInt::one() << self.prec;
        RatInterval::new(
            Rat::new(self.lo.clone(), den.clone()),
            Rat::new(self.hi.clone(), den),
        )
    }

    pub fn is_valid(&self) -> bool {
        self.lo <= self.hi
    }

    pub fn add(&self, rhs: &FxIvl) -> FxIvl {
        debug_assert_eq!(self.prec, rhs.prec);
        FxIvl { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi, prec: self.prec }
    }

    pub fn sub(&self, rhs: &FxIvl) -> FxIvl {
        debug_assert_eq!(self.prec, rhs.prec);
        FxIvl { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo, prec: self.prec }
    }

    pub fn neg(&self) -> FxIvl {
        FxIvl { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    /// Interval product with outward rounding (four-corner min/max).
    pub fn mul(&self, rhs: &FxIvl) -> FxIvl {
        debug_assert_eq!(self.prec, rhs.prec);
        let ll = &self.lo * &rhs.lo;
        let lh = &self.lo * &rhs.hi;
        let hl = &self.hi * &rhs.lo;
        let hh = &self.hi * &rhs.hi;
        let mut lo = &ll;
        let mut hi = &ll;
        for v in [&lh, &hl, &hh] {
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        FxIvl { lo: shr_floor(lo, self.prec), hi: shr_ceil(hi, self.prec), prec: self.prec }
    }

    /// Exact scaling by an integer.
    pub fn scale_int(&self, k: &BigInt) -> FxIvl {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            FxIvl { lo: b, hi: a, prec: self.prec }
        } else {
            FxIvl { lo: a, hi: b, prec: self.prec }
        }
    }

    /// Directed division by a positive integer.
    pub fn div_uint(&self, n: &BigInt) -> FxIvl {
        debug_assert!(n.is_positive());
        FxIvl { lo: self.lo.div_floor(n), hi: self.hi.div_ceil(n), prec: self.prec }
    }

    /// Outward re-scaling to a (usually lower) precision.
    pub fn with_prec(&self, prec: u32) -> FxIvl {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Less => {
                let s = self.prec - prec;
                FxIvl { lo: shr_floor(&self.lo, s), hi: shr_ceil(&self.hi, s), prec }
            }
            Ordering::Greater => {
                let s = prec - self.prec;
                FxIvl { lo: &self.lo << s, hi: &self.hi << s, prec }
            }
        }
    }

    /// Magnitude upper bound as a mantissa.
    pub fn abs_hi_mant(&self) -> BigInt {
        self.lo.abs().max(self.hi.abs())
    }

    /// Symmetric inflation by `slack * 2^-prec`.
    pub fn inflate_mant(&self, slack: &BigInt) -> FxIvl {
        debug_assert!(!slack.is_negative());
        FxIvl { lo: &self.lo - slack, hi: &self.hi + slack, prec: self.prec }
    }

    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

/// Enclosure of pi at the given precision, cached per precision.
pub fn fx_pi(prec: u32) -> FxIvl {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    {
        let map = cache.lock().unwrap();
        // Any cached enclosure at >= prec bits rounds outward to serve prec.
        if let Some((p, (lo, hi))) = map.range(prec..).next() {
            return FxIvl { lo: lo.clone(), hi: hi.clone(), prec: *p }.with_prec(prec);
        }
    }
    let computed = machin_pi(prec);
    let mut map = cache.lock().unwrap();
    map.insert(prec, (computed.lo.clone(), computed.hi.clone()));
    computed
}

/// Machin's formula `pi = 16 atan(1/5) - 4 atan(1/239)` in fixed point.
fn machin_pi(prec: u32) -> FxIvl {
    let wp = prec + 24;
    let a5 = fx_atan_inv(5, wp);
    let a239 = fx_atan_inv(239, wp);
    a5.scale_int(&BigInt::from(16))
        .sub(&a239.scale_int(&BigInt::from(4)))
        .with_prec(prec)
}

/// `atan(1/x)` for integer `x >= 2` by the alternating Taylor series.
fn fx_atan_inv(x: u32, prec: u32) -> FxIvl {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    // p_k encloses 1/x^(2k+1)
    let mut p = FxIvl::one(prec).div_uint(&x);
    let mut sum = FxIvl::zero(prec);
    let mut k = 0u32;
    loop {
        let term = p.div_uint(&BigInt::from(2 * k + 1));
        sum = if k % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        if term.abs_hi_mant() <= BigInt::from(2) {
            // Alternating, strictly decreasing: tail below first omitted
            // term; slack 4 covers it together with the rounding dust.
            return sum.inflate_mant(&BigInt::from(4));
        }
        p = p.div_uint(&x2);
        k += 1;
    }
}

/// Sine or cosine of an enclosed reduced argument `|r| <= 4`.
pub fn fx_sincos(r: &FxIvl, sine: bool) -> FxIvl {
    debug_assert!(r.abs_hi_mant() <= BigInt::from(5u32) << r.prec, "argument not reduced");
    let r2 = r.mul(r);
    let mut term = if sine { r.clone() } else { FxIvl::one(r.prec) };
    let mut sum = term.clone();
    let mut n: u64 = if sine { 1 } else { 0 };
    loop {
        // next term: t *= -r^2 / ((n+1)(n+2))
        term = term.mul(&r2).div_uint(&BigInt::from((n + 1) * (n + 2)));
        n += 2;
        sum = if (n / 2) % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        if n >= 6 && term.abs_hi_mant() <= BigInt::from(2) {
            // |r|^2 <= 25 (mantissa bound above) so for n >= 6 the term
            // ratio is below 25/56 < 1/2: tail below twice the first
            // omitted term. Slack 8 covers tail plus rounding dust.
            return sum.inflate_mant(&BigInt::from(8));
        }
        assert!(n < 10_000, "fx_sincos failed to converge");
    }
}

/// Sine or cosine of an exact rational point with full argument reduction:
/// returns an enclosure of width about `2^-prec`.
pub fn fx_trig_point(x: &Rat, prec: u32, sine: bool) -> FxIvl {
    let wp = prec + 16;
    let two_pi = fx_pi(wp + 8).with_prec(wp).scale_int(&BigInt::from(2));
    // Nearest-multiple estimate of x / 2pi in exact arithmetic: the f64
    // estimate is checked and corrected below, so it only needs to be close.
    let xf = FxIvl::from_rat(x, wp);
    let mut k: BigInt = {
        let num: BigInt = &xf.lo + &xf.hi;
        let den: BigInt = &two_pi.lo + &two_pi.hi;
        // round(num/den) for den > 0
        (num * 2i32 + &den).div_floor(&(den * 2i32))
    };
    // r = x - k * 2pi, nudging k until the reduced argument is inside the
    // series' convergence window (terminates: each step moves by ~2pi).
    let four = BigInt::from(4u32) << wp;
    let mut r = xf.sub(&two_pi.scale_int(&k));
    loop {
        if r.lo > four {
            k += 1;
        } else if r.hi < -&four {
            k -= 1;
        } else {
            break;
        }
        r = xf.sub(&two_pi.scale_int(&k));
    }
    fx_sincos(&r, sine).with_prec(prec)
}
