//! Exact rational interval arithmetic.
//!
//! Every enclosure here is proved by construction: endpoints are exact
//! rationals, outward rounding is explicit, and series truncations carry
//! remainder bounds from alternating-series or geometric-tail arguments.

use crate::scalar::{dyadic, rat_int, Rat};
use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Self { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `Some(sign)` when the interval has one; `None` if it straddles zero.
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

    pub fn add(&self, rhs: &Self) -> Self {
        Self { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }

    pub fn neg(&self) -> Self {
        Self { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let cands = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        Self { lo, hi }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_negative() {
            Self { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Self { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    /// Widens by `r >= 0` on both sides.
    pub fn inflate(&self, r: &Rat) -> Self {
        debug_assert!(!r.is_negative());
        Self { lo: &self.lo - r, hi: &self.hi + r }
    }

    pub fn abs_upper(&self) -> Rat {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Outward rounding to denominators `2^bits`: keeps later arithmetic
    /// cheap without ever shrinking the enclosure.
    pub fn round_out(&self, bits: u32) -> Self {
        Self { lo: round_dyadic_down(&self.lo, bits), hi: round_dyadic_up(&self.hi, bits) }
    }
}

pub fn round_dyadic_down(x: &Rat, bits: u32) -> Rat {
    let scaled = x * Rat::from_integer(BigInt::one() << bits);
    dyadic(scaled.floor().to_integer(), bits as i64)
}

pub fn round_dyadic_up(x: &Rat, bits: u32) -> Rat {
    let scaled = x * Rat::from_integer(BigInt::one() << bits);
    dyadic(scaled.ceil().to_integer(), bits as i64)
}

/// arctan(1/m) as an interval, truncating the alternating series after
/// enough terms that the first omitted term is below `2^-bits`.
fn atan_inv_interval(m: i64, bits: u32) -> RatInterval {
    let m2 = BigInt::from(m) * BigInt::from(m);
    let mut term = Rat::new(BigInt::one(), BigInt::from(m));
    let mut k = 0u32;
    let mut sum = Rat::zero();
    let cutoff = dyadic(BigInt::one(), bits as i64);
    loop {
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        // next term: 1 / ((2k+3) m^{2k+3}); alternating and decreasing.
        let prev_denomless = &term * Rat::from_integer(BigInt::from(2 * k as i64 + 1));
        term = prev_denomless / Rat::from_integer(&m2 * BigInt::from(2 * k as i64 + 3));
        k += 1;
        if term < cutoff {
            break;
        }
    }
    // Partial sums of an alternating decreasing series bracket the limit.
    if k % 2 == 1 {
        RatInterval::new(&sum - &term, sum)
    } else {
        RatInterval::new(sum.clone(), sum + term)
    }
}

/// pi via Machin: pi = 16 atan(1/5) - 4 atan(1/239), certified interval.
pub fn pi_interval(bits: u32) -> RatInterval {
    let a = atan_inv_interval(5, bits + 8).scale(&rat_int(16));
    let b = atan_inv_interval(239, bits + 8).scale(&rat_int(4));
    a.sub(&b).round_out(bits + 4)
}

const PI_BITS: u32 = 320;

pub fn pi_cached() -> &'static RatInterval {
    static PI: OnceLock<RatInterval> = OnceLock::new();
    PI.get_or_init(|| pi_interval(PI_BITS))
}

pub fn two_pi_cached() -> &'static RatInterval {
    static TWO_PI: OnceLock<RatInterval> = OnceLock::new();
    TWO_PI.get_or_init(|| pi_cached().scale(&rat_int(2)))
}

/// Dyadic `(lo, hi)` with `lo < pi < hi` and `hi - lo <= 2^-bits` (requires
/// `bits` comfortably below the cached precision).
pub fn pi_dyadic(bits: u32) -> (Rat, Rat) {
    assert!(bits <= PI_BITS - 16, "pi cache too coarse for request");
    let p = pi_cached().round_out(bits + 2);
    (p.lo, p.hi)
}

pub fn two_pi_dyadic(bits: u32) -> (Rat, Rat) {
    assert!(bits <= PI_BITS - 16);
    let p = two_pi_cached().round_out(bits + 2);
    (p.lo, p.hi)
}

/// cos over a rational interval argument, outward-rounded to `bits`.
///
/// Strategy: reduce the midpoint modulo 2*pi into [-4, 4] using the cached
/// pi enclosure, run the Taylor series with an alternating-tail remainder,
/// then widen by the argument half-width (|cos'| <= 1).
pub fn cos_interval(t: &RatInterval, bits: u32) -> RatInterval {
    trig_interval(t, bits, false)
}

pub fn sin_interval(t: &RatInterval, bits: u32) -> RatInterval {
    trig_interval(t, bits, true)
}

fn trig_interval(t: &RatInterval, bits: u32, sine: bool) -> RatInterval {
    let mid = t.midpoint();
    let half_width = t.width() / rat_int(2);
    let core = trig_point(&mid, bits + 4, sine);
    // Lipschitz constant 1 for both sin and cos.
    let mut out = core.inflate(&half_width).round_out(bits);
    clamp_unit(&mut out);
    out
}

fn clamp_unit(v: &mut RatInterval) {
    let one = rat_int(1);
    let neg_one = rat_int(-1);
    if v.lo < neg_one {
        v.lo = neg_one;
    }
    if v.hi > one {
        v.hi = one;
    }
}

fn trig_point(x: &Rat, bits: u32, sine: bool) -> RatInterval {
    // Fixed-point kernel: argument reduction and the Taylor series run on
    // integer mantissas (see `fixed`), avoiding per-operation rational
    // normalization in this extremely hot path.
    let mut out = crate::fixed::fx_trig_point(x, bits + 4, sine)
        .to_rat_interval()
        .round_out(bits);
    clamp_unit(&mut out);
    out
}
