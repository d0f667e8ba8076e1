//! Dense integer polynomials with the exact machinery needed for root
//! isolation: Chebyshev expansion, primitive pseudo-remainder sequences,
//! square-free parts, and Sturm chains.
//!
//! Sign bookkeeping in the PRS matters: the pseudo-remainder scales the true
//! remainder by `lc^(delta+1)`, whose sign must be divided back out or the
//! Sturm variation count silently breaks for negative leading coefficients.

use crate::poly::CosinePoly;
use crate::scalar::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Dense polynomial over Z, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree with the usual -1 sentinel for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as u64 + 1))
                .collect(),
        )
    }

    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rat::from(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact sign of `p(x)` at a rational point via the all-integer
    /// homogenization `sum c_i a^i b^(d-i)` for `x = a/b` (`b > 0`), which
    /// avoids the per-step normalization of rational Horner.
    pub fn sign_at(&self, x: &Rat) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let a = x.numer();
        let b = x.denom(); // normalized positive
        let mut acc = self.coeffs.last().unwrap().clone();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev().skip(1) {
            bpow *= b;
            acc = acc * a + c * &bpow;
        }
        acc.cmp(&BigInt::zero())
    }

    /// Content: positive gcd of the coefficients (0 for the zero poly).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient preserved in sign
    /// (divides by the positive content only).
    pub fn primitive(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|v| v / &c).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            out.push(a - b);
        }
        IntPoly::new(out)
    }

    /// Pseudo-remainder: returns `R` with `lc(d)^(deg(self)-deg(d)+1) * self
    /// = Q d + R`, `deg R < deg d`. Panics on zero divisor.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero(), "pseudo_rem by zero");
        let dd = d.degree();
        if self.degree() < dd {
            return self.clone();
        }
        let lc_d = d.lc();
        let mut r = self.clone();
        // Multiply up front so each cancellation step is integral.
        let power = (self.degree() - dd + 1) as u32;
        r = r.scale(&lc_d.clone().pow(power));
        while !r.is_zero() && r.degree() >= dd {
            let shift = (r.degree() - dd) as usize;
            let factor = &r.lc() / &lc_d; // exact by construction
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(d.coeffs.iter().map(|c| c * &factor));
            r = r.sub(&IntPoly::new(sub));
        }
        r
    }

    /// Exact division, panicking if not divisible (internal use only).
    pub fn div_exact(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero());
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut r = self.clone();
        let dd = d.degree();
        let mut q = vec![BigInt::zero(); (self.degree() - dd + 1).max(0) as usize];
        while !r.is_zero() && r.degree() >= dd {
            let shift = (r.degree() - dd) as usize;
            let (factor, rem) = r.lc().div_rem(&d.lc());
            assert!(rem.is_zero(), "div_exact: leading coefficient not divisible");
            q[shift] = factor.clone();
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(d.coeffs.iter().map(|c| c * &factor));
            r = r.sub(&IntPoly::new(sub));
        }
        assert!(r.is_zero(), "div_exact: nonzero remainder");
        IntPoly::new(q)
    }

    /// Polynomial gcd over Z via the primitive PRS, returned primitive with
    /// positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return positive_lc(b);
        }
        if b.is_zero() {
            return positive_lc(a);
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b).primitive();
            if r.is_zero() {
                return positive_lc(b);
            }
            a = b;
            b = r;
        }
    }

    /// Square-free part `self / gcd(self, self')`, primitive.
    pub fn square_free(&self) -> IntPoly {
        if self.degree() <= 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive();
        }
        // primitive(self)/g is exact: g divides primitive(self) over Z
        // (Gauss lemma: both primitive).
        self.primitive().div_exact(&g).primitive()
    }
}

fn positive_lc(p: IntPoly) -> IntPoly {
    if p.lc().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Chebyshev expansion: exact `q` with `p(t) = q(cos t)` for a rational
/// cosine polynomial, scaled by a positive integer to clear denominators
/// (roots and signs are unchanged by the positive scaling).
pub fn chebyshev_form(p: &CosinePoly) -> IntPoly {
    if p.is_zero() {
        return IntPoly::zero();
    }
    let deg = p.degree() as usize;
    // common positive denominator
    let mut den = BigInt::one();
    for a in p.coeffs() {
        den = den.lcm(a.denom());
    }
    let int_coeffs: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|a| a.numer() * (&den / a.denom()))
        .collect();

    // accumulate sum a_n T_n(x) with the three-term recurrence
    let mut acc = vec![BigInt::zero(); deg + 1];
    let mut t_prev = IntPoly::new(vec![BigInt::one()]); // T_0
    let mut t_cur = IntPoly::new(vec![BigInt::zero(), BigInt::one()]); // T_1
    for (n, a) in int_coeffs.iter().enumerate() {
        let t_n = match n {
            0 => &t_prev,
            1 => &t_cur,
            _ => {
                // T_{n} = 2x T_{n-1} - T_{n-2}
                let mut shifted = vec![BigInt::zero()];
                shifted.extend(t_cur.coeffs.iter().map(|c| c * 2));
                let t_next = IntPoly::new(shifted).sub(&t_prev);
                t_prev = std::mem::replace(&mut t_cur, t_next);
                &t_cur
            }
        };
        if !a.is_zero() {
            for (i, c) in t_n.coeffs.iter().enumerate() {
                acc[i] += a * c;
            }
        }
    }
    IntPoly::new(acc)
}

/// Sturm chain of a square-free polynomial: `s0, s1 = s0', s_{k+1} =
/// -true_rem(s_{k-1}, s_k)` up to positive factors, via primitive
/// pseudo-remainders with the sign of `lc^(delta+1)` divided back out.
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(square_free: &IntPoly) -> Self {
        let mut chain = vec![square_free.clone(), square_free.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            if chain[k - 1].degree() == 0 {
                break;
            }
            let prev = &chain[k - 2];
            let cur = &chain[k - 1];
            let delta_plus_1 = (prev.degree() - cur.degree() + 1) as u32;
            let rem = prev.pseudo_rem(cur);
            if rem.is_zero() {
                break;
            }
            // prem = lc(cur)^(delta+1) * true_rem mod positive factors;
            // divide the sign back out, then negate for the Sturm rule.
            let sign_flip = cur.lc().is_negative() && delta_plus_1 % 2 == 1;
            let mut next = rem.primitive().neg();
            if sign_flip {
                next = next.neg();
            }
            chain.push(next);
        }
        Self { chain }
    }

    /// Number of polynomials in the chain.
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Largest coefficient bit-length across the chain (diagnostics).
    pub fn max_coeff_bits(&self) -> u64 {
        self.chain
            .iter()
            .flat_map(|p| p.coeffs.iter())
            .map(|c| c.bits())
            .max()
            .unwrap_or(0)
    }

    /// Sign-variation count at a rational point (zeros skipped).
    pub fn variations_at(&self, x: &Rat) -> usize {
        let mut count = 0;
        let mut last: Option<Ordering> = None;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if let Some(prev) = last {
                if prev != s {
                    count += 1;
                }
            }
            last = Some(s);
        }
        count
    }

    /// Number of distinct roots in the half-open interval `(a, b]`
    /// (standard Sturm count; requires the chain's head square-free).
    pub fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        debug_assert!(a <= b);
        self.variations_at(a) - self.variations_at(b)
    }
}
