//! Exact cyclotomic polynomials and arithmetic in the fields `ℚ(ζ_m)`,
//! represented as `ℚ[z]` modulo the m-th cyclotomic polynomial.
//!
//! Dense `ℚ[z]` polynomials are vectors of rationals in ascending degree
//! order with no trailing zeros. Everything here is exact: no floating
//! point enters root-of-unity detection or field arithmetic.

use crate::scalar::{rat_int, Rat};
use num_traits::Zero;

/// Drops trailing zero coefficients in place and returns the vector.
pub(crate) fn poly_trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub(crate) fn poly_deg(v: &[Rat]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

/// Exact product of two dense polynomials.
pub(crate) fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(out)
}

/// Exact Euclidean division: `num = q * den + r` with `deg r < deg den`.
/// Panics if `den` is zero.
pub(crate) fn poly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!den.is_empty(), "division by the zero polynomial");
    let dd = den.len() - 1;
    let lead = den.last().unwrap();
    let mut rem: Vec<Rat> = num.to_vec();
    if rem.len() <= dd {
        return (Vec::new(), poly_trim(rem));
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = rem.last().unwrap() / lead;
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                let t = &c * dj;
                rem[k + j] -= t;
            }
            quot[k] = c;
        }
        // the leading term is now exactly zero
        rem.pop();
        while rem.last().is_some_and(|v| v.is_zero()) {
            rem.pop();
        }
        if rem.len() <= dd {
            break;
        }
    }
    (poly_trim(quot), rem)
}

/// Whether `den` divides `num` exactly over `ℚ[z]`.
pub fn poly_divides(den: &[Rat], num: &[Rat]) -> bool {
    if num.is_empty() {
        return true;
    }
    if den.is_empty() {
        return false;
    }
    poly_divrem(num, den).1.is_empty()
}

/// `z^m - 1` as a dense polynomial.
fn z_pow_minus_one(m: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); m + 1];
    v[0] = rat_int(-1);
    v[m] = rat_int(1);
    v
}

/// The m-th cyclotomic polynomial `Φ_m`, exactly:
/// `Φ_m = (z^m - 1) / ∏_{d | m, d < m} Φ_d`, built bottom-up over the
/// divisors so no recursion is needed.
pub fn cyclotomic(m: usize) -> Vec<Rat> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut cache: Vec<(usize, Vec<Rat>)> = Vec::new();
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        let mut denom = vec![rat_int(1)];
        for (e, phi) in &cache {
            if d % e == 0 {
                denom = poly_mul(&denom, phi);
            }
        }
        let (q, r) = poly_divrem(&z_pow_minus_one(d), &denom);
        debug_assert!(r.is_empty(), "cyclotomic division must be exact");
        cache.push((d, q));
    }
    cache.pop().unwrap().1
}

/// Euler's totient, the degree of `Φ_m`.
pub fn totient(m: usize) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// An element of `ℚ(ζ_m) = ℚ[z] / Φ_m(z)`, stored as the canonical
/// representative of degree `< φ(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloElem {
    m: usize,
    c: Vec<Rat>,
}

impl CycloElem {
    /// Reduces an arbitrary polynomial modulo `Φ_m`.
    pub fn new(m: usize, poly: Vec<Rat>) -> Self {
        assert!(m >= 1);
        let phi = cyclotomic(m);
        let p = poly_trim(poly);
        let c = if poly_deg(&p).map_or(true, |d| d < phi.len() - 1) {
            p
        } else {
            poly_divrem(&p, &phi).1
        };
        Self { m, c }
    }

    pub fn zero(m: usize) -> Self {
        Self { m, c: Vec::new() }
    }

    pub fn from_rat(m: usize, q: Rat) -> Self {
        Self::new(m, vec![q])
    }

    /// `ζ_m^k` for any integer exponent (reduced mod m first).
    pub fn zeta_pow(m: usize, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut v = vec![Rat::zero(); e + 1];
        v[e] = rat_int(1);
        Self::new(m, v)
    }

    pub fn modulus(&self) -> usize {
        self.m
    }

    /// Canonical coefficients (ascending powers of `ζ_m`, degree `< φ(m)`).
    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// The element as a plain rational, when it lies in `ℚ`.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.c.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.m, rhs.m, "mixed cyclotomic moduli");
        let n = self.c.len().max(rhs.c.len());
        let mut v = vec![Rat::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            v[i] += a;
        }
        for (i, b) in rhs.c.iter().enumerate() {
            v[i] += b;
        }
        CycloElem { m: self.m, c: poly_trim(v) }
    }

    pub fn sub(&self, rhs: &CycloElem) -> CycloElem {
        self.add(&rhs.scale(&rat_int(-1)))
    }

    pub fn scale(&self, q: &Rat) -> CycloElem {
        if q.is_zero() {
            return CycloElem::zero(self.m);
        }
        CycloElem {
            m: self.m,
            c: self.c.iter().map(|a| a * q).collect(),
        }
    }

    pub fn mul(&self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.m, rhs.m, "mixed cyclotomic moduli");
        CycloElem::new(self.m, poly_mul(&self.c, &rhs.c))
    }

    /// Multiplies by `ζ_m^k`.
    pub fn mul_zeta_pow(&self, k: i64) -> CycloElem {
        self.mul(&CycloElem::zeta_pow(self.m, k))
    }

    /// Multiplicative order when the element is `ζ_m^k` for some k;
    /// `None` otherwise.
    pub fn root_of_unity_order(&self) -> Option<usize> {
        for k in 0..self.m as i64 {
            if *self == CycloElem::zeta_pow(self.m, k) {
                let g = gcd(k.unsigned_abs() as usize, self.m);
                return Some(self.m / g);
            }
        }
        None
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Evaluates a dense `ℚ[z]` polynomial at `ζ_m^k`, exactly (Horner).
pub fn eval_at_zeta(poly: &[Rat], m: usize, k: i64) -> CycloElem {
    let mut acc = CycloElem::zero(m);
    for c in poly.iter().rev() {
        acc = acc.mul_zeta_pow(k).add(&CycloElem::from_rat(m, c.clone()));
    }
    acc
}
