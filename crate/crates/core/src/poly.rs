//! Core polynomial types: cosine polynomials with exact rational
//! coefficients, their Laurent (exponential-basis) form, and finite
//! coefficient sets.
//!
//! Conventions used across the crate:
//! - `CosinePoly` stores `a_0..a_N` for `p(t) = sum a_n cos(n t)`, trailing
//!   zeros stripped; the zero polynomial has an empty vector and degree -1.
//! - `to_laurent` maps to Fourier coefficients: `c(0) = a_0`,
//!   `c(n) = c(-n) = a_n / 2` for `n >= 1`.
//! - A period of the variable is `[0, 2pi)`; the rescaled variable used in
//!   integral reports is `x = t / 2pi`.

use crate::error::{CoslabError, Result};
use crate::scalar::{rat_vec_serde, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosinePoly {
    #[serde(with = "rat_vec_serde")]
    coeffs: Vec<Rat>,
}

impl CosinePoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::scalar::rat_int(c)).collect())
    }

    /// `f_A = sum_{n in A} cos(n t)` for a finite frequency set.
    pub fn from_freq_set(set: &[u32]) -> Self {
        let uniq: BTreeSet<u32> = set.iter().copied().collect();
        let deg = uniq.iter().next_back().map_or(0, |&n| n as usize);
        let mut coeffs = vec![Rat::zero(); deg + 1];
        for &n in &uniq {
            coeffs[n as usize] = crate::scalar::rat_int(1);
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rat {
        self.coeffs.get(n).cloned().unwrap_or_else(Rat::zero)
    }

    /// Degree, with -1 as the zero-polynomial sentinel.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact value at t = 0: the coefficient sum.
    pub fn value_at_zero(&self) -> Rat {
        self.coeffs.iter().sum()
    }

    /// Exact value at t = pi: the alternating coefficient sum.
    pub fn value_at_pi(&self) -> Rat {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| if n % 2 == 0 { a.clone() } else { -a.clone() })
            .sum()
    }

    /// Coefficients of the reflection `p(pi - s)` as a cosine polynomial in
    /// `s` (exact: `cos(n(pi - s)) = (-1)^n cos(n s)`).
    pub fn reflect_at_pi(&self) -> CosinePoly {
        CosinePoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| if n % 2 == 0 { a.clone() } else { -a.clone() })
                .collect(),
        )
    }

    /// Exact bound `sum |a_n| >= sup |p|`.
    pub fn sup_bound(&self) -> Rat {
        self.coeffs.iter().map(Rat::abs).sum()
    }

    /// Exact bound `sum n |a_n| >= sup |p'|`.
    pub fn deriv_bound(&self) -> Rat {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.abs() * crate::scalar::rat_int(n as i64))
            .sum()
    }

    /// Exact bound `sum n^2 |a_n| >= sup |p''|`.
    pub fn deriv2_bound(&self) -> Rat {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.abs() * crate::scalar::rat_int((n * n) as i64))
            .sum()
    }

    /// Exact bound `sum n^3 |a_n| >= sup |p'''|`.
    pub fn deriv3_bound(&self) -> Rat {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.abs() * crate::scalar::rat_int((n * n * n) as i64))
            .sum()
    }

    pub fn max_abs_coeff(&self) -> Rat {
        self.coeffs.iter().map(Rat::abs).max().unwrap_or_else(Rat::zero)
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        let mut m = BTreeMap::new();
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if n == 0 {
                m.insert(0i64, a.clone());
            } else {
                let half = a / crate::scalar::rat_int(2);
                m.insert(n as i64, half.clone());
                m.insert(-(n as i64), half);
            }
        }
        LaurentPoly { coeffs: m }
    }

    /// Certified evaluation at an f64 point (interpreted exactly) with
    /// absolute error at most `tol` when achievable.
    pub fn evaluate(&self, t: f64, tol: f64) -> Result<crate::ceval::CertValue> {
        crate::ceval::eval_certified(self, t, tol)
    }
}

/// Finite-spectrum Laurent polynomial `sum c_m z^m` over exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn new(coeffs: BTreeMap<i64, Rat>) -> Self {
        let mut coeffs = coeffs;
        coeffs.retain(|_, v| !v.is_zero());
        Self { coeffs }
    }

    pub fn coeff(&self, m: i64) -> Rat {
        self.coeffs.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Rat> {
        &self.coeffs
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Exact convolution product.
    pub fn multiply(&self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out: BTreeMap<i64, Rat> = BTreeMap::new();
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &rhs.coeffs {
                let k = m1 + m2;
                let prod = c1 * c2;
                out.entry(k)
                    .and_modify(|v| *v += &prod)
                    .or_insert(prod.clone());
            }
        }
        LaurentPoly::new(out)
    }

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.coeffs.clone();
        for (m, c) in &rhs.coeffs {
            out.entry(*m).and_modify(|v| *v += c).or_insert_with(|| c.clone());
        }
        LaurentPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        LaurentPoly::new(self.coeffs.iter().map(|(m, v)| (*m, v * c)).collect())
    }

    /// Back to cosine form; requires an even spectrum (`c(m) = c(-m)`).
    pub fn to_cosine(&self) -> Result<CosinePoly> {
        let deg = self.max_deg().unwrap_or(0).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); deg + 1];
        for (&m, c) in &self.coeffs {
            let neg = self.coeff(-m);
            if &neg != c {
                return Err(CoslabError::InvalidInput(format!(
                    "spectrum not even at frequency {m}: {c} vs {neg}"
                )));
            }
            if m == 0 {
                coeffs[0] = c.clone();
            } else if m > 0 {
                coeffs[m as usize] = c * crate::scalar::rat_int(2);
            }
        }
        Ok(CosinePoly::new(coeffs))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for (m, c) in &self.coeffs {
            seq.serialize_element(&(m, [c.numer().to_string(), c.denom().to_string()]))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let raw = Vec::<(i64, [String; 2])>::deserialize(d)?;
        let mut m = BTreeMap::new();
        for (k, [num, den]) in raw {
            let num: BigInt = num.parse().map_err(DeError::custom)?;
            let den: BigInt = den.parse().map_err(DeError::custom)?;
            if den.is_zero() {
                return Err(DeError::custom("zero denominator"));
            }
            m.insert(k, Rat::new(num, den));
        }
        Ok(LaurentPoly::new(m))
    }
}

/// Finite set of integer coefficient values with its max-modulus statistic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffSet {
    values: BTreeSet<i64>,
}

impl CoeffSet {
    pub fn new(values: impl IntoIterator<Item = i64>) -> Self {
        Self { values: values.into_iter().collect() }
    }

    /// Observed coefficient set of an integer-coefficient polynomial.
    pub fn from_poly(p: &CosinePoly) -> Result<Self> {
        let mut values = BTreeSet::new();
        for a in p.coeffs() {
            if !a.is_integer() {
                return Err(CoslabError::InvalidInput(format!(
                    "non-integer coefficient {a} has no integer coefficient set"
                )));
            }
            let v: i64 = a.to_integer().try_into().map_err(|_| {
                CoslabError::InvalidInput("coefficient too large for i64 set".into())
            })?;
            values.insert(v);
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &BTreeSet<i64> {
        &self.values
    }

    /// `M(S)`: maximum absolute value over the set (0 for the empty set).
    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn contains(&self, v: i64) -> bool {
        self.values.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn li(pairs: &[(i64, Rat)]) -> LaurentPoly {
        LaurentPoly::new(pairs.iter().cloned().collect())
    }

    #[test]
    fn normalization_and_degree_sentinel() {
        let p = CosinePoly::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(p.degree(), 0);
        let z = CosinePoly::new(vec![rat_int(0), rat_int(0)]);
        assert_eq!(z.degree(), -1);
        assert!(z.is_zero());
    }

    #[test]
    fn laurent_round_trip_preserves_coefficients() {
        let p = CosinePoly::new(vec![rat_int(3), rat(1, 2), rat_int(0), rat(-7, 3)]);
        let l = p.to_laurent();
        assert_eq!(l.coeff(0), rat_int(3));
        assert_eq!(l.coeff(1), rat(1, 4));
        assert_eq!(l.coeff(-1), rat(1, 4));
        assert_eq!(l.coeff(3), rat(-7, 6));
        assert_eq!(l.to_cosine().unwrap(), p);
    }

    #[test]
    fn multiply_matches_schoolbook_oracle() {
        // Oracle: dense double loop over vectors indexed by offset.
        let a = li(&[(-2, rat_int(1)), (0, rat(1, 2)), (3, rat_int(-4))]);
        let b = li(&[(-1, rat_int(2)), (2, rat(5, 3))]);
        let prod = a.multiply(&b);
        let mut dense = BTreeMap::new();
        for (m1, c1) in a.coeffs() {
            for (m2, c2) in b.coeffs() {
                *dense.entry(m1 + m2).or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        for (m, c) in dense {
            assert_eq!(prod.coeff(m), c);
        }
        // commutativity
        assert_eq!(prod, b.multiply(&a));
    }

    #[test]
    fn multiply_cosine_identity() {
        // cos a cos b = (cos(a+b) + cos(a-b))/2, checked through the Laurent
        // route: cos t * cos t = 1/2 + cos(2t)/2.
        let p = CosinePoly::from_ints(&[0, 1]);
        let sq = p.to_laurent().multiply(&p.to_laurent()).to_cosine().unwrap();
        assert_eq!(sq, CosinePoly::new(vec![rat(1, 2), rat_int(0), rat(1, 2)]));
    }

    #[test]
    fn exact_endpoint_values() {
        let p = CosinePoly::from_ints(&[2, -1, 5]);
        assert_eq!(p.value_at_zero(), rat_int(6));
        assert_eq!(p.value_at_pi(), rat_int(8));
        let r = p.reflect_at_pi();
        assert_eq!(r.value_at_zero(), rat_int(8));
    }

    #[test]
    fn freq_set_construction() {
        let p = CosinePoly::from_freq_set(&[0, 1, 5, 5]);
        assert_eq!(p.degree(), 5);
        assert_eq!(p.coeff(0), rat_int(1));
        assert_eq!(p.coeff(5), rat_int(1));
        assert_eq!(p.coeff(2), rat_int(0));
    }

    #[test]
    fn coeff_set_stats() {
        let p = CosinePoly::from_ints(&[0, 1, -3, 1]);
        let s = CoeffSet::from_poly(&p).unwrap();
        assert_eq!(s.max_abs(), 3);
        assert_eq!(s.len(), 3); // {0, 1, -3}
        assert!(CoeffSet::from_poly(&CosinePoly::new(vec![rat(1, 2)])).is_err());
    }

    #[test]
    fn poly_json_shape() {
        let p = CosinePoly::new(vec![rat_int(1), rat(-1, 2)]);
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"coeffs":[["1","1"],["-1","2"]]}"#);
        let back: CosinePoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
