//! Coefficient smoothing: multiply a cosine polynomial by the square of a
//! short normalized cosine kernel.
//!
//! The kernel square is nonnegative and vanishes only at isolated points,
//! so the product has exactly the same sign changes as the input while its
//! coefficient profile flattens: deep inside any stretch where the input
//! coefficients repeat with period `P`, the product's coefficients are
//! constant. [`block_form`] exploits that to rewrite the product as a
//! short list of constant-coefficient frequency blocks.

use crate::error::{CoslabError, Result};
use crate::poly::{CosinePoly, LaurentPoly};
use crate::scalar::{rat_int, Rat};
use num_traits::{Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// A cover of the frequency range `[0, N]` of a cosine polynomial by
/// consecutive intervals, each carrying a coefficient sequence that repeats
/// with the common period `P`.
///
/// `patterns[j]` stores the first `min(P, |I_j|)` coefficients of interval
/// `j` — the repeating pattern, which determines every coefficient in the
/// interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPartition {
    p: usize,
    intervals: Vec<(usize, usize)>,
    patterns: Vec<Vec<Rat>>,
}

impl PeriodicPartition {
    /// Builds a partition from explicit interval bounds (inclusive) and
    /// validates it against `g`: the intervals must tile `[0, deg g]` in
    /// order, and inside each interval the coefficients must satisfy
    /// `a_n = a_{n+P}` whenever both indices lie in the interval.
    pub fn from_intervals(
        g: &CosinePoly,
        intervals: Vec<(usize, usize)>,
        p: usize,
    ) -> Result<Self> {
        if p == 0 {
            return Err(CoslabError::InvalidP(0));
        }
        if g.is_zero() {
            return Err(CoslabError::IdenticallyZero);
        }
        let n = g.degree() as usize;
        check_tiling(&intervals, n)?;
        let mut patterns = Vec::with_capacity(intervals.len());
        for &(u, v) in &intervals {
            // pairs (i, i+p) with both ends inside [u, v]; intervals
            // shorter than p+1 have nothing to check
            for i in u..(v + 1).saturating_sub(p) {
                if g.coeff(i) != g.coeff(i + p) {
                    return Err(CoslabError::NotPeriodicOnRange(format!(
                        "a_{i} != a_{} inside interval [{u}, {v}] with period {p}",
                        i + p
                    )));
                }
            }
            let take = p.min(v - u + 1);
            patterns.push((u..u + take).map(|i| g.coeff(i)).collect());
        }
        Ok(Self { p, intervals, patterns })
    }

    /// Rebuilds a partition from raw parts (e.g. deserialized JSON),
    /// validating shape only — interval tiling and pattern lengths — not
    /// agreement with any particular polynomial.
    pub fn from_parts(
        p: usize,
        intervals: Vec<(usize, usize)>,
        patterns: Vec<Vec<Rat>>,
    ) -> Result<Self> {
        if p == 0 {
            return Err(CoslabError::InvalidP(0));
        }
        let n = intervals
            .last()
            .ok_or_else(|| CoslabError::InconsistentPartition("no intervals".into()))?
            .1;
        check_tiling(&intervals, n)?;
        if patterns.len() != intervals.len() {
            return Err(CoslabError::InconsistentPartition(format!(
                "{} intervals but {} patterns",
                intervals.len(),
                patterns.len()
            )));
        }
        for (&(u, v), pat) in intervals.iter().zip(&patterns) {
            if pat.len() != p.min(v - u + 1) {
                return Err(CoslabError::InconsistentPartition(format!(
                    "pattern for [{u}, {v}] has length {}, expected {}",
                    pat.len(),
                    p.min(v - u + 1)
                )));
            }
        }
        Ok(Self { p, intervals, patterns })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of intervals `K`.
    pub fn k(&self) -> usize {
        self.intervals.len()
    }

    /// Inclusive interval bounds, in increasing order.
    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    /// Repeating pattern of each interval.
    pub fn patterns(&self) -> &[Vec<Rat>] {
        &self.patterns
    }

    /// Highest frequency covered, i.e. the degree `N` of the polynomial
    /// the partition describes.
    pub fn max_freq(&self) -> usize {
        self.intervals.last().map_or(0, |&(_, v)| v)
    }

    /// Largest coefficient magnitude across all patterns. Every
    /// coefficient of a conforming polynomial appears in some pattern, so
    /// this is the alphabet bound `M(S)` of the described polynomial.
    pub fn max_abs_coeff(&self) -> Rat {
        self.patterns
            .iter()
            .flatten()
            .map(Rat::abs)
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// The coefficient at frequency `n` implied by the patterns, if `n`
    /// is covered.
    fn implied_coeff(&self, n: usize) -> Option<&Rat> {
        let j = self.intervals.iter().position(|&(u, v)| u <= n && n <= v)?;
        let (u, _) = self.intervals[j];
        let pat = &self.patterns[j];
        Some(&pat[(n - u) % self.p.min(pat.len().max(1))])
    }

    /// Checks that `g`'s coefficients agree with the stored patterns on
    /// the whole covered range.
    pub fn validate_against(&self, g: &CosinePoly) -> Result<()> {
        if g.degree() != self.max_freq() as i64 {
            return Err(CoslabError::InconsistentPartition(format!(
                "polynomial degree {} does not match covered range [0, {}]",
                g.degree(),
                self.max_freq()
            )));
        }
        for n in 0..=self.max_freq() {
            match self.implied_coeff(n) {
                Some(c) if *c == g.coeff(n) => {}
                _ => {
                    return Err(CoslabError::NotPeriodicOnRange(format!(
                        "coefficient a_{n} disagrees with the stored pattern"
                    )))
                }
            }
        }
        Ok(())
    }
}

fn check_tiling(intervals: &[(usize, usize)], n: usize) -> Result<()> {
    if intervals.is_empty() {
        return Err(CoslabError::InconsistentPartition("no intervals".into()));
    }
    let mut expect = 0usize;
    for &(u, v) in intervals {
        if u != expect || v < u {
            return Err(CoslabError::InconsistentPartition(format!(
                "interval [{u}, {v}] breaks the tiling at {expect}"
            )));
        }
        expect = v + 1;
    }
    if expect != n + 1 {
        return Err(CoslabError::InconsistentPartition(format!(
            "intervals cover [0, {}], expected [0, {n}]",
            expect - 1
        )));
    }
    Ok(())
}

impl Serialize for PeriodicPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Pairs<'a>(&'a [Vec<Rat>]);
        impl Serialize for Pairs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for pat in self.0 {
                    let pairs: Vec<(String, String)> = pat
                        .iter()
                        .map(|r| (r.numer().to_string(), r.denom().to_string()))
                        .collect();
                    seq.serialize_element(&pairs)?;
                }
                seq.end()
            }
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("P", &self.p)?;
        m.serialize_entry("intervals", &self.intervals)?;
        m.serialize_entry("patterns", &Pairs(&self.patterns))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for PeriodicPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "P")]
            p: usize,
            intervals: Vec<(usize, usize)>,
            patterns: Vec<Vec<(String, String)>>,
        }
        let raw = Raw::deserialize(d)?;
        let patterns = raw
            .patterns
            .into_iter()
            .map(|pat| {
                pat.into_iter()
                    .map(|(n, den)| {
                        let n: num_bigint::BigInt =
                            n.parse().map_err(|_| D::Error::custom("bad numerator"))?;
                        let den: num_bigint::BigInt =
                            den.parse().map_err(|_| D::Error::custom("bad denominator"))?;
                        if den.is_zero() {
                            return Err(D::Error::custom("zero denominator"));
                        }
                        Ok(Rat::new(n, den))
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        PeriodicPartition::from_parts(raw.p, raw.intervals, patterns)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The square of the normalized kernel `(2/P) * sum_{n=0}^{P-1} cos(n t)`,
/// as exact Laurent coefficients.
///
/// Closed form, validated in debug builds (and by tests) against direct
/// self-convolution of the kernel:
///
/// - frequency `0`: `(2P + 2) / P^2`,
/// - `1 <= |m| <= P-1`: `(2P + 1 - |m|) / P^2`,
/// - `P <= |m| <= 2P-2`: `(2P - 1 - |m|) / P^2`.
///
/// The value at `t = 0` is `4` for every `P`; for `P = 1` the square is
/// the constant `4`.
pub fn fejer_square_kernel(p: usize) -> Result<LaurentPoly> {
    if p == 0 {
        return Err(CoslabError::InvalidP(0));
    }
    let pi = p as i64;
    let p2 = rat_int(pi * pi);
    let mut coeffs = BTreeMap::new();
    coeffs.insert(0i64, rat_int(2 * pi + 2) / &p2);
    for m in 1..=(2 * pi - 2) {
        let num = if m <= pi - 1 { 2 * pi + 1 - m } else { 2 * pi - 1 - m };
        if num == 0 {
            continue;
        }
        let c = rat_int(num) / &p2;
        coeffs.insert(m, c.clone());
        coeffs.insert(-m, c);
    }
    let k = LaurentPoly::new(coeffs);
    debug_assert_eq!(
        k,
        {
            let base = CosinePoly::from_ints(&vec![1; p]).to_laurent().scale(&(rat_int(2) / rat_int(pi)));
            base.multiply(&base)
        },
        "closed form disagrees with direct self-convolution"
    );
    Ok(k)
}

/// The smoothed polynomial: `g` multiplied by [`fejer_square_kernel`]`(P)`.
///
/// Exact product. Its value at `0` is `4 g(0)`; its degree is at most
/// `deg g + 2P - 2`; for integer-coefficient `g` every coefficient lies in
/// `P^{-2} Z`, with magnitude at most `(4 + 2/P) max |a_n|` (the classical
/// `4 max |a_n|` holds for frequencies `>= 2P - 1`; below that, the
/// doubled weight of the constant term can add up to `2 max |a_n| / P`).
pub fn build_tilde(g: &CosinePoly, p: usize) -> Result<CosinePoly> {
    let kernel = fejer_square_kernel(p)?;
    g.to_laurent().multiply(&kernel).to_cosine()
}

/// One constant-coefficient block: frequencies `lo..=hi` all carry
/// cosine coefficient `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub lo: usize,
    pub hi: usize,
    pub c: Rat,
}

impl Block {
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A smoothed polynomial rewritten as constant-coefficient frequency
/// blocks partitioning `[0, N + 2P - 2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    pub p: usize,
    /// Ordered, disjoint, covering blocks.
    pub blocks: Vec<Block>,
    /// `4 M(S)` where `M(S)` is the alphabet bound of the *unsmoothed*
    /// polynomial: the magnitude bound each block constant satisfies for
    /// frequencies `>= 2P - 1` (and exceeds by at most `2 M(S)/P` below).
    pub m_bound: Rat,
}

impl BlockForm {
    /// Number of blocks.
    pub fn k_tilde(&self) -> usize {
        self.blocks.len()
    }

    /// Expands the blocks back into a dense cosine polynomial.
    pub fn to_poly(&self) -> CosinePoly {
        let n = self.blocks.last().map_or(0, |b| b.hi);
        let mut coeffs = vec![Rat::zero(); n + 1];
        for b in &self.blocks {
            for c in coeffs.iter_mut().take(b.hi + 1).skip(b.lo) {
                *c = b.c.clone();
            }
        }
        CosinePoly::new(coeffs)
    }

    /// `sum_j c_j |J_j|`, i.e. the represented polynomial's value at `0`.
    pub fn value_at_zero(&self) -> Rat {
        self.blocks
            .iter()
            .map(|b| &b.c * rat_int(b.len() as i64))
            .sum()
    }

    /// Exact maximum block-constant magnitude.
    pub fn c_max(&self) -> Rat {
        self.blocks.iter().map(|b| b.c.abs()).max().unwrap_or_else(Rat::zero)
    }
}

impl Serialize for BlockForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct B<'a>(&'a Block);
        impl Serialize for B<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("lo", &self.0.lo)?;
                m.serialize_entry("hi", &self.0.hi)?;
                m.serialize_entry(
                    "c",
                    &(self.0.c.numer().to_string(), self.0.c.denom().to_string()),
                )?;
                m.end()
            }
        }
        struct Bs<'a>(&'a [Block]);
        impl Serialize for Bs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for b in self.0 {
                    seq.serialize_element(&B(b))?;
                }
                seq.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("P", &self.p)?;
        m.serialize_entry("blocks", &Bs(&self.blocks))?;
        m.end()
    }
}

/// Rewrites the smoothed polynomial `gt = `[`build_tilde`]`(g, P)` as a
/// [`BlockForm`], given the periodic partition of the original `g`.
///
/// Each partition interval `[u, v]` contributes one long block over the
/// shrunken range `[u + 2P, v - 2P]` — where the smoothing provably makes
/// the coefficients constant — plus unit blocks for the remaining
/// (transitional) frequencies. Intervals too short for a nonempty
/// shrunken range are emitted entirely as unit blocks. The block count
/// satisfies `K_tilde <= 5 P (K + 1)`.
///
/// Fails with `InconsistentPartition` when `gt`'s coefficients are not
/// actually constant across a claimed long block (i.e. the partition does
/// not describe the polynomial `gt` was built from), or when `gt`'s degree
/// exceeds the range the partition can explain.
pub fn block_form(gt: &CosinePoly, partition: &PeriodicPartition) -> Result<BlockForm> {
    let p = partition.p();
    let n = partition.max_freq();
    let range_hi = n + 2 * p - 2;
    if gt.degree() > range_hi as i64 {
        return Err(CoslabError::InconsistentPartition(format!(
            "degree {} exceeds the covered frequency range [0, {range_hi}]",
            gt.degree()
        )));
    }

    // Long blocks: shrunken interval cores, constant coefficient verified.
    let mut long: Vec<Block> = Vec::new();
    for &(u, v) in partition.intervals() {
        let lo = u + 2 * p;
        if v < 2 * p || v - 2 * p < lo {
            continue; // interval too short: all unit blocks
        }
        let hi = v - 2 * p;
        let c = gt.coeff(lo);
        for i in lo + 1..=hi {
            if gt.coeff(i) != c {
                return Err(CoslabError::InconsistentPartition(format!(
                    "coefficient at {i} differs inside claimed constant block [{lo}, {hi}]"
                )));
            }
        }
        long.push(Block { lo, hi, c });
    }

    let mut blocks = Vec::new();
    let mut next_long = long.into_iter().peekable();
    let mut f = 0usize;
    while f <= range_hi {
        if let Some(b) = next_long.peek() {
            if b.lo == f {
                f = b.hi + 1;
                blocks.push(next_long.next().unwrap());
                continue;
            }
        }
        blocks.push(Block { lo: f, hi: f, c: gt.coeff(f) });
        f += 1;
    }
    debug_assert!(blocks.len() <= 5 * p * (partition.k() + 1), "block-count bound violated");

    Ok(BlockForm {
        p,
        blocks,
        m_bound: rat_int(4) * partition.max_abs_coeff(),
    })
}
