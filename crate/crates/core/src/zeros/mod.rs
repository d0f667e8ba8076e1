//! Rigorous zero counting and sign-change localization for cosine
//! polynomials on the period.
//!
//! Conventions (documented for all consumers):
//! - `Z` counts *distinct* zeros in the half-open period `[0, 2pi)`, so
//!   `t = 0` and `t = 2pi` are one zero.
//! - `d` counts sign changes in the open interval `(0, pi)`.
//! - Endpoint zeros at `t = 0` or `t = pi` contribute to `Z`, never to `d`
//!   (an even function cannot change sign at `0` or `pi`).
//! - Even-multiplicity touch zeros contribute to `Z` but not to `d`.
//!
//! Two engines: `count_zeros` substitutes `x = cos t` and isolates roots of
//! the resulting algebraic polynomial with exact integer arithmetic (total
//! and exact, intended for moderate degree); `sign_change_points` adds a
//! certified subdivision engine that scales to large degree but reports only
//! sign changes.

pub mod intpoly;
pub mod scan;

use crate::error::{CoslabError, Result};
use crate::interval::{cos_interval, pi_interval, RatInterval};
use crate::poly::CosinePoly;
use crate::scalar::{decimal_string, parse_decimal, rat_int, Rat};
use intpoly::{chebyshev_form, IntPoly, SturmChain};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;

/// Exact-engine degree guard: Sturm sequences on the Chebyshev form are
/// exact but their coefficient growth makes very large degrees impractical;
/// beyond this use [`sign_change_points`].
pub const MAX_ALGEBRAIC_DEGREE: i64 = 192;

/// Default isolating-interval width for reports: 2^-40.
pub fn default_report_width() -> Rat {
    crate::scalar::dyadic(BigInt::one(), 40)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroReport {
    /// Distinct zeros in `[0, 2pi)`.
    pub z: u64,
    /// Sign changes in `(0, pi)`.
    pub d: u64,
    /// Pairwise-disjoint isolating intervals, one per distinct zero,
    /// ascending in `[0, 2pi)`; exact rational (dyadic) endpoints.
    pub zeros: Vec<(Rat, Rat)>,
    /// Isolating intervals of the sign changes, ascending in `(0, pi)`.
    pub sign_changes: Vec<(Rat, Rat)>,
}

impl Serialize for ZeroReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let dec = |v: &[(Rat, Rat)]| -> Vec<[String; 2]> {
            v.iter().map(|(a, b)| [decimal_string(a), decimal_string(b)]).collect()
        };
        let mut st = s.serialize_struct("ZeroReport", 4)?;
        st.serialize_field("Z", &self.z)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("zeros", &dec(&self.zeros))?;
        st.serialize_field("sign_changes", &dec(&self.sign_changes))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ZeroReport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "Z")]
            z: u64,
            d: u64,
            zeros: Vec<[String; 2]>,
            sign_changes: Vec<[String; 2]>,
        }
        let raw = Raw::deserialize(d)?;
        let parse = |v: Vec<[String; 2]>| -> std::result::Result<Vec<(Rat, Rat)>, D::Error> {
            v.into_iter()
                .map(|[a, b]| {
                    let bad = || D::Error::custom("invalid decimal endpoint");
                    Ok((
                        parse_decimal(&a).ok_or_else(bad)?,
                        parse_decimal(&b).ok_or_else(bad)?,
                    ))
                })
                .collect()
        };
        Ok(ZeroReport {
            z: raw.z,
            d: raw.d,
            zeros: parse(raw.zeros)?,
            sign_changes: parse(raw.sign_changes)?,
        })
    }
}

/// One isolated interior root of the Chebyshev form, as a bracket in
/// `(-1, 1)` whose endpoints are certified non-roots with opposite signs of
/// the square-free part.
#[derive(Clone, Debug)]
struct Bracket {
    lo: Rat,
    hi: Rat,
    /// Set when the root is an exactly known rational.
    exact: Option<Rat>,
    /// Original polynomial changes sign across this root (odd multiplicity).
    odd: bool,
}

/// Exact zero counting via the `x = cos t` substitution.
///
/// Exact for any input, practical for degree up to a few hundred; errors
/// with `IdenticallyZero` for the zero polynomial and suggests the scan
/// engine beyond [`MAX_ALGEBRAIC_DEGREE`].
pub fn count_zeros(p: &CosinePoly) -> Result<ZeroReport> {
    count_zeros_width(p, &default_report_width())
}

/// [`count_zeros`] with a caller-chosen maximum interval width.
pub fn count_zeros_width(p: &CosinePoly, width: &Rat) -> Result<ZeroReport> {
    if p.is_zero() {
        return Err(CoslabError::IdenticallyZero);
    }
    if p.degree() > MAX_ALGEBRAIC_DEGREE {
        return Err(CoslabError::InvalidInput(format!(
            "degree {} exceeds the exact-engine guard {}; use sign_change_points",
            p.degree(),
            MAX_ALGEBRAIC_DEGREE
        )));
    }
    if !width.is_positive() {
        return Err(CoslabError::InvalidInput("width must be positive".into()));
    }
    let q = chebyshev_form(p);
    let zero_at_0 = p.value_at_zero().is_zero();
    let zero_at_pi = p.value_at_pi().is_zero();

    let mut s = q.square_free();
    // Deflate endpoint roots so the interior isolation sees (-1, 1) only.
    if zero_at_0 {
        s = s.div_exact(&IntPoly::new(vec![BigInt::from(-1), BigInt::one()]));
    }
    if zero_at_pi {
        s = s.div_exact(&IntPoly::new(vec![BigInt::one(), BigInt::one()]));
    }

    let mut brackets = isolate_interior_roots(&s, &q);

    // Refine in x far enough that the arccos images are comfortably inside
    // (0, pi) and below the requested width, then map.
    let mut t_intervals: Vec<(Rat, Rat, bool)> = Vec::new();
    for b in brackets.iter_mut() {
        let (t_lo, t_hi) = map_bracket(b, &s, width)?;
        t_intervals.push((t_lo, t_hi, b.odd));
    }
    t_intervals.sort_by(|a, b| a.0.cmp(&b.0));

    // Assemble the [0, 2pi) zero list.
    let pi_enc = pi_interval(120).round_out(96);
    let two_pi = pi_enc.scale(&rat_int(2));
    let mut zeros: Vec<(Rat, Rat)> = Vec::new();
    if zero_at_0 {
        zeros.push((Rat::zero(), Rat::zero()));
    }
    for (lo, hi, _) in &t_intervals {
        zeros.push((lo.clone(), hi.clone()));
    }
    if zero_at_pi {
        zeros.push((pi_enc.lo.clone(), pi_enc.hi.clone()));
    }
    // Mirrors t -> 2pi - t, descending t gives ascending images.
    for (lo, hi, _) in t_intervals.iter().rev() {
        zeros.push((&two_pi.lo - hi, &two_pi.hi - lo));
    }

    // Disjointness is guaranteed by the strict-interior refinement in
    // map_bracket; verify as a cheap internal consistency check.
    for w in zeros.windows(2) {
        debug_assert!(w[0].1 < w[1].0, "zero intervals overlap");
    }

    let sign_changes: Vec<(Rat, Rat)> = t_intervals
        .iter()
        .filter(|(_, _, odd)| *odd)
        .map(|(lo, hi, _)| (lo.clone(), hi.clone()))
        .collect();

    let z = zeros.len() as u64;
    let d = sign_changes.len() as u64;
    Ok(ZeroReport { z, d, zeros, sign_changes })
}

/// Certified sign-change isolation at a requested width. Dispatches to the
/// exact engine at moderate degree and the subdivision scan beyond it.
pub fn sign_change_points(p: &CosinePoly, width: &Rat) -> Result<Vec<(Rat, Rat)>> {
    if p.is_zero() {
        return Err(CoslabError::IdenticallyZero);
    }
    if !width.is_positive() {
        return Err(CoslabError::InvalidInput("width must be positive".into()));
    }
    if p.degree() <= 64 {
        Ok(count_zeros_width(p, width)?.sign_changes)
    } else {
        scan::scan_sign_changes(p, width)
    }
}

/// Isolates the roots of square-free `s` in the open interval `(-1, 1)`,
/// tagging odd multiplicity via the sign of the original `q` at bracket
/// endpoints. Sturm variation counts are computed once per bisection point
/// and passed down the subdivision tree.
fn isolate_interior_roots(s: &IntPoly, q: &IntPoly) -> Vec<Bracket> {
    if s.degree() <= 0 {
        return Vec::new();
    }
    let chain = SturmChain::new(s);
    let m_one = rat_int(-1);
    let one = rat_int(1);
    // Roots in (-1, 1) = roots in (-1, 1] since s(1) != 0; the count on
    // (a, b] is V(a) - V(b).
    let va = chain.variations_at(&m_one);
    let vb = chain.variations_at(&one);
    let mut work = vec![(m_one, one, va, vb)];
    let mut out = Vec::new();
    while let Some((a, b, va, vb)) = work.pop() {
        let n = va - vb;
        if n == 0 {
            continue;
        }
        if n == 1 {
            // (a, b] contains one root; b may itself be the root.
            let (bracket, exact) = tighten_to_open(s, &a, &b);
            let (lo, hi) = bracket;
            let odd = q.sign_at(&lo) != q.sign_at(&hi);
            out.push(Bracket { lo, hi, exact, odd });
            continue;
        }
        let m = split_point(s, &a, &b);
        let vm = chain.variations_at(&m);
        work.push((a, m.clone(), va, vm));
        work.push((m, b, vm, vb));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// A dyadic-friendly split point in (a, b) that is not a root of `s`.
fn split_point(s: &IntPoly, a: &Rat, b: &Rat) -> Rat {
    let mid = (a + b) / rat_int(2);
    if s.sign_at(&mid) != Ordering::Equal {
        return mid;
    }
    // Nudge by shrinking offsets; s has finitely many roots so this ends.
    let mut offset = (b - a) / rat_int(16);
    loop {
        let cand = &mid + &offset;
        if &cand < b && s.sign_at(&cand) != Ordering::Equal {
            return cand;
        }
        offset = offset / rat_int(2);
        assert!(!offset.is_zero(), "split_point failed between {a} and {b}");
    }
}

/// Converts a one-root half-open `(a, b]` Sturm certificate into an open
/// bracket with sign-flipping endpoints, detecting an exact root at `b`.
fn tighten_to_open(s: &IntPoly, a: &Rat, b: &Rat) -> ((Rat, Rat), Option<Rat>) {
    if s.sign_at(b) == Ordering::Equal {
        // Exact rational root at b; bracket it between a and just beyond.
        let beyond = b + (b - a) / rat_int(1024);
        let hi = if s.sign_at(&beyond) != Ordering::Equal && beyond <= rat_int(1) {
            beyond
        } else {
            // fall back to halving toward b from the right
            let mut step = (b - a) / rat_int(2048);
            loop {
                let cand = b + &step;
                if s.sign_at(&cand) != Ordering::Equal {
                    break cand;
                }
                step = step / rat_int(2);
            }
        };
        return ((a.clone(), hi), Some(b.clone()));
    }
    ((a.clone(), b.clone()), None)
}

/// Refines a bracket and maps it through arccos to a dyadic `t`-interval of
/// width at most `width`, strictly inside `(0, pi)`.
fn map_bracket(b: &mut Bracket, s: &IntPoly, width: &Rat) -> Result<(Rat, Rat)> {
    let mut cos_bits: u32 = 96;
    for round in 0..16 {
        refine_bracket(b, s, 56 + 16 * round as u32);
        if let Some(t) = arccos_enclosure(&b.lo, &b.hi, cos_bits, width) {
            return Ok(t);
        }
        cos_bits += 64;
    }
    Err(CoslabError::AmbiguousSign { near: crate::scalar::rat_to_f64(&b.lo) })
}

/// Bisects the bracket down to width `<= 2^-bits`, preserving the
/// sign-flip/exact-root invariants.
fn refine_bracket(b: &mut Bracket, s: &IntPoly, bits: u32) {
    let target = crate::scalar::dyadic(BigInt::one(), bits as i64);
    if let Some(root) = &b.exact {
        // Shrink symmetric rational bounds around the known root.
        let mut halfw = (&b.hi - &b.lo) / rat_int(2);
        while &halfw * rat_int(2) > target {
            halfw = halfw / rat_int(2);
        }
        let lo = (root - &halfw).max(rat_int(-1));
        let hi = (root + &halfw).min(rat_int(1));
        // Endpoints must stay non-roots for downstream sign queries; nudge
        // inward-out if we landed on another root (impossible once the
        // bracket excludes all other roots, but stay safe).
        b.lo = if s.sign_at(&lo) != Ordering::Equal || lo == rat_int(-1) { lo } else { (root + &b.lo) / rat_int(2) };
        b.hi = if s.sign_at(&hi) != Ordering::Equal || hi == rat_int(1) { hi } else { (root + &b.hi) / rat_int(2) };
        return;
    }
    let sa = s.sign_at(&b.lo);
    while (&b.hi - &b.lo) > target {
        let m = split_point(s, &b.lo, &b.hi);
        if s.sign_at(&m) == sa {
            b.lo = m;
        } else {
            b.hi = m;
        }
    }
}

/// Outer dyadic enclosure of `arccos([x_lo, x_hi])`, of width at most
/// `width` if achievable at this cosine precision (None = refine and retry).
/// The returned interval is strictly inside `(0, pi)` whenever the input is
/// strictly inside `(-1, 1)` and tight enough.
///
/// The two image endpoints `L = arccos(x_hi) <= R = arccos(x_lo)` are
/// bracketed by independent monotone bisections: a point `m` with a
/// certified `cos(m) >= x_hi` satisfies `m <= L`, and one with a certified
/// `cos(m) <= x_lo` satisfies `m >= R`. Each bisection stops when its
/// bracket is resolved to `width / 4` or certification stalls inside the
/// cosine-enclosure noise band; the final width check decides success.
fn arccos_enclosure(x_lo: &Rat, x_hi: &Rat, bits: u32, width: &Rat) -> Option<(Rat, Rat)> {
    let pi_enc = pi_interval(bits + 8);
    let h0 = crate::interval::round_dyadic_up(&pi_enc.hi, bits);
    let quarter = width / rat_int(4);
    let steps = bits as usize + 16;
    let cos_at = |m: &Rat| cos_interval(&RatInterval::point(m.clone()), bits);

    // Lower bound l <= L: raise l while cos(l) >= x_hi stays certified.
    let mut l = Rat::zero();
    let mut probe = h0.clone();
    for _ in 0..steps {
        if (&probe - &l) <= quarter {
            break;
        }
        let m = (&l + &probe) / rat_int(2);
        let c = cos_at(&m);
        if &c.lo >= x_hi {
            l = m;
        } else if &c.hi <= x_hi {
            probe = m;
        } else {
            break;
        }
    }

    // Upper bound h >= R: lower h while cos(h) <= x_lo stays certified.
    let mut h = h0;
    let mut probe = Rat::zero();
    for _ in 0..steps {
        if (&h - &probe) <= quarter {
            break;
        }
        let m = (&probe + &h) / rat_int(2);
        let c = cos_at(&m);
        if &c.hi <= x_lo {
            h = m;
        } else if &c.lo >= x_lo {
            probe = m;
        } else {
            break;
        }
    }

    if (&h - &l) <= *width && l.is_positive() && h < pi_enc.lo {
        Some((l, h))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{dyadic, rat, rat_to_f64};

    #[test]
    fn cos_t_has_two_zeros_one_sign_change() {
        let r = count_zeros(&CosinePoly::from_ints(&[0, 1])).unwrap();
        assert_eq!(r.z, 2);
        assert_eq!(r.d, 1);
        assert_eq!(r.zeros.len(), 2);
        // zeros near pi/2 and 3pi/2
        let mid0 = rat_to_f64(&r.zeros[0].0);
        let mid1 = rat_to_f64(&r.zeros[1].0);
        assert!((mid0 - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!((mid1 - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn touch_zero_counts_in_z_not_d() {
        // 1 + cos t: double zero at pi.
        let r = count_zeros(&CosinePoly::from_ints(&[1, 1])).unwrap();
        assert_eq!(r.z, 1);
        assert_eq!(r.d, 0);
        assert!(r.sign_changes.is_empty());
        let lo = rat_to_f64(&r.zeros[0].0);
        assert!((lo - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn endpoint_zero_at_t_zero() {
        // cos t - 1: double zero at 0 only.
        let r = count_zeros(&CosinePoly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(r.z, 1);
        assert_eq!(r.d, 0);
        assert_eq!(r.zeros[0], (Rat::zero(), Rat::zero()));
    }

    #[test]
    fn cos_nt_has_2n_zeros() {
        for n in 1..=6usize {
            let mut c = vec![0i64; n + 1];
            c[n] = 1;
            let r = count_zeros(&CosinePoly::from_ints(&c)).unwrap();
            assert_eq!(r.z, 2 * n as u64, "cos({n}t)");
            assert_eq!(r.d, n as u64, "cos({n}t) sign changes in (0,pi)");
        }
    }

    #[test]
    fn constant_and_zero_polynomials() {
        let r = count_zeros(&CosinePoly::from_ints(&[5])).unwrap();
        assert_eq!((r.z, r.d), (0, 0));
        assert!(matches!(
            count_zeros(&CosinePoly::zero()),
            Err(CoslabError::IdenticallyZero)
        ));
    }

    #[test]
    fn dirichlet_like_small_set() {
        // f = 1 + cos t + cos 2t: check against the scan oracle semantics by
        // hand: roots of 1 + x + 2x^2 - 1 = x(2x+1): x = 0, x = -1/2 ->
        // t = pi/2, 2pi/3 (+ mirrors). All simple.
        let r = count_zeros(&CosinePoly::from_ints(&[1, 1, 1])).unwrap();
        assert_eq!(r.z, 4);
        assert_eq!(r.d, 2);
        let t0 = rat_to_f64(&r.sign_changes[0].0);
        let t1 = rat_to_f64(&r.sign_changes[1].0);
        assert!((t0 - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!((t1 - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn exact_rational_root_is_handled() {
        // 2cos t + 1 has cos t = -1/2: the Sturm bisection hits -1/2 only if
        // unlucky; force an exact-root path with cos t (root x = 0 exactly,
        // hit by the first midpoint of (-1,1)).
        let r = count_zeros(&CosinePoly::from_ints(&[0, 1])).unwrap();
        assert_eq!(r.z, 2);
        // and the interval widths honor the default
        for (lo, hi) in &r.zeros {
            assert!((hi - lo) <= default_report_width());
        }
    }

    #[test]
    fn report_intervals_are_disjoint_and_sorted() {
        let p = CosinePoly::from_ints(&[0, 3, 0, -2, 1, 1]);
        let r = count_zeros(&p).unwrap();
        for w in r.zeros.windows(2) {
            assert!(w[0].1 < w[1].0, "overlap: {:?}", w);
        }
        assert_eq!(r.d as usize, r.sign_changes.len());
        assert!(r.d <= r.z);
    }

    #[test]
    fn narrower_width_refines_without_changing_counts() {
        let p = CosinePoly::from_ints(&[1, 1, 1, 1, 1]);
        let coarse = count_zeros_width(&p, &dyadic(BigInt::one(), 20)).unwrap();
        let fine = count_zeros_width(&p, &dyadic(BigInt::one(), 60)).unwrap();
        assert_eq!(coarse.z, fine.z);
        assert_eq!(coarse.d, fine.d);
        for ((cl, ch), (fl, fh)) in coarse.sign_changes.iter().zip(&fine.sign_changes) {
            // refined interval sits inside the coarse one
            assert!(fl >= cl && fh <= ch);
            assert!((fh - fl) <= dyadic(BigInt::one(), 60));
        }
    }

    #[test]
    fn zero_report_json_round_trip() {
        let p = CosinePoly::from_ints(&[1, 1, 1]);
        let r = count_zeros(&p).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        assert!(js.contains("\"Z\":4"));
        assert!(js.contains("\"sign_changes\""));
        let back: ZeroReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn half_open_period_convention() {
        // cos(2t) + 1: zeros at pi/2, 3pi/2 (double). t=0 is not a zero
        // (value 2). Z = 2.
        let r = count_zeros(&CosinePoly::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(r.z, 2);
        assert_eq!(r.d, 0);
        // cos(2t) - 1: zeros at 0 and pi, both double: Z = 2, d = 0.
        let r = count_zeros(&CosinePoly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(r.z, 2);
        assert_eq!(r.d, 0);
    }

    #[test]
    fn sign_change_parity_matches_endpoint_signs() {
        for coeffs in [[2i64, -1, 3, 1], [1, 2, 2, -1], [-1, 4, -2, 1]] {
            let p = CosinePoly::from_ints(&coeffs);
            let r = count_zeros(&p).unwrap();
            let flip = p.value_at_zero().is_positive() != p.value_at_pi().is_positive();
            assert_eq!(
                r.d % 2 == 1,
                flip,
                "parity mismatch for {coeffs:?}: d = {}",
                r.d
            );
        }
    }

    #[test]
    fn mixed_rational_coefficients() {
        // q(x) form with fractions: (1/3)cos t - 1/6 -> root x = 1/2.
        let p = CosinePoly::new(vec![rat(-1, 6), rat(1, 3)]);
        let r = count_zeros(&p).unwrap();
        assert_eq!(r.z, 2);
        assert_eq!(r.d, 1);
        let t = rat_to_f64(&r.sign_changes[0].0);
        assert!((t - (0.5f64).acos()).abs() < 1e-9);
    }
}
