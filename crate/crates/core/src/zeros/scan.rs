//! Certified subdivision scan for sign changes in `(0, pi)`.
//!
//! Scales to degrees far beyond the exact Sturm engine by working on an
//! adaptive f64 grid with two certificates per segment `[a, b]` with
//! midpoint `m` and width `w`. Both use local first-order data at `m`
//! (obtained together from one trig-table build) sharpened by a global
//! bound one derivative higher, so the thresholds track the polynomial's
//! local scale instead of its worst-case slope:
//!
//! - **exclusion**: `|p(m)| > (|p'(m)| + sup|p''| * w/2) * w/2` proves `p`
//!   has no zero on the segment (mean value theorem, with the inner term
//!   bounding `sup |p'|` over the segment);
//! - **uniqueness**: endpoint signs differ and
//!   `|p'(m)| > (|p''(m)| + sup|p'''| * w/2) * w/2` proves strict
//!   monotonicity, hence exactly one simple crossing.
//!
//! Endpoint behavior at `0` and `pi` comes from exact Taylor-germ analysis,
//! so the engine never evaluates at the (irrational) endpoint `pi` and
//! endpoint zeros of any finite order are handled exactly.
//!
//! Touch zeros (even multiplicity) inside the range defeat both
//! certificates at every scale; the engine reports `AmbiguousSign` at its
//! resolution floor rather than guessing. The exact engine in the parent
//! module resolves such inputs when the degree allows.

use crate::ceval::{germ_at_pi, germ_at_zero, sign_at, DdEval};
use crate::dd::bump;
use crate::error::{CoslabError, Result};
use crate::poly::CosinePoly;
use crate::scalar::{rat_from_f64, rat_to_f64, rat_to_f64_ceil, rat_to_f64_floor, Rat};
use num_traits::Signed;
use std::cmp::Ordering;

/// Segment-width floor (~3.6e-15): below this the f64 grid is exhausted
/// and an unresolved segment is reported as ambiguous.
const FLOOR_WIDTH: f64 = 3.552713678800501e-15; // 2^-48

/// Hard cap on segment visits: around an interior touch zero the number of
/// uncertifiable segments grows like sqrt(1/width), so a runaway
/// subdivision is cut off and reported as ambiguous instead.
const VISIT_BUDGET: usize = 400_000;

#[derive(Clone, Copy)]
struct Seg {
    a: f64,
    b: f64,
    sa: Ordering,
    sb: Ordering,
}

/// Isolates all sign changes of `p` in `(0, pi)` into pairwise-disjoint
/// dyadic intervals of width at most `width`, or fails with
/// `AmbiguousSign` when a segment cannot be certified at the resolution
/// floor (touch zeros, pathologically flat crossings).
pub fn scan_sign_changes(p: &CosinePoly, width: &Rat) -> Result<Vec<(Rat, Rat)>> {
    if p.is_zero() {
        return Err(CoslabError::IdenticallyZero);
    }
    if !width.is_positive() {
        return Err(CoslabError::InvalidInput("width must be positive".into()));
    }
    if p.degree() <= 0 {
        return Ok(Vec::new());
    }

    let (s0, d0) = germ_at_zero(p)?;
    let (spi, dpi) = germ_at_pi(p)?;
    debug_assert!(s0 != Ordering::Equal && spi != Ordering::Equal);

    // Start of the scanned range: a power of two below the left germ radius.
    // When p vanishes at 0 the germ keeps the quadratic pinch outside the
    // range, so the exclusion certificate stays effective near the start.
    let a0 = pow2_at_most(&d0);
    // End of the scanned range: an f64 in the middle of the germ-certified
    // zone [pi - dpi, pi). Anchoring flush against pi would put an endpoint
    // zero's pinch inside the range and defeat the exclusion certificate.
    let pi_enc = crate::interval::pi_interval(64);
    let e = rat_to_f64_floor(&(&pi_enc.lo - &dpi / crate::scalar::rat_int(2)));
    // Exact containment check: [e, pi) must lie inside the germ zone.
    if !(e > 0.0) || &pi_enc.hi - rat_from_f64(e) > dpi {
        return Err(CoslabError::AmbiguousSign { near: std::f64::consts::PI });
    }
    if a0 >= e {
        debug_assert_eq!(s0, spi);
        return Ok(Vec::new());
    }

    let ev = DdEval::new(p);
    let l1 = bump(rat_to_f64_ceil(&p.deriv_bound()));
    let l2 = bump(rat_to_f64_ceil(&p.deriv2_bound()));
    let l3 = bump(rat_to_f64_ceil(&p.deriv3_bound()));

    let mut emitted: Vec<(f64, f64)> = Vec::new();
    let mut stack = vec![Seg { a: a0, b: e, sa: s0, sb: spi }];
    let mut visits = 0usize;
    while let Some(seg) = stack.pop() {
        visits += 1;
        if visits > VISIT_BUDGET {
            return Err(CoslabError::AmbiguousSign { near: seg.a });
        }
        let w = bump(seg.b - seg.a);
        let m = 0.5 * (seg.a + seg.b);
        if !(m > seg.a && m < seg.b) {
            return Err(CoslabError::AmbiguousSign { near: seg.a });
        }
        let (cv, dv, d2v) = ev.eval_with_derivs(m);
        // Certified upper bound for sup |p'| over the segment; the global
        // bound keeps it sane when the midpoint enclosure is loose.
        let d1_sup = l1.min(bump(dv.abs_upper() + bump(l2 * w * 0.5)));
        if cv.abs_lower() > bump(d1_sup * w * 0.5) {
            // No zero anywhere on the segment.
            debug_assert_eq!(seg.sa, seg.sb, "certified-nonzero segment with a sign flip");
            continue;
        }
        if seg.sa != seg.sb {
            let d2_sup = l2.min(bump(d2v.abs_upper() + bump(l3 * w * 0.5)));
            if dv.abs_lower() > bump(d2_sup * w * 0.5) {
                // Strictly monotone with a sign flip: exactly one crossing.
                emitted.push((seg.a, seg.b));
                continue;
            }
        }
        if w < FLOOR_WIDTH {
            return Err(CoslabError::AmbiguousSign { near: m });
        }
        let sm = certified_sign(p, &ev, &rat_from_f64(m))?;
        stack.push(Seg { a: seg.a, b: m, sa: seg.sa, sb: sm });
        stack.push(Seg { a: m, b: seg.b, sa: sm, sb: seg.sb });
    }

    if std::env::var_os("COSLAB_SCAN_DEBUG").is_some() {
        eprintln!(
            "[scan] degree {}: {} segment visits, {} emitted",
            p.degree(),
            visits,
            emitted.len()
        );
    }

    emitted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = Vec::with_capacity(emitted.len());
    for (af, bf) in emitted {
        let mut a = rat_from_f64(af);
        let mut b = rat_from_f64(bf);
        if &b - &a > *width {
            let sa = certified_sign(p, &ev, &a)?;
            while &b - &a > *width {
                // Snap the midpoint to the f64 grid while it stays strictly
                // inside: keeps the evaluation on the fast certified lane.
                let exact_mid = (&a + &b) / crate::scalar::rat_int(2);
                let snapped = rat_from_f64(rat_to_f64(&exact_mid));
                let m = if snapped > a && snapped < b { snapped } else { exact_mid };
                if certified_sign(p, &ev, &m)? == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
        }
        out.push((a, b));
    }
    Ok(out)
}

/// Certified sign of `p` at a rational point: double-double fast path when
/// the point is exactly representable, exact interval escalation otherwise.
fn certified_sign(p: &CosinePoly, ev: &DdEval, t: &Rat) -> Result<Ordering> {
    let tf = rat_to_f64(t);
    if tf.is_finite() && &rat_from_f64(tf) == t {
        if let Some(s) = ev.eval(tf).sign() {
            debug_assert_ne!(s, Ordering::Equal);
            return Ok(s);
        }
    }
    let s = sign_at(p, t)?;
    debug_assert_ne!(s, Ordering::Equal, "exact zero at rational t != 0");
    Ok(s)
}

/// The largest power of two `2^-k <= r` (as f64; `r` must be positive and
/// below 1 in practice).
fn pow2_at_most(r: &Rat) -> f64 {
    if r >= &crate::scalar::rat_int(1) {
        return 0.5;
    }
    // smallest k with 2^k >= denom/numer, i.e. 2^-k <= r
    let q = (r.denom() + r.numer() - 1i32) / r.numer();
    let k = (q - 1i32).bits();
    if k > 1000 {
        return 0.0; // effectively unusable start; caller's a0 >= e guard won't fire
    }
    0.5f64.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{dyadic, rat_int};
    use crate::zeros::count_zeros;
    use num_bigint::BigInt;

    fn width40() -> Rat {
        dyadic(BigInt::from(1), 40)
    }

    #[test]
    fn agrees_with_exact_engine_on_small_inputs() {
        let cases: Vec<Vec<i64>> = vec![
            vec![0, 1],
            vec![1, 1, 1],
            vec![1, 1, 1, 1, 1, 1],
            vec![2, -1, 3, 1],
            vec![0, 3, 0, -2, 1, 1],
            vec![-1, 4, -2, 1],
            vec![5],
            vec![0, 0, 0, 1],
        ];
        for c in cases {
            let p = CosinePoly::from_ints(&c);
            let scan = scan_sign_changes(&p, &width40()).unwrap();
            let exact = count_zeros(&p).unwrap();
            assert_eq!(
                scan.len() as u64,
                exact.d,
                "sign-change count mismatch for {c:?}"
            );
            // each scan interval contains exactly one exact interval's root:
            // compare midpoints within width
            for (s, x) in scan.iter().zip(exact.sign_changes.iter()) {
                assert!(
                    s.1 >= x.0 && s.0 <= x.1,
                    "intervals disagree for {c:?}: scan {s:?} vs exact {x:?}"
                );
            }
        }
    }

    #[test]
    fn endpoint_germ_skips_zero_at_origin() {
        // cos t - 1 vanishes to second order at 0 and has no sign change.
        let p = CosinePoly::from_ints(&[-1, 1]);
        assert!(scan_sign_changes(&p, &width40()).unwrap().is_empty());
        // 1 + cos t vanishes at pi; also no sign change.
        let p = CosinePoly::from_ints(&[1, 1]);
        assert!(scan_sign_changes(&p, &width40()).unwrap().is_empty());
    }

    #[test]
    fn touch_zero_inside_range_is_ambiguous() {
        // (2 cos t + 1)^2 = 4cos^2 t + 4cos t + 1 = 2cos 2t + 4cos t + 3:
        // touch zero at t = 2pi/3 defeats both certificates.
        let p = CosinePoly::from_ints(&[3, 4, 2]);
        match scan_sign_changes(&p, &width40()) {
            Err(CoslabError::AmbiguousSign { near }) => {
                assert!((near - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-3);
            }
            other => panic!("expected AmbiguousSign, got {other:?}"),
        }
        // ... while the exact engine resolves it: Z = 2 (t and mirror), d = 0.
        let r = count_zeros(&p).unwrap();
        assert_eq!((r.z, r.d), (2, 0));
    }

    #[test]
    fn large_degree_dirichlet_block() {
        // sum_{n=0}^{72} cos nt: Dirichlet-kernel-like with well-separated
        // simple crossings; degree 72 exercises the scan dispatch while the
        // exact Sturm engine independently confirms the count.
        let coeffs = vec![1i64; 73];
        let p = CosinePoly::from_ints(&coeffs);
        let scan = scan_sign_changes(&p, &width40()).unwrap();
        let exact = count_zeros(&p).unwrap();
        assert_eq!(scan.len() as u64, exact.d);
    }

    #[test]
    fn width_request_is_honored() {
        let p = CosinePoly::from_ints(&[1, 1, 1]);
        let tight = dyadic(BigInt::from(1), 50);
        for (lo, hi) in scan_sign_changes(&p, &tight).unwrap() {
            assert!(&hi - &lo <= tight);
            assert!(lo.is_positive());
        }
    }

    #[test]
    fn constant_has_no_sign_changes() {
        let p = CosinePoly::from_ints(&[7]);
        assert!(scan_sign_changes(&p, &width40()).unwrap().is_empty());
        assert!(matches!(
            scan_sign_changes(&CosinePoly::zero(), &width40()),
            Err(CoslabError::IdenticallyZero)
        ));
    }

    #[test]
    fn pow2_floor_helper() {
        assert_eq!(pow2_at_most(&crate::scalar::rat(1, 3)), 0.25);
        assert_eq!(pow2_at_most(&crate::scalar::rat(1, 4)), 0.25);
        assert_eq!(pow2_at_most(&crate::scalar::rat(5, 8)), 0.5);
        assert_eq!(pow2_at_most(&rat_int(2)), 0.5);
    }
}
