//! Structure discovery for coefficient sequences: periodic partitions,
//! window subspaces and their annihilators, root-of-unity decompositions,
//! companion polynomials, and the sparse product whose zero runs reveal
//! where a coefficient sequence obeys a linear recurrence.
//!
//! Throughout, `g(θ) = Σ a_n cos nθ` of degree N is paired with the
//! palindromic polynomial `G(z) = Σ_{m=0}^{2N} b_m z^m` defined by
//! `g(θ) = ½ G(e^{iθ}) e^{-iNθ}`, so `b_{N+k} = b_{N-k} = a_k` for
//! `k ≥ 1` and `b_N = 2 a_0`.

use crate::ceval::CertValue;
use crate::cyclo::{cyclotomic, gcd, lcm, poly_divides, poly_trim, CycloElem};
use crate::error::{CoslabError, Result};
use crate::l1::l1_norm_with_flips;
use crate::poly::{CosinePoly, LaurentPoly};
use crate::scalar::{rat, rat_int, rat_to_f64, Rat};
use crate::smoothing::PeriodicPartition;
use crate::zeros::{default_report_width, sign_change_points};
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

/// Splits a coefficient sequence into the minimal number of intervals
/// under the left-greedy rule, each internally periodic with period `p`:
/// every kept pair satisfies `x[i] = x[i+p]` with both ends inside the
/// interval. Greedy maximal extension is optimal here because validity
/// is hereditary (sub-intervals of valid intervals are valid).
pub fn find_periodic_partition(coeffs: &[Rat], p: usize) -> Result<PeriodicPartition> {
    if p == 0 {
        return Err(CoslabError::InvalidP(0));
    }
    if coeffs.is_empty() {
        return Err(CoslabError::InvalidInput("empty coefficient sequence".into()));
    }
    let len = coeffs.len();
    let mut intervals = Vec::new();
    let mut patterns = Vec::new();
    let mut u = 0usize;
    while u < len {
        let mut v = u;
        while v + 1 < len {
            // extending to v+1 adds exactly one constraint pair
            if v + 1 >= u + p && coeffs[v + 1 - p] != coeffs[v + 1] {
                break;
            }
            v += 1;
        }
        intervals.push((u, v));
        patterns.push(coeffs[u..=u + p.min(v - u + 1) - 1].to_vec());
        u = v + 1;
    }
    PeriodicPartition::from_parts(p, intervals, patterns)
}

/// The span of the length-`b` windows of a sequence over a range, with
/// its exact rank and, when the span is a proper subspace, an exact
/// annihilating vector.
#[derive(Debug, Clone)]
pub struct WindowSpace {
    /// Window length.
    pub b: usize,
    /// Every window `(x[s], …, x[s+b-1])` with `u ≤ s` and `s+b-1 ≤ v`.
    pub windows: Vec<Vec<Rat>>,
    /// Rank of the span over the rationals.
    pub dim: usize,
    /// A nonzero vector orthogonal to every window, present iff `dim < b`.
    pub annihilator: Option<Vec<Rat>>,
}

/// Computes the window span of `coeffs[u..=v]` exactly (fraction-free in
/// effect: all elimination is over `ℚ`).
pub fn window_space(coeffs: &[Rat], b: usize, u: usize, v: usize) -> Result<WindowSpace> {
    if b == 0 {
        return Err(CoslabError::InvalidInput("window length must be positive".into()));
    }
    if v >= coeffs.len() || u > v {
        return Err(CoslabError::InvalidInput(format!(
            "range [{u}, {v}] outside the sequence of length {}",
            coeffs.len()
        )));
    }
    if v - u < b {
        return Err(CoslabError::RangeTooShort(format!(
            "range [{u}, {v}] too short for {b}-windows (need v - u >= b)"
        )));
    }
    let windows: Vec<Vec<Rat>> = (u..=v + 1 - b).map(|s| coeffs[s..s + b].to_vec()).collect();
    let mut rows = windows.clone();
    rows.sort();
    rows.dedup();
    let (rref_rows, pivots) = rref(rows);
    let dim = rref_rows.len();
    let annihilator = if dim < b {
        let free = (0..b).find(|c| !pivots.contains(c)).expect("free column exists");
        let mut c = vec![Rat::zero(); b];
        c[free] = rat_int(1);
        for (row, &pc) in rref_rows.iter().zip(&pivots) {
            c[pc] = -row[free].clone();
        }
        debug_assert!(windows.iter().all(|w| dot(w, &c).is_zero()));
        Some(c)
    } else {
        None
    };
    Ok(WindowSpace { b, windows, dim, annihilator })
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form over `ℚ`; returns the nonzero rows and their
/// pivot columns.
fn rref(mut rows: Vec<Vec<Rat>>) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// One geometric component of a sequence: `x_j(r) = α_j · ω_j^r` with
/// `ω_j` a root of unity of the given multiplicative order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicTerm {
    pub alpha: CycloElem,
    pub omega: CycloElem,
    pub period: usize,
}

/// Order bound for root-of-unity search: an explicit surrogate for the
/// `O(b log log b)` period bound.
fn unity_order_bound(b: usize) -> usize {
    let bf = b as f64;
    (4.0 * bf * f64::max(1.0, bf.ln().ln())).ceil() as usize
}

/// Decomposes a sequence annihilated by `c` on a range into exact
/// root-of-unity components `x(r) = Σ_j α_j ω_j^r`, valid on
/// `[u+b, v-b]` where `b = c.len()`.
///
/// Roots of unity among the roots of `c₁ + c₂ z + … + c_b z^{b-1}` are
/// found by exact divisibility against cyclotomic polynomials up to the
/// order bound; the combined period must then explain the sequence
/// exactly, and each surviving spectral component must itself be a root
/// of the annihilator polynomial. Everything is checked exactly — no
/// floating point.
pub fn decompose_periodic(
    coeffs: &[Rat],
    annihilator: &[Rat],
    u: usize,
    v: usize,
) -> Result<Vec<PeriodicTerm>> {
    let b = annihilator.len();
    if b == 0 || annihilator.iter().all(|c| c.is_zero()) {
        return Err(CoslabError::InvalidInput("annihilator must be nonzero".into()));
    }
    if v >= coeffs.len() || u > v || v - u < b {
        return Err(CoslabError::RangeTooShort(format!(
            "range [{u}, {v}] too short for a length-{b} annihilator"
        )));
    }
    debug_assert!(
        (u..=v + 1 - b).all(|s| dot(&coeffs[s..s + b], annihilator).is_zero()),
        "annihilator does not annihilate the windows on the range"
    );
    let lo = u + b;
    let hi = v - b;
    if lo > hi {
        return Err(CoslabError::RangeTooShort(format!(
            "validity range [{}+{b}, {}-{b}] is empty",
            u, v
        )));
    }

    let a_poly = poly_trim(annihilator.to_vec());
    let bound = unity_order_bound(b);
    let orders: Vec<usize> =
        (1..=bound).filter(|&m| poly_divides(&cyclotomic(m), &a_poly)).collect();
    if orders.is_empty() {
        if coeffs[lo..=hi].iter().all(|x| x.is_zero()) {
            return Ok(Vec::new());
        }
        return Err(CoslabError::NoUnityRoots);
    }
    let p_star = orders.iter().fold(1usize, |acc, &m| lcm(acc, m));
    if hi - lo + 1 < p_star {
        return Err(CoslabError::RangeTooShort(format!(
            "validity range holds {} terms, fewer than the combined period {p_star}",
            hi - lo + 1
        )));
    }
    for i in lo..(hi + 1).saturating_sub(p_star) {
        if coeffs[i] != coeffs[i + p_star] {
            return Err(CoslabError::NotPeriodicOnRange(format!(
                "sequence is not {p_star}-periodic on the validity range (breaks at {i})"
            )));
        }
    }

    // exact DFT over one period, with absolute indices so that
    // x(r) = Σ_k x̂(k) ζ^{kr} holds for the original r
    let mut spectral: Vec<(usize, PeriodicTerm)> = Vec::new();
    for k in 0..p_star {
        let mut acc = CycloElem::zero(p_star);
        for r in lo..lo + p_star {
            acc = acc.add(&CycloElem::zeta_pow(p_star, -((k * r) as i64)).scale(&coeffs[r]));
        }
        let alpha = acc.scale(&rat(1, p_star as i64));
        if alpha.is_zero() {
            continue;
        }
        let period = p_star / gcd(k, p_star);
        if !poly_divides(&cyclotomic(period), &a_poly) {
            return Err(CoslabError::NoStructureFound(format!(
                "spectral component of order {period} is not a root of the annihilator"
            )));
        }
        spectral.push((
            k,
            PeriodicTerm {
                alpha,
                omega: CycloElem::zeta_pow(p_star, k as i64),
                period,
            },
        ));
    }

    // exact reconstruction Σ_k α_k ζ^{kr} over one full period
    // (periodicity beyond it was verified above)
    for r in lo..lo + p_star {
        let mut rec = CycloElem::zero(p_star);
        for (k, t) in &spectral {
            rec = rec.add(&t.alpha.mul(&CycloElem::zeta_pow(p_star, (k * r) as i64)));
        }
        match rec.as_rational() {
            Some(x) if x == coeffs[r] => {}
            _ => {
                return Err(CoslabError::NoStructureFound(format!(
                    "root-of-unity reconstruction disagrees with the sequence at {r}"
                )))
            }
        }
    }
    Ok(spectral.into_iter().map(|(_, t)| t).collect())
}

/// Monic self-reciprocal polynomial with prescribed cosine-domain roots:
/// `poly(z) = ∏_j (z² - 2ρ_j z + 1)`, equivalently the cosine form
/// `2^d ∏_j (cos θ - ρ_j)`.
#[derive(Debug, Clone)]
pub struct CompanionPoly {
    /// Number of quadratic factors (matches the sign-change count when
    /// built by [`companion`]).
    pub d: usize,
    /// Isolating intervals of the sign-change points the roots track;
    /// empty for manually constructed polynomials.
    pub roots_t: Vec<(Rat, Rat)>,
    /// Perturbation added to each sign-change point before rounding.
    pub epsilon: Rat,
    /// Exact rational cosine-domain roots `ρ_j ≈ cos(t_j + ε)`.
    pub rho: Vec<Rat>,
    /// Monic z-form of degree `2d`, support in `[0, 2d]`.
    pub poly: LaurentPoly,
}

impl CompanionPoly {
    /// The trivial monic polynomial `Q = 1` (no factors, no roots).
    pub fn trivial() -> Self {
        let mut one = BTreeMap::new();
        one.insert(0i64, rat_int(1));
        Self {
            d: 0,
            roots_t: Vec::new(),
            epsilon: Rat::zero(),
            rho: Vec::new(),
            poly: LaurentPoly::new(one),
        }
    }

    /// Builds the exact polynomial from rational cosine-domain roots.
    pub fn from_cos_roots(rho: Vec<Rat>) -> Self {
        let mut poly = {
            let mut one = BTreeMap::new();
            one.insert(0i64, rat_int(1));
            LaurentPoly::new(one)
        };
        for r in &rho {
            let mut f = BTreeMap::new();
            f.insert(0i64, rat_int(1));
            f.insert(1i64, rat_int(-2) * r);
            f.insert(2i64, rat_int(1));
            poly = poly.multiply(&LaurentPoly::new(f));
        }
        Self {
            d: rho.len(),
            roots_t: Vec::new(),
            epsilon: Rat::zero(),
            rho,
            poly,
        }
    }

    /// The palindromic Laurent form `poly(z) · z^{-d} = ∏ (z + z⁻¹ - 2ρ_j)`.
    pub fn symmetric_laurent(&self) -> LaurentPoly {
        shift_laurent(&self.poly, -(self.d as i64))
    }

    /// The cosine form `2^d ∏_j (cos θ - ρ_j)` as a cosine polynomial.
    pub fn cos_form(&self) -> CosinePoly {
        self.symmetric_laurent()
            .to_cosine()
            .expect("companion z-form is palindromic by construction")
    }
}

/// Multiplies a Laurent polynomial by `z^k`.
fn shift_laurent(p: &LaurentPoly, k: i64) -> LaurentPoly {
    LaurentPoly::new(p.coeffs().iter().map(|(m, c)| (m + k, c.clone())).collect())
}

/// Builds the coefficient sequence `(b_m)_{m=0}^{2N}` of `G`.
pub fn big_coeff_sequence(g: &CosinePoly) -> Vec<Rat> {
    let n = g.degree().max(0) as usize;
    let mut b = vec![Rat::zero(); 2 * n + 1];
    for k in 0..=n {
        let a = g.coeff(k);
        if k == 0 {
            b[n] = &a * rat_int(2);
        } else {
            b[n + k] = a.clone();
            b[n - k] = a;
        }
    }
    b
}

/// Certified `‖h‖₁` for `h = g · (2cos d'θ - 2) · ∏ 2(cos θ - ρ_j)`:
/// the middle factor is `≤ 0` everywhere (its zeros have even order and
/// flip nothing), `g` flips only inside its sign-change brackets, and
/// the product factor flips only where `cos θ` crosses a `ρ_j` — at
/// `θ = arccos ρ_j`, known to within `6e-16/sin θ̂` (rational→f64
/// rounding plus acos ulps, divided by the local slope of cos).
fn covered_flip_norm(h: &CosinePoly, g_cuts: &[(Rat, Rat)], rho: &[Rat]) -> Result<CertValue> {
    let extra: Vec<(f64, f64)> = rho
        .iter()
        .map(|r| {
            let t = rat_to_f64(r).clamp(-1.0, 1.0).acos();
            (t, 6e-16 / t.sin().max(1e-9) + 4e-16)
        })
        .collect();
    l1_norm_with_flips(h, g_cuts, &extra)
}

/// The two sides of the correlation condition for a candidate companion
/// polynomial: the exact mean `|ĥ(0)|` of
/// `h(θ) = g(θ)·(2cos d'θ - 2)·2^d ∏ (cos θ - ρ_j)` and the certified
/// norm `‖h‖₁`. The condition holds when the first is at least half the
/// second.
pub fn correlation_sides(
    g: &CosinePoly,
    q: &CompanionPoly,
    d_prime: usize,
) -> Result<(Rat, CertValue)> {
    if d_prime == 0 {
        return Err(CoslabError::InvalidInput("d' must be positive".into()));
    }
    let mut w = BTreeMap::new();
    w.insert(-(d_prime as i64), rat_int(1));
    w.insert(0i64, rat_int(-2));
    w.insert(d_prime as i64, rat_int(1));
    let h = g
        .to_laurent()
        .multiply(&LaurentPoly::new(w))
        .multiply(&q.symmetric_laurent());
    let h_cos = h.to_cosine().expect("product of even spectra is even");
    let lhs = h_cos.coeff(0).abs();
    let g_cuts = if q.roots_t.is_empty() {
        sign_change_points(g, &companion_cut_width())?
    } else {
        q.roots_t.clone()
    };
    let norm = covered_flip_norm(&h_cos, &g_cuts, &q.rho)?;
    Ok((lhs, norm))
}

/// Bracket half-width for isolating the sign changes a companion
/// polynomial tracks: narrow enough that the dyadic perturbation
/// dominates it, wide enough that sign certification next to the
/// brackets stays within reach of double-double evaluation.
fn companion_cut_width() -> Rat {
    rat(1, 1 << 30)
}

/// Number of dyadic perturbation candidates on the search grid.
const EPS_GRID: usize = 64;

/// Builds a perturbed companion polynomial for `g`: one quadratic factor
/// per sign change, with exact dyadic cosine-domain roots
/// `ρ_j ≈ cos(t_j + ε)`, where `ε` is searched over a dyadic grid in
/// `[2⁻⁴⁰, 2⁻³⁹)` until the correlation condition is certified for the
/// given `d'`. Roots are nudged off `{0, ±½, ±1}` so no factor is
/// cyclotomic — hence no root of the result is a root of unity.
pub fn companion(g: &CosinePoly, d_prime: usize, eps_budget: usize) -> Result<CompanionPoly> {
    if d_prime == 0 || eps_budget == 0 {
        return Err(CoslabError::InvalidInput(
            "companion needs d' >= 1 and a positive epsilon budget".into(),
        ));
    }
    let cuts = sign_change_points(g, &companion_cut_width())?;
    if cuts.is_empty() {
        return Err(CoslabError::InvalidInput(
            "companion needs at least one sign change".into(),
        ));
    }
    let scale: i64 = 1 << 60;
    let mut tried = 0usize;
    for i in 0..eps_budget.min(EPS_GRID) {
        tried += 1;
        let eps = rat(1, 1 << 40) + rat(i as i64, 1 << 46);
        let eps_f = rat_to_f64(&eps);
        let rho: Vec<Rat> = cuts
            .iter()
            .map(|(lo, hi)| {
                let mid = rat_to_f64(&((lo + hi) / rat_int(2)));
                let c = (mid + eps_f).cos();
                let mut r = rat((c * scale as f64).round() as i64, scale);
                let one = rat_int(1);
                if r >= one {
                    r = &one - rat(1, scale);
                }
                if r <= -one.clone() {
                    r = rat(1, scale) - &one;
                }
                for bad in [rat_int(0), rat(1, 2), rat(-1, 2)] {
                    if r == bad {
                        r += rat(1, scale);
                    }
                }
                r
            })
            .collect();
        let mut q = CompanionPoly::from_cos_roots(rho);
        q.roots_t = cuts.clone();
        q.epsilon = eps;
        let (lhs, norm) = correlation_sides(g, &q, d_prime)?;
        if rat_to_f64(&lhs) >= 0.5 * (norm.value + norm.radius) {
            return Ok(q);
        }
    }
    Err(CoslabError::EpsilonSearchFailed(format!(
        "no dyadic perturbation among {tried} candidates certified the correlation condition"
    )))
}

/// `F(z) = G(z) · Q(z) · (z^{d'} - 1)²` with its exact nonzero count and
/// the maximal runs of zero coefficients.
#[derive(Debug, Clone)]
pub struct SparseProduct {
    /// The product, support inside `[0, 2N + 2d_Q + 2d']`.
    pub f: LaurentPoly,
    /// Exact number of nonzero coefficients.
    pub q: usize,
    pub d_prime: usize,
    /// Maximal intervals of indices inside the support span where the
    /// coefficient is exactly zero.
    pub zero_runs: Vec<(i64, i64)>,
}

impl Serialize for SparseProduct {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SparseProduct", 4)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("d_prime", &self.d_prime)?;
        st.serialize_field("zero_runs", &self.zero_runs)?;
        st.serialize_field("F", &self.f)?;
        st.end()
    }
}

/// Computes the sparse product exactly.
pub fn sparse_product(
    g: &CosinePoly,
    q: &CompanionPoly,
    d_prime: usize,
) -> Result<SparseProduct> {
    if d_prime == 0 {
        return Err(CoslabError::InvalidInput("d' must be positive".into()));
    }
    if g.is_zero() {
        return Err(CoslabError::IdenticallyZero);
    }
    let n = g.degree() as i64;
    let big_g = shift_laurent(&g.to_laurent().scale(&rat_int(2)), n);
    let mut v = BTreeMap::new();
    v.insert(0i64, rat_int(1));
    v.insert(d_prime as i64, rat_int(-2));
    v.insert(2 * d_prime as i64, rat_int(1));
    let f = big_g.multiply(&q.poly).multiply(&LaurentPoly::new(v));
    let count = f.coeffs().len();
    let lo = f.min_deg().unwrap_or(0);
    let hi = f.max_deg().unwrap_or(0);
    debug_assert_eq!(lo, 0, "lowest coefficient a_N·q_0 cannot vanish");
    let mut zero_runs = Vec::new();
    let mut prev = lo - 1;
    for m in f.support().chain(std::iter::once(hi + 1)) {
        if m > prev + 1 {
            zero_runs.push((prev + 1, m - 1));
        }
        prev = m;
    }
    Ok(SparseProduct { f, q: count, d_prime, zero_runs })
}

/// Sign-change count above which the pipeline stops building companion
/// polynomials (degree 2d would dwarf the long-interval threshold) and
/// uses the trivial `Q = 1` instead.
const COMPANION_D_CAP: usize = 6;

/// Searches `d' ∈ [1, d_prime_bound]` for the sparsest product, reads
/// off the recurrence from its zero runs, certifies root-of-unity
/// structure on every long run, and assembles a partition of `[0, N]`
/// with period `P = d'`: verified periodic intervals from the run
/// interiors (greedily extended while exact periodicity holds), unit
/// intervals elsewhere.
pub fn structure_pipeline(g: &CosinePoly, d_prime_bound: usize) -> Result<PeriodicPartition> {
    if d_prime_bound == 0 {
        return Err(CoslabError::InvalidInput("d' bound must be positive".into()));
    }
    if g.is_zero() {
        return Err(CoslabError::IdenticallyZero);
    }
    let d = sign_change_points(g, &default_report_width())?.len();
    if d == 0 {
        return Err(CoslabError::InvalidInput(
            "structure search needs at least one sign change".into(),
        ));
    }
    let b_seq = big_coeff_sequence(g);

    let mut candidates = Vec::new();
    for d_prime in 1..=d_prime_bound {
        let q_poly = if d <= COMPANION_D_CAP {
            match companion(g, d_prime, EPS_GRID) {
                Ok(q) => q,
                Err(CoslabError::EpsilonSearchFailed(_)) => CompanionPoly::trivial(),
                Err(e) => return Err(e),
            }
        } else {
            CompanionPoly::trivial()
        };
        let sp = sparse_product(g, &q_poly, d_prime)?;
        candidates.push((sp.q, d_prime, q_poly, sp));
    }
    candidates.sort_by_key(|(q, d_prime, _, _)| (*q, *d_prime));

    let mut best_q = usize::MAX;
    for (q_count, d_prime, q_poly, sp) in &candidates {
        best_q = best_q.min(*q_count);
        if let Some(partition) = derive_partition(g, &b_seq, q_poly, sp, *d_prime)? {
            return Ok(partition);
        }
    }
    Err(CoslabError::NoStructureFound(format!(
        "no d' in [1, {d_prime_bound}] produced a long recurrence interval \
         (sparsest product had {best_q} nonzero coefficients)"
    )))
}

/// Attempts to turn one sparse product into a verified partition;
/// `Ok(None)` means this `d'` admits no long interval.
fn derive_partition(
    g: &CosinePoly,
    b_seq: &[Rat],
    q_poly: &CompanionPoly,
    sp: &SparseProduct,
    d_prime: usize,
) -> Result<Option<PeriodicPartition>> {
    let n = g.degree() as i64;
    let big_d = (2 * q_poly.d + 2 * d_prime) as i64;

    // reversed coefficients of G̃ = Q(z)(z^{d'}-1)²: the recurrence vector
    let mut v = BTreeMap::new();
    v.insert(0i64, rat_int(1));
    v.insert(d_prime as i64, rat_int(-2));
    v.insert(2 * d_prime as i64, rat_int(1));
    let g_tilde = q_poly.poly.multiply(&LaurentPoly::new(v));
    debug_assert_eq!(g_tilde.max_deg(), Some(big_d));
    let recurrence: Vec<Rat> = (0..=big_d).rev().map(|m| g_tilde.coeff(m)).collect();

    let mut long_intervals: Vec<(usize, usize)> = Vec::new();
    for &(r1, r2) in &sp.zero_runs {
        // only F-indices in [D, 2N] correspond to genuine windows of b
        let m1 = r1.max(big_d);
        let m2 = r2.min(2 * n);
        if m1 > m2 {
            continue;
        }
        let (x, y) = (m1 - big_d, m2);
        if y - x + 1 < 3 * big_d + 1 {
            continue;
        }
        let ws = window_space(b_seq, big_d as usize + 1, x as usize, y as usize)?;
        debug_assert!(ws.dim <= big_d as usize, "recurrence forces a rank deficit");
        match decompose_periodic(b_seq, &recurrence, x as usize, y as usize) {
            Ok(terms) => {
                if terms.iter().any(|t| d_prime % t.period != 0) {
                    continue;
                }
            }
            Err(CoslabError::NoStructureFound(_))
            | Err(CoslabError::NoUnityRoots)
            | Err(CoslabError::NotPeriodicOnRange(_))
            | Err(CoslabError::RangeTooShort(_)) => continue,
            Err(e) => return Err(e),
        }
        // periodic interior in b-indices, mapped to the a-range [1, N]
        // (index N of b carries 2a_0 and is excluded from the transfer)
        let ib_lo = (x + 2 * big_d).max(n + 1);
        let ib_hi = (y - 2 * big_d).min(2 * n);
        if ib_lo > ib_hi {
            continue;
        }
        let mut lo = (ib_lo - n) as usize;
        let mut hi = (ib_hi - n) as usize;
        // greedy exact extension in the a-sequence
        while lo > 0 && lo - 1 + d_prime <= hi && g.coeff(lo - 1) == g.coeff(lo - 1 + d_prime) {
            lo -= 1;
        }
        while hi + 1 <= n as usize
            && hi + 1 >= lo + d_prime
            && g.coeff(hi + 1 - d_prime) == g.coeff(hi + 1)
        {
            hi += 1;
        }
        long_intervals.push((lo, hi));
    }
    if long_intervals.is_empty() {
        return Ok(None);
    }
    long_intervals.sort_unstable();
    // resolve overlaps from independent extensions: keep earlier, trim later
    let mut resolved: Vec<(usize, usize)> = Vec::new();
    for (lo, hi) in long_intervals {
        match resolved.last_mut() {
            Some((_, ph)) if lo <= *ph => {
                if hi > *ph {
                    let nl = *ph + 1;
                    if nl <= hi && verified_periodic(g, nl, hi, d_prime) {
                        resolved.push((nl, hi));
                    }
                }
            }
            _ => resolved.push((lo, hi)),
        }
    }
    let mut intervals = Vec::new();
    let mut next = 0usize;
    for &(lo, hi) in &resolved {
        for i in next..lo {
            intervals.push((i, i));
        }
        intervals.push((lo, hi));
        next = hi + 1;
    }
    for i in next..=n as usize {
        intervals.push((i, i));
    }
    let partition = PeriodicPartition::from_intervals(g, intervals, d_prime)?;
    debug_assert!(
        find_periodic_partition(g.coeffs(), d_prime).map(|p| p.k()).unwrap_or(usize::MAX)
            <= partition.k(),
        "left-greedy partition is minimal"
    );
    Ok(Some(partition))
}

fn verified_periodic(g: &CosinePoly, lo: usize, hi: usize, p: usize) -> bool {
    (lo..=hi.saturating_sub(p)).all(|i| g.coeff(i) == g.coeff(i + p))
}
