//! Experiment harness: exhaustive box-restricted search for the minimal
//! zero count over frequency sets of a given size, the master-inequality
//! report chaining every certified quantity together, end-to-end runs
//! through structure discovery, and append-only JSONL persistence.
//!
//! The search enumerates frequency sets `A ⊆ [0, box]` with `|A| = N` in
//! colexicographic order and reports the minimum of `Z(f_A)` where
//! `f_A(θ) = Σ_{n∈A} cos nθ`. The true minimum over unbounded frequency
//! sets is out of reach by construction; everything here is an upper
//! bound labeled by its box.

use crate::error::{CoslabError, Result};
use crate::poly::CosinePoly;
use crate::scalar::{rat_to_f64, Rat};
use crate::smoothing::PeriodicPartition;
use crate::structure::structure_pipeline;
use crate::zeros::{count_zeros, default_report_width, sign_change_points};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

/// One evaluated frequency set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    /// Sorted frequency set.
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    /// `|A|`.
    #[serde(rename = "N")]
    pub n: usize,
    /// Distinct zeros of `f_A` in `[0, 2π)`.
    #[serde(rename = "Z")]
    pub z: u64,
    /// Sign changes of `f_A` in `(0, π)`.
    pub d: u64,
    /// Maximum frequency allowed in the enumeration.
    #[serde(rename = "box")]
    pub box_m: u64,
    /// Wall-clock stamp; empty when produced by the library (the caller
    /// stamps it so that search output stays bit-deterministic).
    pub timestamp: String,
    /// RNG seed when the producing run was randomized; exhaustive
    /// searches leave it empty.
    pub seed: Option<u64>,
}

/// Result of an exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceOutcome {
    /// Minimal `Z` over the enumerated (non-skipped) sets.
    pub min_z: Option<u64>,
    /// Every set attaining the minimum, in enumeration order.
    pub minimizers: Vec<Vec<u64>>,
    /// All evaluated records, in colexicographic order of `A`.
    pub records: Vec<SearchRecord>,
}

/// Guard against accidentally unbounded enumerations.
const MAX_SUBSETS: u128 = 1 << 30;

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The rank-th size-`n` subset of the nonnegative integers in
/// colexicographic order: `rank = Σ_i C(c_i, i)` over positions
/// `i = 1..=n` with `c_1 < … < c_n`.
fn colex_unrank(mut rank: u128, n: usize) -> Vec<u64> {
    let mut set = vec![0u64; n];
    for i in (1..=n).rev() {
        let mut c = i as u64 - 1;
        while binomial(c + 1, i as u64) <= rank {
            c += 1;
        }
        set[i - 1] = c;
        rank -= binomial(c, i as u64);
    }
    set
}

/// Advances a sorted set to its colexicographic successor within
/// `[0, box_m]`; returns false when the enumeration is exhausted.
fn colex_next(set: &mut [u64], box_m: u64) -> bool {
    let n = set.len();
    for i in 0..n {
        let limit = if i + 1 < n { set[i + 1] } else { box_m + 1 };
        if set[i] + 1 < limit {
            set[i] += 1;
            for (j, slot) in set.iter_mut().enumerate().take(i) {
                *slot = j as u64;
            }
            return true;
        }
    }
    false
}

fn record_for(a: &[u64], box_m: u64) -> Result<SearchRecord> {
    let deg = *a.last().expect("nonempty set") as usize;
    let mut coeffs = vec![0i64; deg + 1];
    for &f in a {
        coeffs[f as usize] = 1;
    }
    let poly = CosinePoly::from_ints(&coeffs);
    let report = count_zeros(&poly)?;
    Ok(SearchRecord {
        a: a.to_vec(),
        n: a.len(),
        z: report.z,
        d: report.d,
        box_m,
        timestamp: String::new(),
        seed: None,
    })
}

/// Exhaustively evaluates `Z(f_A)` over all `C(box+1, N)` frequency sets
/// `A ⊆ [0, box]` with `|A| = N`, in colexicographic order, and returns
/// the minimum with every minimizer. Output is deterministic and
/// independent of the worker count: work is split by rank ranges and
/// merged back in rank order. Sets present in `skip` are not
/// re-evaluated (resumption support); the minimum then covers only the
/// newly evaluated records.
pub fn brute_force_z(
    n: usize,
    box_m: u64,
    parallel: usize,
    skip: Option<&HashSet<Vec<u64>>>,
) -> Result<BruteForceOutcome> {
    if n == 0 {
        return Err(CoslabError::InvalidInput(
            "search needs at least one frequency".into(),
        ));
    }
    if (n as u128) > box_m as u128 + 1 {
        return Err(CoslabError::BoxTooSmall {
            need: n,
            got: box_m as usize + 1,
        });
    }
    let total = binomial(box_m + 1, n as u64);
    if total > MAX_SUBSETS {
        return Err(CoslabError::InvalidInput(format!(
            "{total} subsets exceed the enumeration guard {MAX_SUBSETS}"
        )));
    }

    // fixed-size rank chunks so that chunk boundaries do not depend on
    // the worker count
    const CHUNK: u128 = 256;
    let chunks = total.div_ceil(CHUNK) as usize;
    let compute = || -> Result<Vec<SearchRecord>> {
        use rayon::prelude::*;
        let nested: Vec<Vec<SearchRecord>> = (0..chunks)
            .into_par_iter()
            .map(|ci| {
                let start = ci as u128 * CHUNK;
                let len = CHUNK.min(total - start);
                let mut set = colex_unrank(start, n);
                let mut out = Vec::with_capacity(len as usize);
                for step in 0..len {
                    if skip.is_none_or(|s| !s.contains(&set)) {
                        out.push(record_for(&set, box_m)?);
                    }
                    if step + 1 < len && !colex_next(&mut set, box_m) {
                        break;
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        Ok(nested.into_iter().flatten().collect())
    };
    let records = if parallel == 0 {
        compute()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallel)
            .build()
            .map_err(|e| CoslabError::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(compute)?
    };

    let min_z = records.iter().map(|r| r.z).min();
    let minimizers = match min_z {
        Some(m) => records
            .iter()
            .filter(|r| r.z == m)
            .map(|r| r.a.clone())
            .collect(),
        None => Vec::new(),
    };
    Ok(BruteForceOutcome { min_z, minimizers, records })
}

/// The assembled master-inequality report: every factor of
/// `d · M(S) · P² · ln(KP)` next to `ln|g(0)|`, with the
/// doubly-logarithmic comparison quantity when it is defined.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    /// Human-readable identification of `g`.
    pub descriptor: String,
    /// Sign changes of `g` in `(0, π)`.
    pub d: u64,
    /// Largest coefficient magnitude of the partition alphabet.
    pub m_s: f64,
    pub p: usize,
    pub k: usize,
    pub k_tilde: usize,
    /// `ln|g(0)|`, clamped to 0 when `|g(0)| ≤ 1` (and when `g(0) = 0`).
    pub log_g0: f64,
    /// `d · M(S) · P² · ln(KP)`, with `ln(KP)` floored at `ln 2` so the
    /// trivial partition does not zero out the bound.
    pub lhs: f64,
    /// `log_g0 / lhs`; the fitted family constant is the maximum of
    /// these ratios.
    pub ratio: f64,
    /// `(1/(1+ln M(S))) · (ln ln|g(0)| / ln ln ln|g(0)|)`, present only
    /// when every logarithm is defined and positive (`|g(0)| > e^e`).
    pub theorem_bound: Option<f64>,
}

/// Computes the master-inequality report for a polynomial with a
/// validated partition. Exact inputs (`d`, `M(S)`, `P`, `K`) enter the
/// left side exactly; only the final logarithms are floating-point.
pub fn verify_master(g: &CosinePoly, partition: &PeriodicPartition) -> Result<InequalityReport> {
    partition.validate_against(g)?;
    let d = sign_change_points(g, &default_report_width())?.len() as u64;
    if d == 0 {
        return Err(CoslabError::InvalidInput(
            "master inequality needs at least one sign change".into(),
        ));
    }
    let p = partition.p();
    let k = partition.k();
    let gt = crate::smoothing::build_tilde(g, p)?;
    let bf = crate::smoothing::block_form(&gt, partition)?;
    let m_s_exact: Rat = partition.max_abs_coeff();
    let m_s = rat_to_f64(&m_s_exact);

    let g0 = g.value_at_zero();
    let abs_g0 = rat_to_f64(&g0.abs());
    let log_g0 = if abs_g0 > 1.0 { abs_g0.ln() } else { 0.0 };

    let ln_kp = (((k * p) as f64).ln()).max(std::f64::consts::LN_2);
    let lhs = d as f64 * m_s * (p * p) as f64 * ln_kp;
    let ratio = if lhs > 0.0 { log_g0 / lhs } else { f64::INFINITY };

    let theorem_bound = {
        let l1 = abs_g0.ln();
        let scale = 1.0 + m_s.ln();
        if l1 > 1.0 && scale > 0.0 {
            let l2 = l1.ln();
            let l3 = l2.ln();
            (l3 > 0.0).then(|| (l2 / l3) / scale)
        } else {
            None
        }
    };

    Ok(InequalityReport {
        descriptor: format!("deg {} P {} K {}", g.degree(), p, k),
        d,
        m_s,
        p,
        k,
        k_tilde: bf.k_tilde(),
        log_g0,
        lhs,
        ratio,
        theorem_bound,
    })
}

/// Full chain on a bare polynomial: discover a partition with the
/// structure pipeline, then assemble the master-inequality report. A
/// `NoStructureFound` error is a legitimate outcome for noise-like
/// inputs; callers record it as an "unstructured" row.
pub fn end_to_end(g: &CosinePoly, d_prime_bound: usize) -> Result<InequalityReport> {
    let partition = structure_pipeline(g, d_prime_bound)?;
    let mut report = verify_master(g, &partition)?;
    report.descriptor = format!("pipeline {}", report.descriptor);
    Ok(report)
}

/// Appends records to a JSON-lines file (one record per line, created
/// if missing). Single-writer by design.
pub fn persist(records: &[SearchRecord], path: &Path) -> Result<()> {
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r)?);
        buf.push('\n');
    }
    file.write_all(buf.as_bytes())?;
    Ok(())
}

/// Result of loading a JSONL record file.
#[derive(Debug, Clone)]
pub struct LoadOutcome {
    pub records: Vec<SearchRecord>,
    /// 1-based line numbers skipped in lenient mode, with the parse
    /// error for each.
    pub skipped: Vec<(usize, String)>,
}

/// Reads records back from a JSON-lines file. In strict mode the first
/// malformed line aborts with its 1-based line number; in lenient mode
/// malformed lines are collected in `skipped` and parsing continues.
/// Blank lines are ignored in both modes.
pub fn load(path: &Path, lenient: bool) -> Result<LoadOutcome> {
    let file = std::fs::File::open(path)?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<SearchRecord>(&line) {
            Ok(r) => records.push(r),
            Err(e) => {
                if lenient {
                    skipped.push((idx + 1, e.to_string()));
                } else {
                    return Err(CoslabError::InvalidInput(format!(
                        "line {}: {e}",
                        idx + 1
                    )));
                }
            }
        }
    }
    Ok(LoadOutcome { records, skipped })
}

/// The frequency sets already present in a record list, for resuming an
/// interrupted search without re-evaluating them.
pub fn completed_sets(records: &[SearchRecord]) -> HashSet<Vec<u64>> {
    records.iter().map(|r| r.a.clone()).collect()
}

/// Recounts a deterministic sample of records (every `stride`-th one)
/// and errors on the first mismatch between stored and recomputed
/// `(Z, d)`.
pub fn verify_sample(records: &[SearchRecord], stride: usize) -> Result<()> {
    let stride = stride.max(1);
    for r in records.iter().step_by(stride) {
        let fresh = record_for(&r.a, r.box_m)?;
        if fresh.z != r.z || fresh.d != r.d {
            return Err(CoslabError::InvalidInput(format!(
                "record for {:?} claims (Z, d) = ({}, {}), recount gives ({}, {})",
                r.a, r.z, r.d, fresh.z, fresh.d
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn binomial_and_colex_agree() {
        assert_eq!(binomial(15, 5), 3003);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        // unrank round-trips through successor stepping
        let mut set = colex_unrank(0, 3);
        assert_eq!(set, vec![0, 1, 2]);
        let mut seen = vec![set.clone()];
        while colex_next(&mut set, 5) {
            seen.push(set.clone());
        }
        assert_eq!(seen.len() as u128, binomial(6, 3));
        for (rank, s) in seen.iter().enumerate() {
            assert_eq!(&colex_unrank(rank as u128, 3), s, "rank {rank}");
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn singleton_zero_frequency_has_no_zeros() {
        let out = brute_force_z(1, 0, 1, None).unwrap();
        assert_eq!(out.min_z, Some(0));
        assert_eq!(out.minimizers, vec![vec![0]]);
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].d, 0);
    }

    #[test]
    fn singletons_up_to_five_count_cosine_zeros() {
        let out = brute_force_z(1, 5, 1, None).unwrap();
        // cos(nθ) has 2n zeros in [0, 2π); the constant 1 has none
        for r in &out.records {
            let n = r.a[0];
            assert_eq!(r.z, 2 * n, "A = {:?}", r.a);
            assert!(r.z >= r.d);
        }
        assert_eq!(out.min_z, Some(0)); // attained by {0}
        let nonzero_min = out
            .records
            .iter()
            .filter(|r| r.a[0] >= 1)
            .map(|r| r.z)
            .min()
            .unwrap();
        assert_eq!(nonzero_min, 2); // attained at n = 1
    }

    #[test]
    fn search_is_deterministic_across_worker_counts() {
        let one = brute_force_z(3, 8, 1, None).unwrap();
        let four = brute_force_z(3, 8, 4, None).unwrap();
        let default_pool = brute_force_z(3, 8, 0, None).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, default_pool);
        assert_eq!(one.records.len() as u128, binomial(9, 3));
        for r in &one.records {
            assert!(r.z >= r.d);
            assert!(r.a.iter().all(|&f| f <= 8));
        }
    }

    #[test]
    fn known_small_sets_match_hand_counts() {
        let out = brute_force_z(2, 2, 1, None).unwrap();
        let find = |a: &[u64]| out.records.iter().find(|r| r.a == a).unwrap();
        // 1 + cos θ: one distinct zero (second order, at π), no sign change
        let r = find(&[0, 1]);
        assert_eq!((r.z, r.d), (1, 0));
        // cos θ + cos 2θ = 2cos(3θ/2)cos(θ/2): zeros π/3, π, 5π/3
        let r = find(&[1, 2]);
        assert_eq!((r.z, r.d), (3, 1));
    }

    #[test]
    fn min_z_is_monotone_in_the_box() {
        let narrow = brute_force_z(2, 4, 1, None).unwrap().min_z.unwrap();
        let wide = brute_force_z(2, 6, 1, None).unwrap().min_z.unwrap();
        assert!(wide <= narrow);
    }

    #[test]
    fn search_rejects_bad_shapes() {
        assert!(matches!(
            brute_force_z(4, 2, 1, None),
            Err(CoslabError::BoxTooSmall { need: 4, got: 3 })
        ));
        assert!(brute_force_z(0, 5, 1, None).is_err());
    }

    #[test]
    fn resume_skips_completed_sets() {
        let full = brute_force_z(2, 5, 1, None).unwrap();
        let head: Vec<SearchRecord> = full.records[..6].to_vec();
        let done = completed_sets(&head);
        let rest = brute_force_z(2, 5, 1, Some(&done)).unwrap();
        assert_eq!(rest.records.len(), full.records.len() - 6);
        let mut merged = head;
        merged.extend(rest.records.clone());
        assert_eq!(merged, full.records);
    }

    #[test]
    fn master_report_on_dirichlet_255() {
        let g = CosinePoly::from_ints(&vec![1; 256]);
        let part = crate::structure::find_periodic_partition(g.coeffs(), 1).unwrap();
        assert_eq!(part.k(), 1);
        let rep = verify_master(&g, &part).unwrap();
        assert_eq!(rep.d, 254);
        assert_eq!(rep.p, 1);
        assert_eq!(rep.k, 1);
        assert!((rep.m_s - 1.0).abs() < 1e-15);
        assert!((rep.log_g0 - 256f64.ln()).abs() < 1e-12);
        // trivial partition: ln(KP) floored at ln 2
        let expect_lhs = 254.0 * std::f64::consts::LN_2;
        assert!((rep.lhs - expect_lhs).abs() < 1e-9);
        assert!((rep.ratio - rep.log_g0 / rep.lhs).abs() < 1e-15);
        // |g(0)| = 256 > e^e and M(S) = 1: bound = ln ln 256 / ln ln ln 256
        let l2 = 256f64.ln().ln();
        let expected = l2 / l2.ln();
        let tb = rep.theorem_bound.unwrap();
        assert!((tb - expected).abs() < 1e-12, "{tb} vs {expected}");
    }

    #[test]
    fn master_report_clamps_zero_mean_value() {
        // g(0) = 0: the right side clamps to 0 and the bound is trivial
        let g = CosinePoly::from_ints(&[0, 1, -1]);
        let part = crate::structure::find_periodic_partition(g.coeffs(), 1).unwrap();
        let rep = verify_master(&g, &part).unwrap();
        assert_eq!(rep.log_g0, 0.0);
        assert_eq!(rep.ratio, 0.0);
        assert!(rep.theorem_bound.is_none());
        assert!(rep.lhs > 0.0);
    }

    #[test]
    fn master_report_requires_a_sign_change() {
        let g = CosinePoly::from_ints(&[1]);
        let part = crate::structure::find_periodic_partition(g.coeffs(), 1).unwrap();
        assert!(verify_master(&g, &part).is_err());
    }

    #[test]
    fn end_to_end_on_planted_periodic_input() {
        let pat = [1i64, 0, 1, 1];
        let coeffs: Vec<i64> = (0..=63).map(|i| pat[i % 4]).collect();
        let g = CosinePoly::from_ints(&coeffs);
        let rep = end_to_end(&g, 4).unwrap();
        assert_eq!(rep.p, 4);
        assert!(rep.ratio.is_finite());
        assert!(rep.ratio > 0.0);
        assert!(rep.descriptor.starts_with("pipeline"));
    }

    #[test]
    fn end_to_end_propagates_unstructured() {
        let mut state = 0x5151_aaaa_bbbb_1212u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) & 1
        };
        let coeffs: Vec<i64> = (0..48).map(|_| next() as i64).collect();
        let g = CosinePoly::from_ints(&coeffs);
        match end_to_end(&g, 2) {
            Err(CoslabError::NoStructureFound(_)) => {}
            other => panic!("expected NoStructureFound, got {other:?}"),
        }
    }

    fn temp_path(tag: &str) -> std::path::PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("coslab-harness-{tag}-{}.jsonl", std::process::id()));
        p
    }

    #[test]
    fn persist_and_load_round_trip() {
        let out = brute_force_z(2, 6, 1, None).unwrap();
        let path = temp_path("roundtrip");
        let _ = std::fs::remove_file(&path);
        persist(&out.records[..10], &path).unwrap();
        persist(&out.records[10..], &path).unwrap(); // append
        let loaded = load(&path, false).unwrap();
        assert_eq!(loaded.records, out.records);
        assert!(loaded.skipped.is_empty());
        verify_sample(&loaded.records, 7).unwrap();
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn load_reports_corrupt_lines() {
        let out = brute_force_z(1, 3, 1, None).unwrap();
        let path = temp_path("corrupt");
        let _ = std::fs::remove_file(&path);
        persist(&out.records[..2], &path).unwrap();
        {
            use std::io::Write as _;
            let mut f = std::fs::OpenOptions::new().append(true).open(&path).unwrap();
            writeln!(f, "{{ not json").unwrap();
        }
        persist(&out.records[2..], &path).unwrap();

        let err = load(&path, false).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");

        let lenient = load(&path, true).unwrap();
        assert_eq!(lenient.records, out.records);
        assert_eq!(lenient.skipped.len(), 1);
        assert_eq!(lenient.skipped[0].0, 3);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn verify_sample_catches_tampering() {
        let out = brute_force_z(1, 4, 1, None).unwrap();
        let mut records = out.records;
        records[2].z += 1;
        assert!(verify_sample(&records, 1).is_err());
    }

    #[test]
    fn master_sweep_admits_a_single_constant() {
        // structured family sweep: a single fitted constant covers all
        let mut worst: f64 = 0.0;
        for &(p, k) in &[(1usize, 1usize), (2, 1), (2, 2), (4, 2)] {
            let pat: Vec<i64> = (0..p as i64).map(|j| 1 + (j % 2)).collect();
            let n = 32 * p * k;
            let coeffs: Vec<i64> = (0..=n)
                .map(|i| pat[i % p] + (i * k / (n + 1)) as i64)
                .collect();
            let g = CosinePoly::from_ints(&coeffs);
            let part = crate::structure::find_periodic_partition(g.coeffs(), p).unwrap();
            let rep = verify_master(&g, &part).unwrap();
            assert!(rep.ratio.is_finite());
            worst = worst.max(rep.ratio);
        }
        // the fitted constant is the max ratio; it must be positive and
        // modest for this family
        assert!(worst > 0.0 && worst < 10.0, "C_master = {worst}");
    }

    #[test]
    fn records_serialize_with_named_fields() {
        let out = brute_force_z(1, 1, 1, None).unwrap();
        let js = serde_json::to_string(&out.records[0]).unwrap();
        for key in ["\"A\"", "\"N\"", "\"Z\"", "\"d\"", "\"box\"", "\"timestamp\"", "\"seed\""] {
            assert!(js.contains(key), "{js}");
        }
        let back: SearchRecord = serde_json::from_str(&js).unwrap();
        assert_eq!(back, out.records[0]);
    }

    #[test]
    fn hand_partition_feeds_master_report() {
        // an explicitly constructed partition (not pipeline output)
        let coeffs: Vec<i64> = (0..=40).map(|i| if i % 2 == 0 { 2 } else { 1 }).collect();
        let g = CosinePoly::from_ints(&coeffs);
        let part =
            PeriodicPartition::from_intervals(&g, vec![(0, 40)], 2).unwrap();
        let rep = verify_master(&g, &part).unwrap();
        assert_eq!(rep.p, 2);
        assert_eq!(rep.k, 1);
        assert_eq!(rep.m_s, 2.0);
        let g0 = rat_to_f64(&g.value_at_zero().abs());
        assert!((rep.log_g0 - g0.ln()).abs() < 1e-12);
        assert_eq!(rat_int(62), g.value_at_zero());
    }
}
