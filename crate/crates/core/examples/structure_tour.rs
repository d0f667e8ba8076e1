//! End-to-end tour of the structure-discovery pipeline on a coefficient
//! sequence with a planted period, plus the L¹ sandwich built from the
//! recovered partition.
//!
//! Run with: `cargo run --release -p coslab-core --example structure_tour`

use coslab_core::{
    companion, correlation_sides, sandwich_report, sparse_product, structure_pipeline,
    CosinePoly,
};

fn main() -> coslab_core::Result<()> {
    // coefficients with a planted period-6 pattern that switches once
    let pat1 = [1i64, 0, 0, 1, 1, 0];
    let pat2 = [2i64, -1, 0, 1, 0, 2];
    let coeffs: Vec<i64> = (0..=240)
        .map(|i| if i < 150 { pat1[i % 6] } else { pat2[i % 6] })
        .collect();
    let g = CosinePoly::from_ints(&coeffs);

    let partition = structure_pipeline(&g, 6)?;
    println!("recovered period P = {}", partition.p());
    println!("intervals (K = {}):", partition.k());
    for (u, v) in partition.intervals() {
        let tag = if v - u + 1 >= 2 * partition.p() { "long" } else { "unit" };
        println!("  [{u:3}, {v:3}]  {tag}");
    }
    println!("as JSON: {}", serde_json::to_string(&partition)?);

    let report = sandwich_report(&g, &partition)?;
    println!("\nL1 sandwich for the smoothed transform:");
    println!("{}", serde_json::to_string_pretty(&report)?);

    // companion polynomial on a small polynomial with few sign changes
    let small = CosinePoly::from_ints(&[1, 2, 0, -1, 1]);
    let q = companion(&small, 2, 64)?;
    let (lhs, norm) = correlation_sides(&small, &q, 2)?;
    println!(
        "\ncompanion: d = {}, epsilon = {:.3e}, |h_hat(0)| = {:.6} vs half-norm {:.6} (+/- {:.1e})",
        q.d,
        coslab_core::scalar::rat_to_f64(&q.epsilon),
        coslab_core::scalar::rat_to_f64(&lhs),
        0.5 * norm.value,
        0.5 * norm.radius,
    );

    let sp = sparse_product(&small, &q, 2)?;
    println!(
        "sparse product: {} nonzero coefficients, zero runs {:?}",
        sp.q, sp.zero_runs
    );
    Ok(())
}
