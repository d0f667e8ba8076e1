//! Quick phase-timing harness for the zero-counting engines (dev tool).

use coslab_core::poly::CosinePoly;
use coslab_core::zeros::intpoly::{chebyshev_form, SturmChain};
use coslab_core::zeros::scan::scan_sign_changes;
use coslab_core::zeros::{count_zeros, default_report_width};
use std::time::Instant;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(72);
    let coeffs = vec![1i64; n + 1];
    let p = CosinePoly::from_ints(&coeffs);

    let t0 = Instant::now();
    let q = chebyshev_form(&p);
    println!("chebyshev_form: {:?} (deg {})", t0.elapsed(), q.degree());

    let t0 = Instant::now();
    let s = q.square_free();
    println!("square_free:    {:?} (deg {})", t0.elapsed(), s.degree());

    let t0 = Instant::now();
    let chain = SturmChain::new(&s);
    let max_bits = chain.max_coeff_bits();
    println!("sturm chain:    {:?} (len {}, max coeff bits {})", t0.elapsed(), chain.len(), max_bits);

    let t0 = Instant::now();
    let va = chain.variations_at(&coslab_core::scalar::rat_int(-1));
    let vb = chain.variations_at(&coslab_core::scalar::rat_int(1));
    println!("variations x2:  {:?} (roots in (-1,1]: {})", t0.elapsed(), va - vb);

    if n <= 192 {
        let t0 = Instant::now();
        let r = count_zeros(&p).unwrap();
        println!("count_zeros:    {:?} (Z={}, d={})", t0.elapsed(), r.z, r.d);
    }

    let t0 = Instant::now();
    let sc = scan_sign_changes(&p, &default_report_width()).unwrap();
    println!("scan:           {:?} (d={})", t0.elapsed(), sc.len());

    // primitive costs
    let ev = coslab_core::ceval::DdEval::new(&p);
    let t0 = Instant::now();
    let mut acc = 0.0;
    for i in 0..10_000 {
        acc += ev.eval(0.3 + (i as f64) * 1e-5).value;
    }
    println!("dd eval x10k:   {:?} (acc {acc:.3})", t0.elapsed());

    let t0 = Instant::now();
    let iv = coslab_core::ceval::eval_rat(&p, &coslab_core::scalar::rat(3, 10), 96);
    println!("eval_rat@96:    {:?} (width {:.3e})", t0.elapsed(), coslab_core::scalar::rat_to_f64(&iv.width()));

    let t0 = Instant::now();
    let c = coslab_core::interval::cos_interval(
        &coslab_core::interval::RatInterval::point(coslab_core::scalar::rat(355, 113)),
        96,
    );
    println!("cos_ivl@96:     {:?} (width {:.3e})", t0.elapsed(), coslab_core::scalar::rat_to_f64(&c.width()));

    let t0 = Instant::now();
    let s = coslab_core::ceval::sign_at(&p, &coslab_core::scalar::rat(3, 10)).unwrap();
    println!("sign_at:        {:?} ({s:?})", t0.elapsed());
}
