//! Exact and certified numerics for counting zeros of cosine polynomials
//! with restricted coefficients, together with the constructive apparatus
//! built on top of that counting: spectral smoothing, sine-integral
//! estimates, L1 lower bounds, periodic-structure decomposition, and a
//! search harness.
//!
//! Everything user-facing is either exact (rational / algebraic) or carries
//! a rigorous error radius; no result is reported on the strength of bare
//! floating point.

pub mod ceval;
pub mod dd;
pub mod error;
pub mod fixed;
pub mod cyclo;
pub mod harness;
pub mod interval;
pub mod l1;
pub mod poly;
pub mod scalar;
pub mod sine_integral;
pub mod smoothing;
pub mod structure;
pub mod zeros;

pub use ceval::CertValue;
pub use error::{CoslabError, Result};
pub use harness::{
    brute_force_z, completed_sets, end_to_end, load, persist, verify_master, verify_sample,
    BruteForceOutcome, InequalityReport, LoadOutcome, SearchRecord,
};
pub use poly::{CoeffSet, CosinePoly, LaurentPoly};
pub use scalar::Rat;
pub use l1::{
    block_coverage_inequality, l1_norm, l1_norm_with_flips, littlewood_lower, sandwich_report,
    sup_abs_antiderivative, L1Report,
};
pub use sine_integral::{
    dirichlet_integral, si, tail_bound_check, window_sum, SiValue, TailBound, WindowFamily,
};
pub use smoothing::{block_form, build_tilde, fejer_square_kernel, BlockForm, PeriodicPartition};
pub use structure::{
    big_coeff_sequence, companion, correlation_sides, decompose_periodic,
    find_periodic_partition, sparse_product, structure_pipeline, window_space, CompanionPoly,
    PeriodicTerm, SparseProduct, WindowSpace,
};
pub use zeros::{count_zeros, sign_change_points, ZeroReport};
