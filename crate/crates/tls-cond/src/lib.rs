//! Total least squares (TLS) solver and condition number estimation for
//! a linear function `L^T x` of the TLS solution.
//!
//! Four routes compute the same condition number and cross-check each
//! other: a closed formula through the shifted normal matrix, an SVD
//! formula using the right singular vectors of `A` and `[A,b]`, a
//! matrix-free power method on the Fréchet derivative and its adjoint,
//! and a dense Kronecker-form oracle for small problems. Two upper
//! bounds and reproducible numerical experiments round out the crate.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod io;
pub mod iterative;
pub mod linalg;
pub mod matrix;
pub mod report;
pub mod tls;

#[cfg(test)]
mod testutil;

pub use bounds::{
    bounds_report, kappa_vanhuffel, kronecker_matrix, kronecker_matrix_capped, oracle_condition,
    upper_bound_kbar, BoundsReport, DEFAULT_SIZE_CAP,
};
pub use error::Error;
pub use exact::{
    condition_closed, condition_relative, condition_svd, ConditionReport, MapKind, Method,
    ObservationMap,
};
pub use experiments::{
    analytic_base, derive_seed, gen_analytic_problem, gen_householder_problem, perturb,
    run_table1, run_table2, table2_row, AnalyticBase, Table1Row, Table2Row,
};
pub use iterative::{
    apply_adjoint, apply_derivative, component_condition, power_condition, PerturbationPair,
    PowerOutcome, PowerSettings,
};
pub use linalg::{
    kron, product_norm, spectral_norm, svd, vec_stack, vec_transpose_permutation, SvdResult,
};
pub use matrix::DenseMatrix;
pub use tls::{solution_via_normal_equations, solve_tls, TlsProblem, TlsSolution, DEFAULT_GAP_TOL};
