//! MAP inference for the relaxed objective by consensus ADMM. An exhaustive
//! binary search serves as the oracle on small problems.

mod admm;
mod brute;
mod problem;
mod prox;

pub use admm::{admm_solve, write_trace_csv, SolverOptions, SolverResult, TraceRow};
pub use brute::{brute_force_binary, MAX_BRUTE_FORCE_UNKNOWNS};
pub use problem::{build_problem, HingePotential, HlMrfProblem};
pub use prox::prox_step;

use crate::scalar::Scalar;

/// `x_e >= threshold` maps to positive.
pub fn round_solution<T: Scalar>(x: &[T], threshold: T) -> Vec<bool> {
    x.iter().map(|&v| v >= threshold).collect()
}
