//! Subdivision operators `(S_T f)_alpha = sum_beta A_{alpha - M beta} f_beta`,
//! their norms and the convergence and smoothness certificates built on them.
//!
//! Coefficients of a polynomial `t` are read as `a_alpha = t^(alpha)`, so the
//! generating function of `S_t f` is `t(x) F(M* x)`.

mod difference;
mod mask;
mod norm;
mod sequence;
mod verdict;

pub use difference::{difference_symbol, matrix_difference_symbol};
pub use mask::{CoefficientMap, MatrixMask};
pub use norm::{coset_sums, norm_trajectory, operator_norm, power_symbol, DEFAULT_TERM_BUDGET};
pub use sequence::{apply, gradient, Sequence};
pub use verdict::{
    check_c1, check_convergence, refine, ConvergenceReport, Refinement, SmoothnessReport, Verdict,
};
