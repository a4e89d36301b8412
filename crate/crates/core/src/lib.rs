//! Exact polyphase decompositions of multivariate trigonometric masks relative
//! to a general integer dilation matrix, and the convergence and C^1
//! certificates for scalar subdivision schemes built on them.
//!
//! Everything is computed exactly: coefficients live in cyclotomic fields and
//! operator norms are returned as certified rational intervals.

pub mod cyclotomic;
pub mod decompose;
pub mod error;
pub mod interval;
pub mod io;
pub mod lattice;
pub mod subdivision;
pub mod trigpoly;
pub mod zerocond;

pub use cyclotomic::Cyclotomic;
pub use decompose::{
    algorithm1, algorithm2, decompose, iterated_decomposition, kronecker_power, verify_iterated,
    IteratedDecomposition, MaskDecomposition,
};
pub use error::{Error, Result};
pub use interval::Interval;
pub use lattice::{DigitStrategy, DilationContext, IVec, IntMatrix, Isotropy, QVec};
pub use subdivision::{MatrixMask, Sequence, Verdict};
pub use trigpoly::{MultiIndex, TrigPoly};
pub use zerocond::{
    g_poly, h_poly, lambda_parameters, mask_from_lambdas, zero_condition_order, LambdaTable,
};
