//! Nested harmonic sums up to weight 6.
//!
//! Exact evaluation, quasi-shuffle algebra, Mellin transforms of
//! polylogarithmic kernels, identity verification and analytic
//! continuation to non-integer arguments.

pub mod algebra;
pub mod asymptotics;
pub mod error;
pub mod expr;
pub mod identities;
pub mod mellin;
pub mod num;
pub mod par;
pub mod specfun;
pub mod sums;

pub use error::{Error, Result};
pub use num::{BigComplex, BigReal, Precision};
pub use sums::{eval_exact, ExactValue, IndexVector};
