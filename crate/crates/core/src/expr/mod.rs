//! Expression trees shared by the catalog and the command line: harmonic
//! sums, Mellin atoms, named constants, functions of `x` and rational
//! arithmetic, with a parser, a printer that round-trips through it, a
//! weight checker and an evaluator.

mod ast;
mod eval;
mod kernel;
mod parse;
mod weight;

pub use ast::{Affine, Denominator, Expr, MellinAtom};
pub use eval::{eval_rational, Env, Evaluator};
pub use kernel::Kernel;
pub use parse::parse;
pub use weight::{term_weights, weight};
