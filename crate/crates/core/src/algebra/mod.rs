//! Quasi-shuffle algebra of harmonic sums: products, the Euler relation,
//! and reduction to the Lyndon-word basis.

mod poly;
mod reduce;
mod stuffle;

pub use poly::{Monomial, SumPolynomial};
pub use reduce::{algebraic_basis, algebraic_reduce, basis_census, is_lyndon, lyndon_factorize, Census};
pub use stuffle::{euler_pair, product, wedge, EulerCheck};
