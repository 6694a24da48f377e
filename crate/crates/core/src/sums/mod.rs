//! Index vectors, exact evaluation at positive integers, and the
//! `N -> ∞` limits.

mod exact;
mod index;
mod limit;

pub use exact::{eval_exact, eval_exact_upto, eval_float_upto, ExactValue};
pub use index::{enumerate, iv, IndexVector};
#[allow(unused_imports)]
pub(crate) use index::{cmp_words, letter_key, weight_of};
pub use limit::{limit_value, LimitClass};
