//! Large-argument expansions and continuation of sums to complex `N`.
//!
//! Sums are evaluated far out, where an asymptotic series is accurate, and
//! brought back with the one-step recursions in `N`. The recursions are
//! singular at the negative integers. Some of those points are removable
//! (a leading index 1 cancels the pole at the next integer down), but
//! evaluation within `10^(-P/2)` of any of them is refused.

mod bernoulli;
mod continuation;
mod expansion;
mod factorial;

pub use bernoulli::bernoulli_upto;
pub use continuation::{
    continue_sum, route, Branch, ContinuationConfig, Continuator, Route, DEFAULT_TERMS, PHI_MAX,
};
pub use expansion::{order_for, LogExpansion, SumExpansions};
pub use factorial::{
    asym_eval, factorial_to_inverse_powers, li_kernel, series_from_kernel, series_from_kernel_to, tabulated,
    taylor_at_one, AsymValue, AsymptoticSeries, CoefficientEntry, DEFAULT_ORDER, LI5_TABULATED,
};
