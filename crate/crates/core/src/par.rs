//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) work is spread over the rayon
//! pool; [`set_parallel`] switches to the sequential path at run time so
//! both can be timed in one binary. Without the feature everything is
//! sequential.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(cfg!(feature = "parallel"));

/// Enables or disables the parallel path; a no-op without the feature.
pub fn set_parallel(on: bool) {
    ENABLED.store(on && cfg!(feature = "parallel"), Ordering::Relaxed);
}

pub fn is_parallel() -> bool {
    ENABLED.load(Ordering::Relaxed)
}

/// `items.iter().map(f).collect()`, possibly in parallel, order kept.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let v: Vec<u64> = (0..1000).collect();
        let a = map(&v, |x| x * x);
        set_parallel(false);
        let b = map(&v, |x| x * x);
        set_parallel(true);
        assert_eq!(a, b);
    }
}
