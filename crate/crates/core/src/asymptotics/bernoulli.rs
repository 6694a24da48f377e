use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_upto(n: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut table = CACHE.get_or_init(|| Mutex::new(vec![Rational::from(1)])).lock().expect("bernoulli cache");
    while table.len() <= n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let m = table.len();
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            let c = Integer::from(Integer::binomial_u(m as u32 + 1, j as u32));
            acc += Rational::from(b * c);
        }
        let next = -acc / Integer::from(m + 1);
        table.push(next);
    }
    table[..=n].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let b = bernoulli_upto(12);
        let q = |p: i64, r: i64| Rational::from((p, r));
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[12], q(-691, 2730));
        assert!(b[3] == 0 && b[11] == 0);
    }
}
