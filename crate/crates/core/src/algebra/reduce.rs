use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Rational;
use serde::Serialize;

use super::stuffle::{stuffle_sum, WordSum};
use super::SumPolynomial;
use crate::sums::{cmp_words, enumerate, IndexVector};

/// A word is Lyndon when it is strictly smaller than each proper suffix.
pub fn is_lyndon(w: &[i32]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| cmp_words(w, &w[i..]) == Ordering::Less)
}

/// Chen-Fox-Lyndon factorization `w = l1 l2 ... lk`, `l1 >= l2 >= ... >= lk`
/// (Duval's algorithm).
pub fn lyndon_factorize(w: &[i32]) -> Vec<Vec<i32>> {
    let key = |a: i32| crate::sums::letter_key(a);
    let n = w.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let (mut j, mut k) = (i + 1, i);
        while j < n && key(w[k]) <= key(w[j]) {
            k = if key(w[k]) < key(w[j]) { i } else { k + 1 };
            j += 1;
        }
        while i <= k {
            out.push(w[i..i + j - k].to_vec());
            i += j - k;
        }
    }
    out
}

fn cache() -> &'static Mutex<HashMap<Vec<i32>, SumPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<i32>, SumPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn reduce_word(w: &[i32]) -> SumPolynomial {
    if let Some(p) = cache().lock().expect("cache poisoned").get(w) {
        return p.clone();
    }
    let factors = lyndon_factorize(w);
    let result = if factors.len() == 1 {
        SumPolynomial::single(IndexVector::new(w.to_vec()).expect("valid word"))
    } else {
        // The stuffle product of the factors is c*w plus words that are
        // shorter, or of equal length and lexicographically smaller, so
        // the system is triangular and solved by back substitution.
        let mut prod = WordSum::from([(factors[0].clone(), 1.into())]);
        for f in &factors[1..] {
            prod = stuffle_sum(&prod, f);
        }
        let lead = Rational::from(prod.remove(w).expect("leading word present in its own factor product"));
        let monomial = factors.iter().map(|f| IndexVector::new(f.clone()).expect("valid factor")).collect();
        let mut out = SumPolynomial::monomial(monomial, Rational::from(1));
        for (u, c) in prod {
            debug_assert!(u.len() < w.len() || cmp_words(&u, w) == Ordering::Less);
            out.add_scaled(&reduce_word(&u), &Rational::from(-c));
        }
        out.scaled(&lead.recip())
    };
    cache().lock().expect("cache poisoned").insert(w.to_vec(), result.clone());
    result
}

/// `S_v` as a polynomial in Lyndon-word sums; Lyndon `v` map to themselves.
pub fn algebraic_reduce(v: &IndexVector) -> SumPolynomial {
    reduce_word(v.entries())
}

/// Sums of weight `w` that are algebraically irreducible.
pub fn algebraic_basis(w: u32, exclude_minus_one: bool) -> Vec<IndexVector> {
    enumerate(w, exclude_minus_one).into_iter().filter(|v| is_lyndon(v.entries())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub weight: u32,
    pub exclude_minus_one: bool,
    pub total: usize,
    pub algebraic_basis_count: usize,
}

pub fn basis_census(w: u32, exclude_minus_one: bool) -> Census {
    let all = enumerate(w, exclude_minus_one);
    let algebraic_basis_count = all.iter().filter(|v| is_lyndon(v.entries())).count();
    Census { weight: w, exclude_minus_one, total: all.len(), algebraic_basis_count }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rational;
    use crate::sums::{eval_exact_upto, iv};

    #[test]
    fn lyndon_words() {
        assert!(is_lyndon(&[1, 2]));
        assert!(!is_lyndon(&[2, 1]));
        assert!(!is_lyndon(&[1, 1]));
        assert!(is_lyndon(&[1, 1, 1, 1, 2]));
        assert!(is_lyndon(&[1, -1]));
        assert_eq!(lyndon_factorize(&[2, 1, 1, 1, 1]), vec![vec![2], vec![1], vec![1], vec![1], vec![1]]);
        assert_eq!(lyndon_factorize(&[1, 2, 1, 2, 1]), vec![vec![1, 2], vec![1, 2], vec![1]]);
    }

    #[test]
    fn census_counts() {
        assert_eq!(basis_census(6, true).total, 99);
        assert_eq!(basis_census(6, true).algebraic_basis_count, 30);
        assert_eq!(basis_census(1, true).algebraic_basis_count, 1);
        assert_eq!(basis_census(6, false).total, 486);
    }

    #[test]
    fn all_ones_reduces_to_single_sums() {
        let p = algebraic_reduce(&iv(&[1, 1, 1, 1, 1, 1]));
        assert_eq!(p.len(), 11);
        assert_eq!(p.coefficient(&vec![iv(&[1]); 6]), rational(1, 720));
        assert_eq!(p.coefficient(&[iv(&[6])]), rational(1, 6));
        assert_eq!(p.coefficient(&[iv(&[2]), iv(&[2]), iv(&[2])]), rational(1, 48));
        assert!(p.factors().iter().all(|v| v.depth() == 1));
    }

    #[test]
    fn reductions_are_exact() {
        for w in 2..=5 {
            for v in enumerate(w, false) {
                let p = algebraic_reduce(&v);
                assert!(p.is_homogeneous());
                assert!(p.factors().iter().all(|f| is_lyndon(f.entries())));
                assert_eq!(p.eval_exact_upto(8), eval_exact_upto(&v, 8), "{v:?}");
            }
        }
    }

    #[test]
    fn basic_sums_are_fixed_points() {
        let v = iv(&[1, 1, 1, 1, 2]);
        assert_eq!(algebraic_reduce(&v), SumPolynomial::single(v));
    }
}
