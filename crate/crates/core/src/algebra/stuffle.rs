use std::collections::BTreeMap;

use rug::{Integer, Rational};
use serde::Serialize;

use super::SumPolynomial;
use crate::error::Result;
use crate::sums::{eval_exact, ExactValue, IndexVector};

/// `a ∧ b = sign(a) sign(b) (|a| + |b|)`.
pub fn wedge(a: i32, b: i32) -> i32 {
    a.signum() * b.signum() * (a.abs() + b.abs())
}

pub(crate) type WordSum = BTreeMap<Vec<i32>, Integer>;

fn add_prefixed(out: &mut WordSum, head: i32, tail: WordSum, sign: i32) {
    for (w, c) in tail {
        let mut word = Vec::with_capacity(w.len() + 1);
        word.push(head);
        word.extend(w);
        let e = out.entry(word).or_default();
        if sign > 0 {
            *e += c;
        } else {
            *e -= c;
        }
    }
}

/// Quasi-shuffle of two index words (outermost index first):
/// `a ā * b b̄ = a (ā * b b̄) + b (a ā * b̄) - (a∧b)(ā * b̄)`.
pub(crate) fn stuffle_words(a: &[i32], b: &[i32]) -> WordSum {
    if a.is_empty() || b.is_empty() {
        let w = if a.is_empty() { b } else { a };
        return WordSum::from([(w.to_vec(), Integer::from(1))]);
    }
    let mut out = WordSum::new();
    add_prefixed(&mut out, a[0], stuffle_words(&a[1..], b), 1);
    add_prefixed(&mut out, b[0], stuffle_words(a, &b[1..]), 1);
    add_prefixed(&mut out, wedge(a[0], b[0]), stuffle_words(&a[1..], &b[1..]), -1);
    out.retain(|_, c| *c != 0);
    out
}

/// Product of a word sum with one more word.
pub(crate) fn stuffle_sum(lhs: &WordSum, b: &[i32]) -> WordSum {
    let mut out = WordSum::new();
    for (w, c) in lhs {
        for (u, k) in stuffle_words(w, b) {
            *out.entry(u).or_default() += Integer::from(c * &k);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub(crate) fn words_to_poly(ws: WordSum) -> SumPolynomial {
    let mut p = SumPolynomial::zero();
    for (w, c) in ws {
        let v = IndexVector::new(w).expect("stuffle keeps indices nonzero");
        p.add_term(vec![v], Rational::from(c));
    }
    p
}

/// `S_u(N) S_v(N)` as a linear combination of single sums.
pub fn product(u: &IndexVector, v: &IndexVector) -> SumPolynomial {
    words_to_poly(stuffle_words(u.entries(), v.entries()))
}

/// Both sides of `S_{a,b} + S_{b,a} = S_a S_b + S_{a∧b}` at one `N`.
#[derive(Clone, Debug, Serialize)]
pub struct EulerCheck {
    pub a: i32,
    pub b: i32,
    pub n: i64,
    pub lhs: ExactValue,
    pub rhs: ExactValue,
    pub holds: bool,
}

pub fn euler_pair(a: i32, b: i32, n: i64) -> Result<EulerCheck> {
    let sa = IndexVector::new(vec![a])?;
    let sb = IndexVector::new(vec![b])?;
    let e = |v: Vec<i32>| -> Result<Rational> { Ok(eval_exact(&IndexVector::new(v)?, n)?.into_rational()) };
    let lhs = e(vec![a, b])? + e(vec![b, a])?;
    let rhs = Rational::from(eval_exact(&sa, n)?.rational() * eval_exact(&sb, n)?.rational()) + e(vec![wedge(a, b)])?;
    let holds = lhs == rhs;
    Ok(EulerCheck { a, b, n, lhs: ExactValue::new(lhs), rhs: ExactValue::new(rhs), holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rational;
    use crate::sums::iv;

    #[test]
    fn small_products() {
        let p = product(&iv(&[1]), &iv(&[1]));
        assert_eq!(p.to_string(), "2*S[1,1](N) - S[2](N)");
        let p = product(&iv(&[2]), &iv(&[3]));
        assert_eq!(p.coefficient(&[iv(&[5])]), rational(-1, 1));
        assert_eq!(p.coefficient(&[iv(&[2, 3])]), rational(1, 1));
        let p = product(&iv(&[-3]), &iv(&[3]));
        assert_eq!(p.coefficient(&[iv(&[-6])]), rational(-1, 1));
        assert_eq!(p.coefficient(&[iv(&[3, -3])]), rational(1, 1));
    }

    #[test]
    fn euler_examples() {
        assert!(euler_pair(3, 3, 4).unwrap().holds);
        assert!(euler_pair(-3, -3, 5).unwrap().holds);
        let c = euler_pair(1, 2, 1).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs.to_string(), "2");
        assert!(euler_pair(0, 2, 1).is_err());
    }
}
