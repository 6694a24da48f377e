use std::fmt;

use rug::ops::{Pow, PowAssign};
use rug::{Float, Integer, Rational};
use serde::{Serialize, Serializer};

use super::IndexVector;
use crate::error::{Error, Result};

/// Exact value of a harmonic sum at an integer argument.
///
/// `rug::Rational` keeps every value canonical (`gcd = 1`, positive
/// denominator).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ExactValue(Rational);

impl ExactValue {
    pub fn new(q: Rational) -> Self {
        Self(q)
    }

    pub fn rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn to_float(&self, bits: u32) -> Float {
        Float::with_val(bits, &self.0)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `sign(b)^k / k^|b|`.
fn step_weight(b: i32, k: u32) -> Rational {
    let den = Integer::from(k).pow(b.unsigned_abs());
    let num = if b < 0 && k % 2 == 1 { -1 } else { 1 };
    Rational::from((Integer::from(num), den))
}

/// `S_v(k)` for every `k = 0..=n_max` (entry 0 is the empty sum, 0).
///
/// Innermost index first: `S_{b,ā}(k) = S_{b,ā}(k-1) + sign(b)^k/k^|b| S_ā(k)`,
/// so every suffix is evaluated once per `k`.
pub fn eval_exact_upto(v: &IndexVector, n_max: u32) -> Vec<Rational> {
    let len = n_max as usize + 1;
    let mut inner = vec![Rational::from(1); len];
    for &b in v.entries().iter().rev() {
        let mut outer = Vec::with_capacity(len);
        outer.push(Rational::new());
        for k in 1..=n_max {
            let term = step_weight(b, k) * &inner[k as usize];
            let prev = &outer[k as usize - 1];
            outer.push(Rational::from(prev + &term));
        }
        inner = outer;
    }
    inner
}

/// Exact `S_v(N)` for `N >= 1`.
pub fn eval_exact(v: &IndexVector, n: i64) -> Result<ExactValue> {
    if n < 1 {
        return Err(Error::Domain(format!("harmonic sum argument must be >= 1, got {n}")));
    }
    let n = u32::try_from(n).map_err(|_| Error::Domain(format!("argument {n} too large")))?;
    let mut table = eval_exact_upto(v, n);
    Ok(ExactValue(table.swap_remove(n as usize)))
}

/// Floating evaluation, used for large arguments where exact
/// denominators become unwieldy.
pub fn eval_float_upto(v: &IndexVector, n_max: u32, bits: u32) -> Vec<Float> {
    let len = n_max as usize + 1;
    let mut inner = vec![Float::with_val(bits, 1); len];
    for &b in v.entries().iter().rev() {
        let mut outer = Vec::with_capacity(len);
        outer.push(Float::new(bits));
        for k in 1..=n_max {
            let mut term = Float::with_val(bits, k);
            term.pow_assign(b.unsigned_abs());
            term.recip_mut();
            if b < 0 && k % 2 == 1 {
                term = -term;
            }
            term *= &inner[k as usize];
            let next = Float::with_val(bits, &outer[k as usize - 1] + &term);
            outer.push(next);
        }
        inner = outer;
    }
    inner
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums::iv;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }

    #[test]
    fn small_values() {
        assert_eq!(*eval_exact(&iv(&[1]), 3).unwrap().rational(), q(11, 6));
        assert_eq!(*eval_exact(&iv(&[-2]), 2).unwrap().rational(), q(-3, 4));
        assert_eq!(*eval_exact(&iv(&[2, 1]), 2).unwrap().rational(), q(11, 8));
        assert_eq!(*eval_exact(&iv(&[1]), 1).unwrap().rational(), q(1, 1));
    }

    #[test]
    fn rejects_non_positive_argument() {
        assert!(eval_exact(&iv(&[1]), 0).is_err());
        assert!(eval_exact(&iv(&[1]), -4).is_err());
    }

    /// Brute-force nested loops, independent of the suffix recursion.
    fn brute(entries: &[i32], n: u32) -> Rational {
        if entries.is_empty() {
            return Rational::from(1);
        }
        let b = entries[0];
        let mut acc = Rational::new();
        for k in 1..=n {
            acc += step_weight(b, k) * brute(&entries[1..], k);
        }
        acc
    }

    #[test]
    fn matches_brute_force_nesting() {
        for v in [iv(&[2, 1]), iv(&[-3, 1, -2]), iv(&[1, 1, 1]), iv(&[-1, 2, -1, 1])] {
            let table = eval_exact_upto(&v, 9);
            for n in 1..=9 {
                assert_eq!(table[n as usize], brute(v.entries(), n), "{v:?} at {n}");
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(eval_exact(&iv(&[1]), 3).unwrap().to_string(), "11/6");
        assert_eq!(eval_exact(&iv(&[1]), 1).unwrap().to_string(), "1");
    }

    #[test]
    fn float_table_agrees_with_exact() {
        let v = iv(&[-2, 1, 3]);
        let ex = eval_exact_upto(&v, 20);
        let fl = eval_float_upto(&v, 20, 200);
        for k in 0..=20 {
            let d = Float::with_val(200, &fl[k] - &ex[k]);
            assert!(d.abs() < 1e-55);
        }
    }
}
