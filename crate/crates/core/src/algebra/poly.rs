use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rug::Rational;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::sums::{eval_exact_upto, IndexVector};

/// Sorted list of factors; the empty monomial is the constant 1.
pub type Monomial = Vec<IndexVector>;

/// Polynomial in harmonic sums with rational coefficients.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SumPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl SumPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(v: IndexVector) -> Self {
        Self::monomial(vec![v], Rational::from(1))
    }

    pub fn monomial(mut factors: Monomial, coeff: Rational) -> Self {
        factors.sort();
        let mut p = Self::zero();
        p.add_term(factors, coeff);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, factors: &[IndexVector]) -> Rational {
        let mut key = factors.to_vec();
        key.sort();
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Adds `coeff * factors`; `factors` must already be sorted.
    pub(crate) fn add_term(&mut self, factors: Monomial, coeff: Rational) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(factors) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SumPolynomial, scale: &Rational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), Rational::from(c * scale));
        }
    }

    pub fn scaled(&self, scale: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, scale);
        out
    }

    /// Total weights of the monomials.
    pub fn weights(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.iter().map(IndexVector::weight).sum()).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weights().len() <= 1
    }

    /// Distinct sums appearing as factors.
    pub fn factors(&self) -> BTreeSet<IndexVector> {
        self.terms.keys().flatten().cloned().collect()
    }

    /// Exact values at `N = 0..=n_max`.
    pub fn eval_exact_upto(&self, n_max: u32) -> Vec<Rational> {
        let tables: BTreeMap<&IndexVector, Vec<Rational>> = self
            .terms
            .keys()
            .flatten()
            .map(|v| (v, eval_exact_upto(v, n_max)))
            .collect();
        (0..=n_max as usize)
            .map(|n| {
                let mut total = Rational::new();
                for (m, c) in &self.terms {
                    let mut t = c.clone();
                    for v in m {
                        t *= &tables[v][n];
                    }
                    total += t;
                }
                total
            })
            .collect()
    }

    pub fn eval_exact(&self, n: u32) -> Result<Rational> {
        if n == 0 {
            return Err(crate::Error::Domain("harmonic sum argument must be >= 1".into()));
        }
        Ok(self.eval_exact_upto(n).swap_remove(n as usize))
    }
}

fn fmt_coeff(c: &Rational) -> String {
    if *c.denom() == 1 {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Prints in the expression grammar, e.g. `1/2*S[1](N)^2 + 1/2*S[2](N)`.
impl fmt::Display for SumPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts = Vec::new();
            if abs != 1 || m.is_empty() {
                parts.push(fmt_coeff(&abs));
            }
            let mut j = 0;
            while j < m.len() {
                let run = m[j..].iter().take_while(|v| **v == m[j]).count();
                let atom = format!("S[{}](N)", m[j]);
                parts.push(if run > 1 { format!("{atom}^{run}") } else { atom });
                j += run;
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    coeff: String,
    factors: Vec<&'a [i32]>,
}

/// JSON: `[{"coeff": "p/q", "factors": [[..], ..]}, ..]`.
impl Serialize for SumPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermJson {
                coeff: format!("{}/{}", c.numer(), c.denom()),
                factors: m.iter().map(|v| v.entries()).collect(),
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
pub(crate) fn rational(p: i64, q: i64) -> Rational {
    Rational::from((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums::iv;

    #[test]
    fn printing_and_json() {
        let mut p = SumPolynomial::monomial(vec![iv(&[1]), iv(&[1])], rational(1, 2));
        p.add_term(vec![iv(&[2])], rational(-1, 2));
        assert_eq!(p.to_string(), "1/2*S[1](N)^2 - 1/2*S[2](N)");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[{"coeff":"1/2","factors":[[1],[1]]},{"coeff":"-1/2","factors":[[2]]}]"#);
        assert!(p.is_homogeneous());
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut p = SumPolynomial::single(iv(&[3]));
        p.add_term(vec![iv(&[3])], rational(-1, 1));
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }
}
