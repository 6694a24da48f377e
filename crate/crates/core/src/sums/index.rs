use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index list `(a1, ..., ad)` of a nested harmonic sum.
///
/// Entries are nonzero; the sign of an entry selects the alternating
/// weight `sign(a)^k`, its magnitude the power of `1/k`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct IndexVector(Vec<i32>);

impl IndexVector {
    pub fn new(entries: Vec<i32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidIndex("empty index list".into()));
        }
        if let Some(pos) = entries.iter().position(|&a| a == 0) {
            return Err(Error::InvalidIndex(format!("zero index at entry {}", pos + 1)));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        weight_of(&self.0)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn contains_minus_one(&self) -> bool {
        self.0.contains(&-1)
    }

    pub fn is_alternating(&self) -> bool {
        self.0.iter().any(|&a| a < 0)
    }

    /// Length of the leading run of `1` entries.
    pub fn leading_ones(&self) -> usize {
        self.0.iter().take_while(|&&a| a == 1).count()
    }

    /// The tail `ā` of `(b, ā)`; `None` for depth one.
    pub fn tail(&self) -> Option<IndexVector> {
        (self.0.len() > 1).then(|| IndexVector(self.0[1..].to_vec()))
    }

    pub fn head(&self) -> i32 {
        self.0[0]
    }

    pub fn reversed(&self) -> IndexVector {
        IndexVector(self.0.iter().rev().copied().collect())
    }
}

pub(crate) fn weight_of(entries: &[i32]) -> u32 {
    entries.iter().map(|a| a.unsigned_abs()).sum()
}

/// Letter order: by magnitude, positive before negative.
pub(crate) fn letter_key(a: i32) -> (u32, bool) {
    (a.unsigned_abs(), a < 0)
}

pub(crate) fn cmp_words(a: &[i32], b: &[i32]) -> Ordering {
    a.iter()
        .map(|&x| letter_key(x))
        .cmp(b.iter().map(|&x| letter_key(x)))
}

impl Ord for IndexVector {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_words(&self.0, &other.0)
    }
}

impl PartialOrd for IndexVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<i32>> for IndexVector {
    type Error = Error;
    fn try_from(v: Vec<i32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IndexVector> for Vec<i32> {
    fn from(v: IndexVector) -> Self {
        v.0
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S[{self}]")
    }
}

/// Parses the canonical comma-separated form, with or without the
/// `S[...]` wrapper.
impl FromStr for IndexVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix("S[")
            .and_then(|r| r.strip_suffix(']'))
            .unwrap_or(s);
        let entries = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::InvalidIndex(format!("`{}` is not an integer", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// Convenience constructor for literals in tests and tables.
///
/// Panics on a zero entry or an empty slice.
pub fn iv(entries: &[i32]) -> IndexVector {
    IndexVector::new(entries.to_vec()).expect("valid index vector literal")
}

/// All index vectors of weight exactly `w`, sorted in canonical order.
pub fn enumerate(w: u32, exclude_minus_one: bool) -> Vec<IndexVector> {
    fn rec(prefix: &mut Vec<i32>, rem: u32, excl: bool, out: &mut Vec<IndexVector>) {
        if rem == 0 {
            out.push(IndexVector(prefix.clone()));
            return;
        }
        for mag in 1..=rem {
            for sign in [1, -1] {
                let a = sign * mag as i32;
                if excl && a == -1 {
                    continue;
                }
                prefix.push(a);
                rec(prefix, rem - mag, excl, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if w > 0 {
        rec(&mut Vec::new(), w, exclude_minus_one, &mut out);
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        assert_eq!(iv(&[1]).weight(), 1);
        assert_eq!(iv(&[2, 1, 1, 1, 1]).weight(), 6);
        assert_eq!(iv(&[-3, 1, -2]).weight(), 6);
        assert_eq!(iv(&[-3, 1, -2]).depth(), 3);
    }

    #[test]
    fn rejects_zero_and_empty() {
        assert!(IndexVector::new(vec![]).is_err());
        assert!(IndexVector::new(vec![2, 0]).is_err());
        assert!("S[-3,0,1]".parse::<IndexVector>().is_err());
    }

    #[test]
    fn text_form_round_trips() {
        let v: IndexVector = "S[-3,1,-2]".parse().unwrap();
        assert_eq!(v.to_string(), "-3,1,-2");
        assert_eq!(v.to_string().parse::<IndexVector>().unwrap(), v);
    }

    #[test]
    fn enumeration_counts() {
        for w in 1..=6 {
            assert_eq!(enumerate(w, false).len(), 2 * 3usize.pow(w - 1));
        }
        assert_eq!(enumerate(6, false).len(), 486);
        assert_eq!(enumerate(6, true).len(), 99);
        assert_eq!(enumerate(1, true), vec![iv(&[1])]);
    }

    #[test]
    fn enumeration_is_sorted_positive_first() {
        let w2 = enumerate(2, false);
        let txt: Vec<String> = w2.iter().map(|v| v.to_string()).collect();
        assert_eq!(txt, ["1,1", "1,-1", "-1,1", "-1,-1", "2", "-2"]);
        assert!(enumerate(6, true).iter().all(|v| !v.contains_minus_one()));
    }
}
