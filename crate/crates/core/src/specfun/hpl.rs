use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::series::Letter;
use crate::error::{Error, Result};

/// Harmonic polylogarithm index word over `{0, 1, -1}`.
///
/// `H_{a,w}(x) = ∫_0^x f_a(y) H_w(y) dy` with `f_0 = 1/y`,
/// `f_1 = 1/(1-y)`, `f_{-1} = 1/(1+y)`; so `H_1 = -ln(1-x)`,
/// `H_{-1} = ln(1+x)` and `H_{0,...,0} = ln^n(x)/n!`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct HplWord(Vec<i8>);

impl HplWord {
    pub fn new(letters: Vec<i8>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidIndex("empty HPL word".into()));
        }
        if let Some(bad) = letters.iter().find(|a| !(-1..=1).contains(*a)) {
            return Err(Error::InvalidIndex(format!("HPL letter {bad} not in {{0, 1, -1}}")));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    /// `0^p 1^n`, the Nielsen function `S_{p,n}(x)`.
    pub fn nielsen(p: u32, n: u32) -> Self {
        let mut w = vec![0i8; p as usize];
        w.extend(std::iter::repeat_n(1i8, n as usize));
        Self(w)
    }

    /// Letters with `±1` swapped, for `H_w(-x) = (-1)^k H_{-w}(x)`.
    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn nonzero_letters(&self) -> usize {
        self.0.iter().filter(|&&a| a != 0).count()
    }

    pub fn trailing_zeros(&self) -> usize {
        self.0.iter().rev().take_while(|&&a| a == 0).count()
    }

    pub(crate) fn letter(a: i8) -> Letter {
        match a {
            0 => Letter::Zero,
            1 => Letter::One,
            _ => Letter::MinusOne,
        }
    }
}

impl TryFrom<Vec<i8>> for HplWord {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<HplWord> for Vec<i8> {
    fn from(w: HplWord) -> Self {
        w.0
    }
}

impl fmt::Display for HplWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for HplWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H[{self}]")
    }
}

impl FromStr for HplWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s.strip_prefix("H[").and_then(|r| r.strip_suffix(']')).unwrap_or(s);
        let letters = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i8>()
                    .map_err(|_| Error::InvalidIndex(format!("`{}` is not an HPL letter", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_flags() {
        let w: HplWord = "H[0,-1,0,1,1]".parse().unwrap();
        assert_eq!(w.weight(), 5);
        assert_eq!(w.nonzero_letters(), 3);
        assert_eq!(w.negated().to_string(), "0,1,0,-1,-1");
        assert!("H[0,2]".parse::<HplWord>().is_err());
        assert_eq!(HplWord::nielsen(2, 2).to_string(), "0,0,1,1");
        assert_eq!(HplWord::new(vec![1, 0, 0]).unwrap().trailing_zeros(), 2);
    }
}
