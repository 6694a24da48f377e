use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named transcendental constants of the weight-6 basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstantName {
    /// `ζ_k`, `2 <= k <= 7`.
    Zeta(u32),
    Ln2,
    /// `Li_k(1/2)`, `1 <= k <= 6`.
    LiHalf(u32),
    /// `15/16 ln2 ζ5 + ∫_0^1 Li5(z)/(1+z) dz`.
    S6,
}

/// How a registry value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Series,
    Quadrature,
    Composite,
}

impl ConstantName {
    pub fn all() -> Vec<ConstantName> {
        let mut v: Vec<_> = (2..=6).map(ConstantName::Zeta).collect();
        v.push(ConstantName::Ln2);
        v.extend((4..=6).map(ConstantName::LiHalf));
        v.push(ConstantName::S6);
        v
    }

    pub fn weight(&self) -> u32 {
        match self {
            ConstantName::Zeta(k) | ConstantName::LiHalf(k) => *k,
            ConstantName::Ln2 => 1,
            ConstantName::S6 => 6,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            ConstantName::S6 => Provenance::Composite,
            _ => Provenance::Series,
        }
    }

    pub(crate) fn validate(self) -> Result<Self> {
        match self {
            ConstantName::Zeta(k) if !(2..=7).contains(&k) => {
                Err(Error::UnknownName(format!("zeta({k})")))
            }
            ConstantName::LiHalf(k) if !(1..=6).contains(&k) => {
                Err(Error::UnknownName(format!("Li{k}(1/2)")))
            }
            c => Ok(c),
        }
    }
}

impl fmt::Display for ConstantName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantName::Zeta(k) => write!(f, "zeta({k})"),
            ConstantName::Ln2 => f.write_str("ln2"),
            ConstantName::LiHalf(k) => write!(f, "Li{k}(1/2)"),
            ConstantName::S6 => f.write_str("s6"),
        }
    }
}

/// Accepts `zeta(3)`, `zeta3`, `ln2`, `ln(2)`, `Li4(1/2)`, `s6`.
impl FromStr for ConstantName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let unknown = || Error::UnknownName(s.to_string());
        let parsed = match compact.as_str() {
            "ln2" | "ln(2)" | "log2" => ConstantName::Ln2,
            "s6" => ConstantName::S6,
            other => {
                if let Some(rest) = other.strip_prefix("zeta") {
                    let k = rest.trim_start_matches('(').trim_end_matches(')');
                    ConstantName::Zeta(k.parse().map_err(|_| unknown())?)
                } else if let Some(rest) = other.strip_prefix("Li") {
                    let k = rest.strip_suffix("(1/2)").ok_or_else(unknown)?;
                    ConstantName::LiHalf(k.parse().map_err(|_| unknown())?)
                } else {
                    return Err(unknown());
                }
            }
        };
        parsed.validate()
    }
}
