use std::fmt;

use serde::{Deserialize, Serialize};

use super::hpl::HplWord;

/// Argument forms kernels use on `x ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arg {
    X,
    MinusX,
    OneMinusX,
    /// `x^2`, only for `Li_k`.
    XSquared,
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arg::X => "x",
            Arg::MinusX => "-x",
            Arg::OneMinusX => "1-x",
            Arg::XSquared => "x^2",
        })
    }
}

/// `ln(x)`, `ln(1+x)`, `ln(1-x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LnArg {
    X,
    OnePlusX,
    OneMinusX,
}

/// Named functions of `x` that kernels are built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Primitive {
    Li { k: u32, arg: Arg },
    /// Nielsen `S_{p,n}`.
    Nielsen { p: u32, n: u32, arg: Arg },
    Hpl { word: HplWord, arg: Arg },
    /// `A_1, A_2, A_3`.
    Aux { i: u8, arg: Arg },
    Ln(LnArg),
}

impl Primitive {
    /// Transcendental weight.
    pub fn weight(&self) -> u32 {
        match self {
            Primitive::Li { k, .. } => *k,
            Primitive::Nielsen { p, n, .. } => p + n,
            Primitive::Hpl { word, .. } => word.weight() as u32,
            Primitive::Aux { .. } => 5,
            Primitive::Ln(_) => 1,
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::Li { k, arg } => write!(f, "Li{k}({arg})"),
            Primitive::Nielsen { p, n, arg } => write!(f, "S{p}{n}({arg})"),
            Primitive::Hpl { word, arg } => write!(f, "H[{word}]({arg})"),
            Primitive::Aux { i, arg } => write!(f, "A{i}({arg})"),
            Primitive::Ln(LnArg::X) => f.write_str("ln(x)"),
            Primitive::Ln(LnArg::OnePlusX) => f.write_str("ln(1+x)"),
            Primitive::Ln(LnArg::OneMinusX) => f.write_str("ln(1-x)"),
        }
    }
}
