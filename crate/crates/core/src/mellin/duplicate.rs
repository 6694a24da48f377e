use rug::Float;
use serde::Serialize;

use super::{atom, MellinEngine};
use crate::error::{Error, Result};
use crate::num::serialize_float;

/// Which form of the half-argument relation to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DuplicationVariant {
    /// `2^{1-k} M[(Li_k(x)/(x-1))_+]((N-1)/2)
    ///   = P+ + P- - Q+ - Q- - 2^{2-k} ∫ Li_k(x^2)/(1+x)`
    /// with `P± = M[(Li_k(±x)/(x-1))_+](N)`, `Q± = M[(Li_k(±x)/(x+1))_+](N)`.
    Corrected,
    /// The literal printed form: left side `M[(Li_k(x^2)/(x^2-1))_+]((N-1)/2)`,
    /// all four atoms added, boundary integral with coefficient one.
    AsPrinted,
}

#[derive(Clone, Debug, Serialize)]
pub struct DuplicationReport {
    pub k: u32,
    pub n: i64,
    pub variant: DuplicationVariant,
    #[serde(serialize_with = "serialize_float")]
    pub lhs: Float,
    #[serde(serialize_with = "serialize_float")]
    pub rhs: Float,
    #[serde(serialize_with = "serialize_float")]
    pub residual: Float,
    /// `∫_0^1 Li_k(x^2)/(1+x) dx`
    #[serde(serialize_with = "serialize_float")]
    pub boundary: Float,
}

/// Both sides of the half-argument relation at integer `n >= 1`.
pub fn duplicate(engine: &MellinEngine, k: u32, n: i64, variant: DuplicationVariant) -> Result<DuplicationReport> {
    if !(2..=5).contains(&k) {
        return Err(Error::Domain(format!("duplication relation needs k in 2..=5, got {k}")));
    }
    if n < 1 {
        return Err(Error::Domain("duplication relation needs N >= 1".into()));
    }
    let bits = engine.bits();
    let at = |text: String, arg: &Float| -> Result<Float> { Ok(engine.eval(&atom(&text)?, arg)?.value) };
    let nf = Float::with_val(bits, n);
    let half = Float::with_val(bits, n - 1) / 2u32;
    let zero = Float::new(bits);
    let boundary = at(format!("M[Li{k}(x^2)/(1+x)](N)"), &zero)?;
    let p_plus = at(format!("M[Li{k}(x)/(x-1)]+(N)"), &nf)?;
    let p_minus = at(format!("M[Li{k}(-x)/(x-1)]+(N)"), &nf)?;
    let q_plus = at(format!("M[Li{k}(x)/(x+1)]+(N)"), &nf)?;
    let q_minus = at(format!("M[Li{k}(-x)/(x+1)]+(N)"), &nf)?;
    let scale = Float::with_val(bits, 1u32) >> (k as i32 - 1);
    let (lhs, rhs) = match variant {
        DuplicationVariant::Corrected => {
            let lhs = at(format!("M[Li{k}(x)/(x-1)]+(N)"), &half)? * &scale;
            let b = Float::with_val(bits, &boundary * &scale) * 2u32;
            (lhs, p_plus + p_minus - q_plus - q_minus - b)
        }
        DuplicationVariant::AsPrinted => {
            let lhs = at(format!("M[Li{k}(x^2)/(x^2-1)]+(N)"), &half)? * &scale;
            (lhs, p_plus + p_minus + q_plus + q_minus - &boundary)
        }
    };
    let residual = Float::with_val(bits, &lhs - &rhs).abs();
    Ok(DuplicationReport { k, n, variant, lhs, rhs, residual, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Precision;
    use crate::specfun::SpecFun;

    #[test]
    fn corrected_form_holds_and_printed_form_does_not() {
        let e = MellinEngine::new(SpecFun::shared(Precision::digits(30)));
        for (k, n) in [(2, 3), (4, 5), (3, 2)] {
            let r = duplicate(&e, k, n, DuplicationVariant::Corrected).unwrap();
            assert!(r.residual < 1e-33, "k = {k}, N = {n}: {}", r.residual.to_f64());
        }
        let r = duplicate(&e, 2, 3, DuplicationVariant::AsPrinted).unwrap();
        assert!(r.residual > 1e-3);
    }
}
