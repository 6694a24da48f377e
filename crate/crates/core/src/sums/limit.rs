use rug::Float;
use serde::Serialize;

use super::IndexVector;
use crate::error::Result;
use crate::specfun::{HplWord, SpecFun};

/// Behaviour of `S_v(N)` as `N -> ∞`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LimitClass {
    /// Convergent; the value is a multiple zeta value.
    Finite {
        #[serde(serialize_with = "crate::num::serialize_float")]
        value: Float,
    },
    /// Grows like `ln^m N`.
    LogDivergent { m: usize },
}

impl LimitClass {
    pub fn value(&self) -> Option<&Float> {
        match self {
            LimitClass::Finite { value } => Some(value),
            LimitClass::LogDivergent { .. } => None,
        }
    }
}

/// Strict-order sums `Z_u` whose sum is `S_v`, from splitting every `>=`
/// of the nested sum into `>` or `=`.
fn strict_expansion(entries: &[i32]) -> Vec<Vec<i32>> {
    let d = entries.len();
    let mut out = Vec::with_capacity(1 << (d - 1));
    for mask in 0u32..(1 << (d - 1)) {
        let mut merged = vec![entries[0]];
        for (i, &a) in entries.iter().enumerate().skip(1) {
            if mask & (1 << (i - 1)) != 0 {
                let last = merged.last_mut().expect("nonempty");
                let sign = last.signum() * a.signum();
                *last = sign * (last.abs() + a.abs());
            } else {
                merged.push(a);
            }
        }
        out.push(merged);
    }
    out
}

/// `Z_u(∞) = ± H_w(1)`, where `w` spells `0^{|u_i|-1} σ_i` with
/// `σ_i` the running product of signs; the sign is `(-1)^{#(σ_i = -1)}`.
fn strict_to_hpl(u: &[i32]) -> (HplWord, bool) {
    let mut letters = Vec::new();
    let mut sigma = 1i8;
    let mut negative = false;
    for &a in u {
        if a < 0 {
            sigma = -sigma;
        }
        letters.extend(std::iter::repeat_n(0i8, a.unsigned_abs() as usize - 1));
        letters.push(sigma);
        if sigma < 0 {
            negative = !negative;
        }
    }
    (HplWord::new(letters).expect("nonempty word"), negative)
}

/// The `N -> ∞` behaviour of `S_v`.
pub fn limit_value(v: &IndexVector, ctx: &SpecFun) -> Result<LimitClass> {
    let m = v.leading_ones();
    if m > 0 {
        return Ok(LimitClass::LogDivergent { m });
    }
    let mut total = Float::new(ctx.bits());
    for u in strict_expansion(v.entries()) {
        let (w, negative) = strict_to_hpl(&u);
        let h = ctx.hpl(&w, &ctx.float(1))?;
        if negative {
            total -= h;
        } else {
            total += h;
        }
    }
    Ok(LimitClass::Finite { value: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Precision;
    use crate::specfun::ConstantName;
    use crate::sums::{eval_float_upto, iv};

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn zeta_values() {
        let ctx = SpecFun::shared(Precision::digits(30));
        let z = |k| ctx.constant(ConstantName::Zeta(k)).unwrap();
        let s2 = limit_value(&iv(&[2]), &ctx).unwrap();
        assert!(close(s2.value().unwrap(), &z(2), 1e-35));
        let s21 = limit_value(&iv(&[2, 1]), &ctx).unwrap();
        assert!(close(s21.value().unwrap(), &(z(3) * 2u32), 1e-35));
        let sm1 = limit_value(&iv(&[-1]), &ctx).unwrap();
        assert!(close(sm1.value().unwrap(), &(-crate::num::ln2(ctx.bits())), 1e-35));
        assert!(matches!(limit_value(&iv(&[1]), &ctx).unwrap(), LimitClass::LogDivergent { m: 1 }));
        assert!(matches!(limit_value(&iv(&[1, 1, 2]), &ctx).unwrap(), LimitClass::LogDivergent { m: 2 }));
    }

    #[test]
    fn alternating_limits_match_partial_sums() {
        // tails fall off at least like 1/N, so N = 4000 pins about three digits
        let ctx = SpecFun::shared(Precision::digits(30));
        for v in [iv(&[-2, 1]), iv(&[3, -1]), iv(&[-2, -2]), iv(&[2, -2, -1])] {
            let lim = limit_value(&v, &ctx).unwrap();
            let partial = eval_float_upto(&v, 4000, 128).pop().unwrap();
            let diff = Float::with_val(128, lim.value().unwrap() - &partial).abs();
            assert!(diff < 1e-3, "{v:?}: {}", diff.to_f64());
        }
    }
}
