use super::ast::Expr;
use super::parse::to_affine;
use crate::error::{Error, Result};

/// Transcendental weight of `e`.
///
/// Sums count `Σ|a_i|`, constants and functions their usual weight, a
/// Mellin transform one more than its kernel, and any non-constant affine
/// form in `N` counts `-1`, so `1/(N+1)` has weight 1. Sums and
/// differences must be homogeneous.
pub fn weight(e: &Expr) -> Result<i32> {
    if let Some(a) = to_affine(e) {
        return Ok(if a.is_constant() { 0 } else { -1 });
    }
    Ok(match e {
        Expr::Num(_) | Expr::X | Expr::Parity(_) => 0,
        Expr::N => -1,
        Expr::Const(c) => c.weight() as i32,
        Expr::Sum(v, _) => v.weight() as i32,
        Expr::Mellin(m) => weight(&m.kernel)? + 1,
        Expr::Int(k) => weight(k)?,
        Expr::Fun(p) | Expr::FunAt(p, _) => p.weight() as i32,
        Expr::Neg(a) => weight(a)?,
        Expr::Pow(a, k) => weight(a)? * *k as i32,
        Expr::Mul(a, b) => weight(a)? + weight(b)?,
        Expr::Div(a, b) => {
            let wb = if is_linear_in_x(b) { -1 } else { weight(b)? };
            weight(a)? - wb
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (wa, wb) = (weight(a)?, weight(b)?);
            if wa != wb && !is_zero(a) && !is_zero(b) {
                return Err(Error::Catalog(format!("mixed weights {wa} and {wb} in `{e}`")));
            }
            if is_zero(a) {
                wb
            } else {
                wa
            }
        }
    })
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Num(q) if *q == 0)
}

/// `x`, `1 ± x`, `x ± 1` and `±(1 - x^2)`: dividing by one of these raises
/// the weight by one.
fn is_linear_in_x(e: &Expr) -> bool {
    let text: String = e.to_string().chars().filter(|c| !c.is_whitespace()).collect();
    matches!(text.as_str(), "x" | "1-x" | "1+x" | "x-1" | "x+1" | "1-x^2" | "x^2-1")
}

/// Weight of every top-level additive term, in order.
pub fn term_weights(e: &Expr) -> Result<Vec<i32>> {
    e.additive_terms().into_iter().map(|(_, t)| weight(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn w(s: &str) -> i32 {
        weight(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(w("S[-3,1,-2](N)"), 6);
        assert_eq!(w("zeta(2)*zeta(3)*S[1](N)"), 6);
        assert_eq!(w("M[Li5(x)/(1+x)](N)"), 6);
        assert_eq!(w("(zeta(5) - S[1,1,1,1](N)/(N+1))/(N+1)"), 6);
        assert_eq!(w("Int[Li2(x)^2/x]"), 5);
        assert_eq!(w("Li3(x^2)/(1-x^2)/2"), 4);
        assert_eq!(w("(-1)^N*ln2*S[-5](N)"), 6);
        assert!(weight(&parse("S[1](N) + zeta(3)").unwrap()).is_err());
        assert_eq!(term_weights(&parse("S[3](N)^2 - S[6](N)").unwrap()).unwrap(), vec![6, 6]);
    }
}
