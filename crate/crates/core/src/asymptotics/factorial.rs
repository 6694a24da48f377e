//! Inverse-power expansions of Mellin transforms of kernels regular at `x = 1`.
//!
//! With `t = 1 - x` and `g(x) = Σ a_n t^n`,
//! `∫_0^1 x^(z-1) g(x) dx = Σ a_n n!/(z(z+1)…(z+n))`, a factorial series
//! whose terms expand in `1/z` with rational coefficients.

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::specfun::{Arg, LnArg, Primitive};

/// Default number of derived coefficients; four beyond the 19 that are
/// tabulated so the error model always has an omitted term to look at.
pub const DEFAULT_ORDER: usize = 23;

/// `c_1..c_19` of `∫_0^1 x^(z-1) Li5(1-x)/(1-x) dx ~ Σ c_k z^-k`.
pub const LI5_TABULATED: [&str; 19] = [
    "1",
    "1/32",
    "-179/7776",
    "515/41472",
    "-216383/194400000",
    "-183781/25920000",
    "4644828197/653456160000",
    "153375307/49787136000",
    "-371224706507/25204737600000",
    "959290541/160030080000",
    "575134377343021/16913534146740000",
    "-14855426650259/312400053504000",
    "-29106619674489691525729/319702820637227227200000",
    "225456132288901603/788601079506240000",
    "263567702701300558681/1053965342760089760000",
    "-355061945309358701/187184432058624000",
    "-1432477558547377054456843733/4988266898917709221214400000",
    "192140702840923335916939/13028192458306945920000",
    "-2027981189268747465011536794768001/254294408120596135866406712880000",
];

/// `Σ_{k>=1} c_k / z^k` with `z = N + offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticSeries {
    /// `coeffs[k-1] = c_k`.
    pub coeffs: Vec<Rational>,
    /// `z = N + offset`; transforms `∫ x^N g` come out with offset 1.
    pub offset: i64,
    /// Smallest `|z|` [`asym_eval`] accepts.
    pub z_min: f64,
}

#[derive(Serialize)]
pub struct CoefficientEntry {
    pub k: usize,
    pub coeff: String,
}

/// A truncated evaluation and the size of the first omitted nonzero term.
#[derive(Clone, Debug)]
pub struct AsymValue {
    pub value: Complex,
    pub bound: Float,
}

impl AsymptoticSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn with_z_min(mut self, z_min: f64) -> Self {
        self.z_min = z_min;
        self
    }

    /// The same function expanded in `1/(N + offset)`.
    pub fn reexpand(&self, offset: i64) -> Self {
        // 1/(w + d)^k = Σ_j C(k+j-1, j) (-d)^j / w^(k+j),  w = N + offset
        let d = Integer::from(self.offset - offset);
        let len = self.coeffs.len();
        let mut out = vec![Rational::new(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = i as u32 + 1;
            for j in 0..(len - i) as u32 {
                let sign = Integer::from(-&d).pow(j);
                let b = Integer::from(k + j - 1).binomial(j);
                out[i + j as usize] += Rational::from(c * (b * sign));
            }
        }
        Self { coeffs: out, offset, z_min: self.z_min }
    }

    /// The `{k, coeff}` list used for export.
    pub fn entries(&self) -> Vec<CoefficientEntry> {
        self.coeffs.iter().enumerate().map(|(i, c)| CoefficientEntry { k: i + 1, coeff: c.to_string() }).collect()
    }

    /// First nonzero coefficient at index `>= terms` (0-based), as `(k, c_k)`.
    fn first_omitted(&self, terms: usize) -> Option<(usize, &Rational)> {
        self.coeffs.iter().enumerate().skip(terms).find(|(_, c)| **c != 0).map(|(i, c)| (i + 1, c))
    }

    /// Smallest `|z|` at which the first omitted term after `terms` is
    /// below `10^-digits`, never less than `floor`.
    pub fn threshold(&self, terms: usize, digits: u32, floor: f64) -> f64 {
        match self.first_omitted(terms) {
            Some((k, c)) => {
                let lc = Float::with_val(64, c.clone().abs()).log10().to_f64();
                let z = 10f64.powf((lc + f64::from(digits)) / k as f64);
                z.max(floor)
            }
            None => floor,
        }
    }
}

/// `Σ_{k=1}^{terms} c_k z^-k` and the first omitted nonzero term.
pub fn asym_eval(series: &AsymptoticSeries, z: &Complex, terms: usize) -> Result<AsymValue> {
    if terms == 0 || terms >= series.order() {
        return Err(Error::Domain(format!("terms must be in 1..{}, got {terms}", series.order() - 1)));
    }
    let bits = z.prec().0;
    let r = Float::with_val(bits, z.abs_ref());
    if r < series.z_min {
        return Err(Error::Domain(format!("|z| = {} is below the asymptotic threshold {}", r.to_f64(), series.z_min)));
    }
    let u = Complex::with_val(bits, z.recip_ref());
    let mut acc = Complex::new(bits);
    for c in series.coeffs[..terms].iter().rev() {
        acc += Float::with_val(bits, c);
        acc *= &u;
    }
    let bound = match series.first_omitted(terms) {
        Some((k, c)) => Float::with_val(bits, c.clone().abs()) / Float::with_val(bits, r.pow(k as u32)),
        None => Float::new(bits),
    };
    Ok(AsymValue { value: acc, bound })
}

fn unsupported(e: &Expr, why: &str) -> Error {
    Error::Unsupported(format!("`{e}`: {why}"))
}

fn mul(a: &[Rational], b: &[Rational], order: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

/// Taylor coefficients `a_0..a_{order-1}` of `e` in `t = 1 - x`.
pub fn taylor_at_one(e: &Expr, order: usize) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::new(); order];
    match e {
        Expr::Num(q) => out[0] = q.clone(),
        Expr::X => {
            out[0] = Rational::from(1);
            if order > 1 {
                out[1] = Rational::from(-1);
            }
        }
        Expr::Fun(p) => match p {
            Primitive::Li { k, arg: Arg::OneMinusX } | Primitive::Nielsen { p: k, n: 1, arg: Arg::OneMinusX } => {
                let k = if matches!(p, Primitive::Nielsen { .. }) { k + 1 } else { *k };
                for (n, a) in out.iter_mut().enumerate().skip(1) {
                    *a = Rational::from((1, Integer::from(n).pow(k)));
                }
            }
            // ln x = ln(1 - t)
            Primitive::Ln(LnArg::X) => {
                for (n, a) in out.iter_mut().enumerate().skip(1) {
                    *a = Rational::from((-1, n as i64));
                }
            }
            Primitive::Ln(LnArg::OneMinusX) => {
                return Err(unsupported(e, "ln(1-x) grows at x = 1 and has to be subtracted first"))
            }
            Primitive::Li { arg: Arg::X | Arg::XSquared, .. }
            | Primitive::Nielsen { arg: Arg::X, .. }
            | Primitive::Hpl { arg: Arg::X, .. } => {
                return Err(unsupported(e, "branch point at x = 1; rewrite in terms of functions of 1-x"))
            }
            _ => return Err(unsupported(e, "no rational expansion at x = 1")),
        },
        Expr::Const(_) => return Err(unsupported(e, "irrational expansion coefficients")),
        Expr::Neg(a) => out = taylor_at_one(a, order)?.into_iter().map(|q| -q).collect(),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (a, b) = (taylor_at_one(a, order)?, taylor_at_one(b, order)?);
            let minus = matches!(e, Expr::Sub(..));
            for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
                *o = if minus { x - y } else { x + y };
            }
        }
        Expr::Mul(a, b) => out = mul(&taylor_at_one(a, order)?, &taylor_at_one(b, order)?, order),
        Expr::Pow(a, k) => {
            let base = taylor_at_one(a, order)?;
            out[0] = Rational::from(1);
            for _ in 0..*k {
                out = mul(&out, &base, order);
            }
        }
        Expr::Div(a, b) => {
            let den = taylor_at_one(b, order)?;
            let Some(s) = den.iter().position(|q| *q != 0) else {
                return Err(unsupported(e, "division by zero"));
            };
            let (num, den) = (taylor_at_one(a, order + s)?, taylor_at_one(b, order + s)?);
            if num[..s].iter().any(|q| *q != 0) {
                return Err(unsupported(e, "pole at x = 1"));
            }
            // num/den after removing t^s from both
            let (num, den) = (&num[s..], &den[s..]);
            for i in 0..order {
                let mut acc = num[i].clone();
                for j in 1..=i {
                    acc -= Rational::from(&den[j] * &out[i - j]);
                }
                out[i] = acc / &den[0];
            }
        }
        _ => return Err(unsupported(e, "not a function of x")),
    }
    Ok(out)
}

/// The expansion of `Σ a_n n!/(z)_{n+1}` in `1/z` to order `order`.
pub fn factorial_to_inverse_powers(a: &[Rational], order: usize) -> Vec<Rational> {
    let mut c = vec![Rational::new(); order];
    // p holds the series of Π_{j=0}^{n} 1/(1 + j u) in u = 1/z
    let mut p = vec![Rational::new(); order];
    p[0] = Rational::from(1);
    let mut fact = Integer::from(1);
    for (n, an) in a.iter().enumerate().take(order) {
        if n > 0 {
            fact *= n as u32;
            for i in 1..order {
                let prev = Rational::from(&p[i - 1] * n as u32);
                p[i] -= prev;
            }
        }
        if *an == 0 {
            continue;
        }
        let w = Rational::from(an * &fact);
        for i in 0..order - n {
            c[n + i] += Rational::from(&w * &p[i]);
        }
    }
    c
}

/// Inverse-power series of `∫_0^1 x^N kernel dx` in `z = N + 1`.
pub fn series_from_kernel(kernel: &Expr) -> Result<AsymptoticSeries> {
    series_from_kernel_to(kernel, DEFAULT_ORDER)
}

pub fn series_from_kernel_to(kernel: &Expr, order: usize) -> Result<AsymptoticSeries> {
    if kernel.mentions_n() {
        return Err(unsupported(kernel, "kernel must not depend on N"));
    }
    let a = taylor_at_one(kernel, order)?;
    Ok(AsymptoticSeries { coeffs: factorial_to_inverse_powers(&a, order), offset: 1, z_min: 25.0 })
}

/// `Li_k(1-x)/(1-x)`.
pub fn li_kernel(k: u32) -> Expr {
    Expr::Fun(Primitive::Li { k, arg: Arg::OneMinusX }) / (Expr::num(1, 1) - Expr::X)
}

pub fn tabulated() -> Vec<Rational> {
    LI5_TABULATED.iter().map(|s| s.parse().expect("tabulated coefficient")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn q(p: i64, r: i64) -> Rational {
        Rational::from((p, r))
    }

    #[test]
    fn li5_matches_table() {
        let s = series_from_kernel(&parse("Li5(1-x)/(1-x)").unwrap()).unwrap();
        assert_eq!(s.coeffs[..19], tabulated()[..]);
        assert_eq!(s.coeffs, series_from_kernel(&li_kernel(5)).unwrap().coeffs);
    }

    #[test]
    fn geometric_kernels() {
        // ∫ x^N dx = 1/(N+1)
        let one = series_from_kernel(&Expr::num(1, 1)).unwrap();
        assert_eq!(one.coeffs[0], 1);
        assert!(one.coeffs[1..].iter().all(|c| *c == 0));
        let n = one.reexpand(0);
        for (i, c) in n.coeffs.iter().enumerate() {
            assert_eq!(*c, if i % 2 == 0 { 1 } else { -1 });
        }
        let lin = series_from_kernel(&parse("1-x").unwrap()).unwrap().reexpand(0);
        assert_eq!(lin.coeffs[..4], [q(0, 1), q(1, 1), q(-3, 1), q(7, 1)]);
    }

    #[test]
    fn trigamma_is_bernoulli() {
        // Li1(1-x)/(1-x) = -ln x/(1-x): ψ'(z) = 1/z + 1/(2z^2) + Σ B_2j / z^(2j+1)
        let s = series_from_kernel(&li_kernel(1)).unwrap();
        assert_eq!(s.coeffs[..5], [q(1, 1), q(1, 2), q(1, 6), q(0, 1), q(-1, 30)]);
        let alt = series_from_kernel(&parse("-ln(x)/(1-x)").unwrap()).unwrap();
        assert_eq!(s, alt);
    }

    #[test]
    fn rejects_singular_kernels() {
        for k in ["ln(1-x)/(1-x)", "Li2(x)/(1-x)", "zeta(2)", "1/(1-x)", "Li2(-x)"] {
            let e = series_from_kernel(&parse(k).unwrap()).unwrap_err();
            assert!(matches!(e, Error::Unsupported(_)), "{k}: {e}");
        }
    }

    #[test]
    fn eval_and_bound() {
        let s = series_from_kernel(&li_kernel(5)).unwrap();
        let z = Complex::with_val(128, (40, 0));
        let a = asym_eval(&s, &z, 19).unwrap();
        let b = asym_eval(&s, &z, 18).unwrap();
        let d = Float::with_val(128, (a.value.clone() - b.value).abs().real());
        assert!(d <= Float::with_val(128, &b.bound * 1.000001));
        assert!(a.bound < 1e-28 && a.bound > 1e-32);
        assert!(asym_eval(&s, &Complex::with_val(128, (3, 0)), 19).is_err());
        assert!(asym_eval(&s, &z, 0).is_err());
        assert!(s.threshold(19, 30, 25.0) > 30.0);
    }
}
