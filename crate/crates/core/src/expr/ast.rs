use std::fmt;

use rug::{Integer, Rational};

use crate::specfun::{Arg, ConstantName, LnArg, Primitive};
use crate::sums::IndexVector;

/// `a*N + b` with rational coefficients; the argument of sums, Mellin
/// atoms and parity factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub a: Rational,
    pub b: Rational,
}

impl Affine {
    pub fn n() -> Self {
        Self { a: Rational::from(1), b: Rational::new() }
    }

    pub fn constant(b: Rational) -> Self {
        Self { a: Rational::new(), b }
    }

    pub fn shifted(k: i64) -> Self {
        Self { a: Rational::from(1), b: Rational::from(k) }
    }

    pub fn at(&self, n: &Rational) -> Rational {
        Rational::from(&self.a * n) + &self.b
    }

    pub fn is_constant(&self) -> bool {
        self.a == 0
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = Integer::from(self.a.denom().lcm_ref(self.b.denom()));
        let p = Integer::from(self.a.numer() * &d) / self.a.denom();
        let q = Integer::from(self.b.numer() * &d) / self.b.denom();
        let mut num = String::new();
        if p != 0 {
            match p.to_i64() {
                Some(1) => num.push('N'),
                Some(-1) => num.push_str("-N"),
                _ => num.push_str(&format!("{p}*N")),
            }
        }
        if q != 0 || p == 0 {
            if p != 0 && q > 0 {
                num.push('+');
            }
            num.push_str(&q.to_string());
        }
        if d == 1 {
            f.write_str(&num)
        } else if p != 0 && q != 0 {
            write!(f, "({num})/{d}")
        } else {
            write!(f, "{num}/{d}")
        }
    }
}

/// Denominator of a Mellin atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Denominator {
    None,
    /// `x - 1`
    XMinusOne,
    /// `x + 1`
    XPlusOne,
    /// `1 + x`
    OnePlusX,
    /// `1 - x`
    OneMinusX,
    /// `x^2 - 1`
    XSquaredMinusOne,
}

impl Denominator {
    pub(crate) fn text(self) -> &'static str {
        match self {
            Denominator::None => "",
            Denominator::XMinusOne => "x-1",
            Denominator::XPlusOne => "x+1",
            Denominator::OnePlusX => "1+x",
            Denominator::OneMinusX => "1-x",
            Denominator::XSquaredMinusOne => "x^2-1",
        }
    }

    /// `1 + x` and `x + 1` are the same function.
    pub fn is_plus_one(self) -> bool {
        matches!(self, Denominator::XPlusOne | Denominator::OnePlusX)
    }
}

/// `M[kernel/denominator](arg)`, optionally with the `+` prescription,
/// meaning the weight `x^arg` is replaced by `x^arg - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MellinAtom {
    pub kernel: Expr,
    pub denominator: Denominator,
    pub plus: bool,
    pub arg: Affine,
}

impl MellinAtom {
    pub fn new(kernel: Expr, denominator: Denominator, plus: bool) -> Self {
        Self { kernel, denominator, plus, arg: Affine::n() }
    }

    /// The transformed function `kernel/denominator` as printed inside `M[..]`.
    pub fn integrand_text(&self) -> String {
        let mut s = String::new();
        write_expr(&mut s, &self.kernel, if self.denominator == Denominator::None { 0 } else { PREC_MUL });
        if self.denominator != Denominator::None {
            s.push_str(&format!("/({})", self.denominator.text()));
        }
        s
    }
}

/// Expression tree over harmonic sums, Mellin atoms, constants and
/// functions of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(Rational),
    Const(ConstantName),
    /// The sum argument `N`.
    N,
    /// The kernel variable `x`.
    X,
    /// `(-1)^(aN+b)`
    Parity(Affine),
    Sum(IndexVector, Affine),
    Mellin(Box<MellinAtom>),
    /// `∫_0^x kernel(y) dy`
    Int(Box<Expr>),
    /// A function of `x`.
    Fun(Primitive),
    /// A function at a fixed rational point, e.g. `S22(1)`.
    FunAt(Primitive, Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn num(p: i64, q: i64) -> Expr {
        Expr::Num(Rational::from((p, q)))
    }

    /// Calls `f` on every node, parents first.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Mellin(m) => m.kernel.visit(f),
            Expr::Int(k) | Expr::Neg(k) | Expr::Pow(k, _) => k.visit(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn mentions_x(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, Expr::X | Expr::Fun(_)));
        found
    }

    pub fn mentions_n(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            found |= match e {
                Expr::N => true,
                Expr::Parity(a) | Expr::Sum(_, a) => !a.is_constant(),
                Expr::Mellin(m) => !m.arg.is_constant(),
                _ => false,
            }
        });
        found
    }

    pub fn mellin_atoms(&self) -> Vec<&MellinAtom> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Mellin(m) = e {
                out.push(m.as_ref());
            }
        });
        out
    }

    pub fn sums(&self) -> Vec<&IndexVector> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Sum(v, _) = e {
                out.push(v);
            }
        });
        out
    }

    /// Top-level additive terms with their signs.
    pub fn additive_terms(&self) -> Vec<(bool, &Expr)> {
        fn rec<'a>(e: &'a Expr, neg: bool, out: &mut Vec<(bool, &'a Expr)>) {
            match e {
                Expr::Add(a, b) => {
                    rec(a, neg, out);
                    rec(b, neg, out);
                }
                Expr::Sub(a, b) => {
                    rec(a, neg, out);
                    rec(b, !neg, out);
                }
                Expr::Neg(a) => rec(a, !neg, out),
                _ => out.push((neg, e)),
            }
        }
        let mut out = Vec::new();
        rec(self, false, &mut out);
        out
    }
}

pub(crate) const PREC_ADD: u8 = 1;
pub(crate) const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
        Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
        Expr::Neg(_) => PREC_NEG,
        Expr::Num(q) if *q < 0 => PREC_NEG,
        Expr::Num(q) if *q.denom() != 1 => PREC_MUL,
        Expr::Pow(..) => PREC_POW,
        _ => PREC_ATOM,
    }
}

fn fmt_rational(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    let p = prec(e);
    let wrap = p < min_prec;
    if wrap {
        out.push('(');
    }
    match e {
        Expr::Num(q) => out.push_str(&fmt_rational(q)),
        Expr::Const(c) => out.push_str(&c.to_string()),
        Expr::N => out.push('N'),
        Expr::X => out.push('x'),
        Expr::Parity(a) => {
            let s = a.to_string();
            if s == "N" || s.parse::<i64>().is_ok_and(|k| k >= 0) {
                out.push_str(&format!("(-1)^{s}"));
            } else {
                out.push_str(&format!("(-1)^({s})"));
            }
        }
        Expr::Sum(v, a) => out.push_str(&format!("S[{v}]({a})")),
        Expr::Mellin(m) => {
            out.push_str(&format!("M[{}]", m.integrand_text()));
            if m.plus {
                out.push('+');
            }
            out.push_str(&format!("({})", m.arg));
        }
        Expr::Int(k) => {
            out.push_str("Int[");
            write_expr(out, k, 0);
            out.push(']');
        }
        Expr::Fun(p) => out.push_str(&p.to_string()),
        Expr::FunAt(p, at) => {
            let s = p.to_string();
            let name = s.strip_suffix("(x)").unwrap_or(&s);
            out.push_str(&format!("{name}({})", fmt_rational(at)));
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(out, a, PREC_ADD);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_expr(out, b, PREC_MUL);
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            write_expr(out, a, PREC_MUL);
            out.push(if matches!(e, Expr::Mul(..)) { '*' } else { '/' });
            write_expr(out, b, PREC_NEG + 1);
        }
        Expr::Neg(a) => {
            out.push('-');
            write_expr(out, a, PREC_POW);
        }
        Expr::Pow(a, k) => {
            write_expr(out, a, PREC_ATOM);
            out.push_str(&format!("^{k}"));
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Prints in the grammar accepted by [`super::parse`].
macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;

            fn $method(self, other: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(other))
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Sub);
binary_op!(Mul, mul, Mul);
binary_op!(Div, div, Div);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, 0);
        f.write_str(&s)
    }
}

impl fmt::Display for MellinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Expr::Mellin(Box::new(self.clone())).fmt(f)
    }
}

/// The primitive written `name(arg)` with a symbolic argument.
pub(crate) fn primitive_for(name: &str, arg: &str) -> Option<Primitive> {
    let a = match arg {
        "x" => Arg::X,
        "-x" => Arg::MinusX,
        "1-x" => Arg::OneMinusX,
        "x^2" => Arg::XSquared,
        "1+x" if name == "ln" => return Some(Primitive::Ln(LnArg::OnePlusX)),
        _ => return None,
    };
    if name == "ln" {
        return match a {
            Arg::X => Some(Primitive::Ln(LnArg::X)),
            Arg::OneMinusX => Some(Primitive::Ln(LnArg::OneMinusX)),
            _ => None,
        };
    }
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit()) && !s.is_empty();
    if let Some(k) = name.strip_prefix("Li").filter(|k| digits(k)) {
        return Some(Primitive::Li { k: k.parse().ok()?, arg: a });
    }
    if let Some(pn) = name.strip_prefix('S').filter(|s| s.len() == 2 && digits(s)) {
        let p = pn[..1].parse().ok()?;
        let n = pn[1..].parse().ok()?;
        return Some(Primitive::Nielsen { p, n, arg: a });
    }
    if let Some(i) = name.strip_prefix('A').filter(|s| digits(s)) {
        return Some(Primitive::Aux { i: i.parse().ok()?, arg: a });
    }
    None
}
