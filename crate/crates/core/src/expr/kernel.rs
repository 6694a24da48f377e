use std::sync::Arc;

use rug::ops::Pow;
use rug::Float;

use super::ast::Expr;
use crate::error::{Error, Result};
use crate::specfun::{SpecFun, UnitFunction, UnitPoint};

/// A function of `x` with every named primitive resolved, so evaluation at
/// a quadrature node never touches a cache or fails.
#[derive(Clone, Debug)]
pub struct Kernel {
    root: Node,
    bits: u32,
}

#[derive(Clone, Debug)]
enum Node {
    Const(Float),
    X,
    /// `1 - x`, read from the node's `t` for full relative accuracy.
    OneMinusX,
    OnePlusX,
    Fun(Arc<UnitFunction>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Num(q) if *q == 1)
}

impl Kernel {
    pub fn compile(e: &Expr, ctx: &SpecFun) -> Result<Kernel> {
        Ok(Kernel { root: compile(e, ctx)?, bits: ctx.bits() })
    }

    pub fn eval(&self, pt: &UnitPoint) -> Float {
        eval(&self.root, pt, self.bits)
    }
}

fn compile(e: &Expr, ctx: &SpecFun) -> Result<Node> {
    let b = |e: &Expr| compile(e, ctx).map(Box::new);
    Ok(match e {
        Expr::Num(q) => Node::Const(Float::with_val(ctx.bits(), q)),
        Expr::Const(c) => Node::Const(ctx.constant(*c)?),
        Expr::FunAt(..) => Node::Const(super::eval::fun_at(ctx, e)?),
        Expr::X => Node::X,
        Expr::Fun(p) => Node::Fun(ctx.primitive(p)?),
        Expr::Sub(a, x) if is_one(a) && **x == Expr::X => Node::OneMinusX,
        Expr::Sub(x, a) if is_one(a) && **x == Expr::X => Node::Neg(Box::new(Node::OneMinusX)),
        Expr::Add(a, x) | Expr::Add(x, a) if is_one(a) && **x == Expr::X => Node::OnePlusX,
        Expr::Add(p, q) => Node::Add(b(p)?, b(q)?),
        Expr::Sub(p, q) => Node::Sub(b(p)?, b(q)?),
        Expr::Mul(p, q) => Node::Mul(b(p)?, b(q)?),
        Expr::Div(p, q) => Node::Div(b(p)?, b(q)?),
        Expr::Neg(p) => Node::Neg(b(p)?),
        Expr::Pow(p, k) => Node::Pow(b(p)?, *k),
        Expr::N | Expr::Parity(_) | Expr::Sum(..) | Expr::Mellin(_) | Expr::Int(_) => {
            return Err(Error::Unsupported(format!("`{e}` is not a function of x")))
        }
    })
}

fn eval(n: &Node, pt: &UnitPoint, bits: u32) -> Float {
    let f = |n: &Node| eval(n, pt, bits);
    match n {
        Node::Const(c) => c.clone(),
        Node::X => pt.x.clone(),
        Node::OneMinusX => pt.t.clone(),
        Node::OnePlusX => Float::with_val(bits, 1 + &pt.x),
        Node::Fun(u) => u.eval(pt),
        Node::Add(a, b) => f(a) + f(b),
        Node::Sub(a, b) => f(a) - f(b),
        Node::Mul(a, b) => f(a) * f(b),
        Node::Div(a, b) => f(a) / f(b),
        Node::Neg(a) => -f(a),
        Node::Pow(a, k) => f(a).pow(*k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::num::Precision;

    #[test]
    fn kernels_match_direct_evaluation() {
        let ctx = SpecFun::shared(Precision::digits(30));
        let bits = ctx.bits();
        let k = Kernel::compile(&parse("ln(x)*Li2(x)/(1-x) + zeta(2)*x^2").unwrap(), &ctx).unwrap();
        let x = Float::with_val(bits, 0.375);
        let pt = UnitPoint::from_x(bits, &x);
        let li2 = ctx.polylog(2, &x).unwrap();
        let z2 = ctx.constant(crate::specfun::ConstantName::Zeta(2)).unwrap();
        let want = Float::with_val(bits, x.ln_ref()) * li2 / Float::with_val(bits, 1 - &x)
            + z2 * Float::with_val(bits, x.square_ref());
        assert!((k.eval(&pt) - want).abs() < 1e-35);
        assert!(Kernel::compile(&parse("S[1](N)*x").unwrap(), &ctx).is_err());
    }
}
