use std::cell::RefCell;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Rational};

use super::ast::{Affine, Expr};
use super::kernel::Kernel;
use crate::error::{Error, Result};
use crate::mellin::MellinEngine;
use crate::num::Precision;
use crate::specfun::{Arg, LnArg, Primitive, SpecFun, UnitPoint};
use crate::sums::{eval_exact, IndexVector};

/// Values of the free variables.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub n: Option<Rational>,
    pub x: Option<Rational>,
}

impl Env {
    pub fn at_n(n: i64) -> Self {
        Self { n: Some(Rational::from(n)), x: None }
    }

    pub fn at_x(x: Rational) -> Self {
        Self { n: None, x: Some(x) }
    }
}

fn need_n(env: &Env, e: &Expr) -> Result<Rational> {
    env.n.clone().ok_or_else(|| Error::Domain(format!("`{e}` needs a value for N")))
}

fn affine_at(a: &Affine, env: &Env, e: &Expr) -> Result<Rational> {
    if a.is_constant() {
        return Ok(a.b.clone());
    }
    Ok(a.at(&need_n(env, e)?))
}

fn integer(q: &Rational, what: &str) -> Result<i64> {
    if *q.denom() != 1 {
        return Err(Error::Domain(format!("{what} needs an integer argument, got {q}")));
    }
    q.numer().to_i64().ok_or_else(|| Error::Domain(format!("{what}: argument {q} too large")))
}

fn sum_exact(v: &IndexVector, m: i64) -> Result<Rational> {
    match m {
        0 => Ok(Rational::new()),
        m if m < 0 => Err(Error::Domain(format!("S[{v}] at negative argument {m}"))),
        m => Ok(eval_exact(v, m)?.into_rational()),
    }
}

fn parity(m: i64) -> i64 {
    if m.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exact value when `e` is rational at `env`, `None` if it involves any
/// transcendental part.
pub fn eval_rational(e: &Expr, env: &Env) -> Result<Option<Rational>> {
    let r = |e: &Expr| eval_rational(e, env);
    Ok(Some(match e {
        Expr::Num(q) => q.clone(),
        Expr::N => need_n(env, e)?,
        Expr::Parity(a) => Rational::from(parity(integer(&affine_at(a, env, e)?, "(-1)^")?)),
        Expr::Sum(v, a) => sum_exact(v, integer(&affine_at(a, env, e)?, "S")?)?,
        Expr::Neg(a) => match r(a)? {
            Some(q) => -q,
            None => return Ok(None),
        },
        Expr::Pow(a, k) => match r(a)? {
            Some(q) => q.pow(*k),
            None => return Ok(None),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            let (Some(p), Some(q)) = (r(a)?, r(b)?) else {
                return Ok(None);
            };
            match e {
                Expr::Add(..) => p + q,
                Expr::Sub(..) => p - q,
                Expr::Mul(..) => p * q,
                _ if q == 0 => return Err(Error::Domain(format!("division by zero in `{e}`"))),
                _ => p / q,
            }
        }
        _ => return Ok(None),
    }))
}

/// A function at a fixed point, e.g. `S32(-1)`.
pub(crate) fn fun_at(ctx: &SpecFun, e: &Expr) -> Result<Float> {
    let Expr::FunAt(p, q) = e else {
        unreachable!("fun_at called on {e}")
    };
    let x = Float::with_val(ctx.bits(), q);
    match p {
        Primitive::Li { k, arg: Arg::X } => ctx.polylog(*k, &x),
        Primitive::Nielsen { p, n, arg: Arg::X } => ctx.nielsen(*p, *n, &x),
        Primitive::Aux { i, arg: Arg::X } => ctx.aux_a(*i, &x),
        Primitive::Hpl { word, arg: Arg::X } => ctx.hpl(word, &x),
        Primitive::Ln(LnArg::X) if *q > 0 => Ok(x.ln()),
        _ => Err(Error::Unsupported(format!("`{e}`"))),
    }
}

/// Numeric evaluation of expressions at one working precision.
#[derive(Debug)]
pub struct Evaluator {
    ctx: Arc<SpecFun>,
    mellin: MellinEngine,
}

impl Evaluator {
    pub fn new(prec: Precision) -> Self {
        let ctx = SpecFun::shared(prec);
        Self { mellin: MellinEngine::new(ctx.clone()), ctx }
    }

    pub fn context(&self) -> &Arc<SpecFun> {
        &self.ctx
    }

    pub fn mellin(&self) -> &MellinEngine {
        &self.mellin
    }

    pub fn bits(&self) -> u32 {
        self.ctx.bits()
    }

    fn point(&self, x: &Rational) -> Result<UnitPoint> {
        if *x < 0 || *x > 1 {
            return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
        }
        let bits = self.bits();
        let t = Rational::from(1) - x;
        Ok(UnitPoint::new(Float::with_val(bits, x), Float::with_val(bits, &t)))
    }

    /// `e` at `env` to working precision.
    pub fn value(&self, e: &Expr, env: &Env) -> Result<Float> {
        if let Some(q) = eval_rational(e, env)? {
            return Ok(Float::with_val(self.bits(), &q));
        }
        let bits = self.bits();
        let v = |e: &Expr| self.value(e, env);
        Ok(match e {
            Expr::Const(c) => self.ctx.constant(*c)?,
            Expr::FunAt(..) => fun_at(&self.ctx, e)?,
            Expr::X | Expr::Fun(_) => {
                let x = env.x.as_ref().ok_or_else(|| Error::Domain(format!("`{e}` needs a value for x")))?;
                match e {
                    Expr::X => Float::with_val(bits, x),
                    Expr::Fun(p) => {
                        let f = self.ctx.primitive(p)?;
                        if *x == 0 || *x == 1 {
                            self.ctx.eval_on_unit(&f, &Float::with_val(bits, x), &p.to_string())?
                        } else {
                            f.eval(&self.point(x)?)
                        }
                    }
                    _ => unreachable!(),
                }
            }
            Expr::Mellin(m) => {
                let arg = affine_at(&m.arg, env, e)?;
                self.mellin.eval(m, &Float::with_val(bits, &arg))?.value
            }
            Expr::Int(k) => {
                let x = env.x.as_ref().ok_or_else(|| Error::Domain(format!("`{e}` needs a value for x")))?;
                self.integral(k, x)?
            }
            Expr::Neg(a) => -v(a)?,
            Expr::Pow(a, k) => v(a)?.pow(*k),
            Expr::Add(a, b) => v(a)? + v(b)?,
            Expr::Sub(a, b) => v(a)? - v(b)?,
            Expr::Mul(a, b) => v(a)? * v(b)?,
            Expr::Div(a, b) => {
                let d = v(b)?;
                if d.is_zero() {
                    return Err(Error::Domain(format!("division by zero in `{e}`")));
                }
                v(a)? / d
            }
            Expr::Num(_) | Expr::N | Expr::Parity(_) | Expr::Sum(..) => unreachable!("rational parts handled above"),
        })
    }

    /// `∫_0^x k(y) dy`.
    pub fn integral(&self, k: &Expr, x: &Rational) -> Result<Float> {
        let bits = self.bits();
        if *x == 0 {
            return Ok(Float::new(bits));
        }
        if *x < 0 || *x > 1 {
            return Err(Error::Domain(format!("integral up to x = {x} outside [0, 1]")));
        }
        let kernel = Kernel::compile(k, &self.ctx)?;
        let failed = RefCell::new(false);
        let res = self.ctx.quadrature().integrate_to(&Float::with_val(bits, x), &self.ctx.precision().target(), |pt| {
            let v = kernel.eval(pt);
            if !v.is_finite() {
                *failed.borrow_mut() = true;
                return Float::new(bits);
            }
            v
        })?;
        if failed.into_inner() {
            return Err(Error::Domain(format!("integrand `{k}` is not finite on (0, {x})")));
        }
        Ok(res.value)
    }
}
