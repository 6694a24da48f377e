//! Numeric Mellin transforms `∫_0^1 x^N f(x) dx` of kernels built from the
//! special functions, with the `+` prescription, real or complex `N`, the
//! one-step recursions in `N`, derivatives in `N`, and the half-argument
//! relation between `Li_k(x^2)` and `Li_k(±x)`.
//!
//! Each kernel is evaluated once per quadrature node and cached; changing
//! `N` only changes the cheap `x^N` weights.

mod duplicate;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float};
use serde::Serialize;

pub use duplicate::{duplicate, DuplicationReport, DuplicationVariant};

use crate::error::{Error, Result};
use crate::expr::{parse, Denominator, Expr, Kernel, MellinAtom};
use crate::num::{complex_abs, log10_abs, serialize_float};
use crate::specfun::quad::MAX_LEVEL;
use crate::specfun::{SpecFun, UnitPoint};

/// A transform value with the quadrature's error estimate.
#[derive(Clone, Debug, Serialize)]
pub struct MellinValue {
    #[serde(serialize_with = "serialize_float")]
    pub value: Float,
    #[serde(serialize_with = "serialize_float")]
    pub error: Float,
    pub level: usize,
}

#[derive(Clone, Debug)]
pub struct ComplexMellinValue {
    pub value: Complex,
    pub error: Float,
    pub level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Den {
    None,
    XMinusOne,
    OneMinusX,
    PlusOne,
    XSquaredMinusOne,
}

impl From<Denominator> for Den {
    fn from(d: Denominator) -> Self {
        match d {
            Denominator::None => Den::None,
            Denominator::XMinusOne => Den::XMinusOne,
            Denominator::OneMinusX => Den::OneMinusX,
            Denominator::XPlusOne | Denominator::OnePlusX => Den::PlusOne,
            Denominator::XSquaredMinusOne => Den::XSquaredMinusOne,
        }
    }
}

impl Den {
    /// The denominator vanishes at `x = 1`.
    fn singular_at_one(self) -> bool {
        matches!(self, Den::XMinusOne | Den::OneMinusX | Den::XSquaredMinusOne)
    }

    fn reciprocal(self, pt: &UnitPoint, bits: u32) -> Option<Float> {
        Some(match self {
            Den::None => return None,
            Den::XMinusOne => -Float::with_val(bits, pt.t.recip_ref()),
            Den::OneMinusX => Float::with_val(bits, pt.t.recip_ref()),
            Den::PlusOne => Float::with_val(bits, 1 + &pt.x).recip(),
            Den::XSquaredMinusOne => -(Float::with_val(bits, 1 + &pt.x) * &pt.t).recip(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Weight {
    /// `x^N`
    Power,
    /// `x^N - 1`
    PlusPower,
    /// `x^N ln^l x`
    LogPower(u32),
}

/// Kernel times denominator times quadrature weight, per node and level.
struct Table {
    kernel: Kernel,
    den: Den,
    levels: Vec<OnceLock<Vec<Float>>>,
}

/// Power weights per quadrature level, keyed by exponent text.
type WeightKey = (String, usize, Weight);

/// Mellin transforms at one working precision.
pub struct MellinEngine {
    ctx: Arc<SpecFun>,
    tables: Mutex<HashMap<(Expr, Den), Arc<Table>>>,
    weights: Mutex<HashMap<WeightKey, Arc<Vec<Float>>>>,
}

impl std::fmt::Debug for MellinEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MellinEngine").field("precision", &self.ctx.precision()).finish()
    }
}

fn integer_arg(n: &Float) -> Option<u32> {
    if n.is_integer() && *n >= 0 && *n <= 256 {
        n.to_u32_saturating()
    } else {
        None
    }
}

impl MellinEngine {
    pub fn new(ctx: Arc<SpecFun>) -> Self {
        Self { ctx, tables: Mutex::default(), weights: Mutex::default() }
    }

    pub fn context(&self) -> &Arc<SpecFun> {
        &self.ctx
    }

    fn bits(&self) -> u32 {
        self.ctx.bits()
    }

    fn table(&self, kernel: &Expr, den: Den) -> Result<Arc<Table>> {
        let key = (kernel.clone(), den);
        if let Some(t) = self.tables.lock().expect("table cache poisoned").get(&key) {
            return Ok(t.clone());
        }
        let compiled = Kernel::compile(kernel, &self.ctx)?;
        let table = Arc::new(Table {
            kernel: compiled,
            den,
            levels: (0..=MAX_LEVEL).map(|_| OnceLock::new()).collect(),
        });
        Ok(self.tables.lock().expect("table cache poisoned").entry(key).or_insert(table).clone())
    }

    fn level_values<'a>(&self, table: &'a Table, level: usize) -> &'a [Float] {
        table.levels[level].get_or_init(|| {
            let bits = self.bits();
            crate::par::map(self.ctx.quadrature().level(level), |node| {
                let mut v = table.kernel.eval(&node.pt) * &node.weight;
                if let Some(r) = table.den.reciprocal(&node.pt, bits) {
                    v *= r;
                }
                v
            })
        })
    }

    fn weights(&self, n: &Float, level: usize, kind: Weight) -> Arc<Vec<Float>> {
        let key = (n.to_string_radix(16, None), level, kind);
        if let Some(w) = self.weights.lock().expect("weight cache poisoned").get(&key) {
            return w.clone();
        }
        let bits = self.bits();
        let int = integer_arg(n);
        let w = crate::par::map(self.ctx.quadrature().level(level), |node| {
            let pt = &node.pt;
            match kind {
                Weight::Power => match int {
                    Some(k) => Float::with_val(bits, rug::ops::Pow::pow(&pt.x, k)),
                    None => Float::with_val(bits, n * &pt.ln_x).exp(),
                },
                // x^N - 1 = -(1 - x)(1 + x + ... + x^{N-1}) has no cancellation
                Weight::PlusPower => match int {
                    Some(k) => {
                        let mut acc = Float::new(bits);
                        let mut p = Float::with_val(bits, 1);
                        for _ in 0..k {
                            acc += &p;
                            p *= &pt.x;
                        }
                        -(acc * &pt.t)
                    }
                    None => Float::with_val(bits, n * &pt.ln_x).exp_m1(),
                },
                Weight::LogPower(l) => {
                    let p = Float::with_val(bits, n * &pt.ln_x).exp();
                    p * Float::with_val(bits, rug::ops::Pow::pow(&pt.ln_x, l))
                }
            }
        });
        let w = Arc::new(w);
        self.weights.lock().expect("weight cache poisoned").entry(key).or_insert(w).clone()
    }

    fn check(&self, atom: &MellinAtom, n: &Float, weight: Weight) -> Result<()> {
        if *n <= -1 {
            return Err(Error::Domain(format!("Mellin transform needs N > -1, got {}", n.to_f64())));
        }
        let den = Den::from(atom.denominator);
        if weight == Weight::Power && den.singular_at_one() {
            let k = Kernel::compile(&atom.kernel, &self.ctx)?;
            let bits = self.bits();
            let t = Float::with_val(bits, 1u32) >> bits as i32;
            let pt = UnitPoint::new(Float::with_val(bits, 1 - &t), t);
            let tiny = Float::with_val(bits, 1u32) >> (bits / 2) as i32;
            if k.eval(&pt).abs() > tiny {
                return Err(Error::Domain(format!(
                    "{} does not vanish at x = 1, so its transform needs the + prescription",
                    atom.kernel
                )));
            }
        }
        Ok(())
    }

    fn integrate(&self, atom: &MellinAtom, n: &Float, weight: Weight) -> Result<MellinValue> {
        self.check(atom, n, weight)?;
        let table = self.table(&atom.kernel, atom.denominator.into())?;
        let target = self.ctx.precision().target();
        let res = self.ctx.quadrature().integrate_levels(&target, |level| {
            let g = self.level_values(&table, level);
            let w = self.weights(n, level, weight);
            let mut acc = Float::new(self.bits());
            for (a, b) in g.iter().zip(w.iter()) {
                acc += Float::with_val(self.bits(), a * b);
            }
            acc
        })?;
        Ok(MellinValue { value: res.value, error: res.error, level: res.level })
    }

    /// The atom's transform at real `n`, ignoring its stored argument.
    pub fn eval(&self, atom: &MellinAtom, n: &Float) -> Result<MellinValue> {
        self.integrate(atom, n, if atom.plus { Weight::PlusPower } else { Weight::Power })
    }

    /// `d^l/dN^l` of the transform, i.e. the transform with an extra `ln^l x`.
    pub fn differentiate(&self, atom: &MellinAtom, n: &Float, l: u32) -> Result<MellinValue> {
        if l == 0 {
            return self.eval(atom, n);
        }
        if !(1..=3).contains(&l) {
            return Err(Error::Unsupported(format!("derivative order {l} (supported: 1 to 3)")));
        }
        self.integrate(atom, n, Weight::LogPower(l))
    }

    /// `∫_0^1 x^n f(x) dx` for a plain kernel.
    pub fn moment(&self, kernel: &Expr, n: &Float) -> Result<MellinValue> {
        self.eval(&MellinAtom::new(kernel.clone(), Denominator::None, false), n)
    }

    /// Transform at complex `z`, `Re z > -1`.
    pub fn eval_complex(&self, atom: &MellinAtom, z: &Complex) -> Result<ComplexMellinValue> {
        let bits = self.bits();
        let (re, _) = z.clone().into_real_imag();
        self.check(atom, &re, if atom.plus { Weight::PlusPower } else { Weight::Power })?;
        let table = self.table(&atom.kernel, atom.denominator.into())?;
        let target = self.ctx.precision().target();
        let mut raw = Complex::new(bits);
        let mut prev: Option<Complex> = None;
        let mut last_err = Float::with_val(bits, f64::INFINITY);
        for level in 0..=MAX_LEVEL {
            let g = self.level_values(&table, level);
            let terms = crate::par::map(self.ctx.quadrature().level(level), |node| {
                let w = Complex::with_val(bits, z * &node.pt.ln_x);
                if atom.plus {
                    complex_expm1(&w)
                } else {
                    w.exp()
                }
            });
            for (a, w) in g.iter().zip(terms) {
                raw += w * a;
            }
            let h = Float::with_val(bits, 1u32) >> level as i32;
            let estimate = Complex::with_val(bits, &raw * &h);
            if let Some(p) = &prev {
                let err = complex_abs(&Complex::with_val(bits, &estimate - p));
                if level >= 3 && err <= target {
                    return Ok(ComplexMellinValue { value: estimate, error: err, level });
                }
                last_err = err;
            }
            prev = Some(estimate);
        }
        Err(Error::Quadrature { log10_err: log10_abs(&last_err), level: MAX_LEVEL })
    }

    /// The transform at `n + 1` from its value `f_n` at `n` and one plain
    /// moment of the kernel.
    pub fn recursion_step(&self, atom: &MellinAtom, f_n: &MellinValue, n: &Float) -> Result<MellinValue> {
        let m = self.moment(&atom.kernel, n)?;
        let mut error = Float::with_val(self.bits(), &f_n.error + &m.error);
        let value = match (Den::from(atom.denominator), atom.plus) {
            (Den::XMinusOne, _) => Float::with_val(self.bits(), &f_n.value + &m.value),
            (Den::OneMinusX, _) => Float::with_val(self.bits(), &f_n.value - &m.value),
            (Den::PlusOne, false) => Float::with_val(self.bits(), &m.value - &f_n.value),
            (Den::PlusOne, true) => {
                // x^{n+1} - 1 = (1 + x) x^n - (x^n - 1) - 2
                let at_zero = MellinAtom { plus: false, ..atom.clone() };
                let g0 = self.eval(&at_zero, &Float::new(self.bits()))?;
                error += Float::with_val(self.bits(), &g0.error * 2u32);
                Float::with_val(self.bits(), &m.value - &f_n.value) - g0.value * 2u32
            }
            _ => return Err(Error::Unsupported(format!("no one-step recursion for {atom}"))),
        };
        Ok(MellinValue { value, error, level: f_n.level.max(m.level) })
    }
}

/// `exp(w) - 1` without cancellation for small `|w|`.
fn complex_expm1(w: &Complex) -> Complex {
    let bits = w.prec().0;
    let (a, b) = (w.real(), w.imag());
    let ea = Float::with_val(bits, a.exp_m1_ref());
    let (s, c) = Float::with_val(bits, b).sin_cos(Float::new(bits));
    let half_sin = Float::with_val(bits, b / 2u32).sin();
    let cos_m1 = -(half_sin.square() * 2u32);
    let re = Float::with_val(bits, &ea * &c) + cos_m1;
    let im = (ea + 1u32) * s;
    Complex::with_val(bits, (re, im))
}

/// Parses a single `M[..](..)` atom.
pub fn atom(text: &str) -> Result<MellinAtom> {
    match parse(text)? {
        Expr::Mellin(m) => Ok(*m),
        other => Err(Error::Syntax { pos: 1, msg: format!("`{other}` is not a single Mellin atom") }),
    }
}
