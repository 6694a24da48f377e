//! Arbitrary-precision kernel functions on `[-1, 1]`: classical and Nielsen
//! polylogarithms, harmonic polylogarithms, the auxiliary integrals
//! `A_1..A_3`, and the named-constant registry.
//!
//! Everything is built from harmonic polylogarithms over `{0, 1, -1}`,
//! represented as [`UnitFunction`]s and cached per word inside one
//! [`SpecFun`] context per precision.

pub mod constants;
pub mod hpl;
pub mod primitive;
pub mod quad;
pub mod series;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::{Pow, PowAssign};
use rug::Float;
use serde::Serialize;

pub use constants::{ConstantName, Provenance};
pub use hpl::HplWord;
pub use primitive::{Arg, LnArg, Primitive};
pub use quad::{QuadResult, TanhSinh};
pub use series::{Letter, UnitFunction, UnitPoint};

use crate::error::{Error, Result};
use crate::num::{fmt_sci, ln2, Precision};

/// Evaluation context for one working precision.
///
/// Built functions and constants are cached; all caches are
/// fill-once, so a shared context can be read from many threads.
#[derive(Debug)]
pub struct SpecFun {
    prec: Precision,
    bits: u32,
    order: usize,
    words: Mutex<HashMap<HplWord, Arc<UnitFunction>>>,
    prims: Mutex<HashMap<Primitive, Arc<UnitFunction>>>,
    constants: Mutex<HashMap<ConstantName, Float>>,
    quad: OnceLock<TanhSinh>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantEntry {
    pub name: String,
    pub digits: u32,
    pub value: String,
    pub provenance: Provenance,
}

fn registry() -> &'static Mutex<HashMap<Precision, Arc<SpecFun>>> {
    static REG: OnceLock<Mutex<HashMap<Precision, Arc<SpecFun>>>> = OnceLock::new();
    REG.get_or_init(Default::default)
}

impl SpecFun {
    pub fn new(prec: Precision) -> Self {
        let bits = prec.bits();
        Self {
            prec,
            bits,
            order: series::order_for_bits(bits),
            words: Mutex::default(),
            prims: Mutex::default(),
            constants: Mutex::default(),
            quad: OnceLock::new(),
        }
    }

    /// The process-wide context for `prec`, created on first use.
    pub fn shared(prec: Precision) -> Arc<SpecFun> {
        let mut reg = registry().lock().expect("registry poisoned");
        reg.entry(prec).or_insert_with(|| Arc::new(SpecFun::new(prec))).clone()
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn quadrature(&self) -> &TanhSinh {
        self.quad.get_or_init(|| TanhSinh::new(self.bits))
    }

    pub fn float(&self, v: impl Into<f64>) -> Float {
        Float::with_val(self.bits, v.into())
    }

    pub fn one_fn(&self) -> UnitFunction {
        UnitFunction::one(self.bits, self.order)
    }

    pub fn const_fn(&self, c: &Float) -> UnitFunction {
        UnitFunction::constant(self.bits, self.order, c)
    }

    /// `H_w(x)` on `[0, 1]`.
    pub fn word(&self, w: &HplWord) -> Arc<UnitFunction> {
        if let Some(f) = self.words.lock().expect("cache poisoned").get(w) {
            return f.clone();
        }
        let letters = w.letters();
        let inner = match HplWord::new(letters[1..].to_vec()) {
            Ok(tail) => (*self.word(&tail)).clone(),
            Err(_) => self.one_fn(),
        };
        let built = Arc::new(inner.integrate(HplWord::letter(letters[0])));
        self.words.lock().expect("cache poisoned").entry(w.clone()).or_insert(built).clone()
    }

    fn word_at(&self, letters: Vec<i8>, arg: Arg) -> Result<UnitFunction> {
        let w = HplWord::new(letters)?;
        Ok(match arg {
            Arg::X => (*self.word(&w)).clone(),
            Arg::MinusX => {
                let sign = if w.nonzero_letters() % 2 == 1 { -1 } else { 1 };
                self.word(&w.negated()).scaled(&self.float(sign))
            }
            Arg::OneMinusX => self.word(&w).reflect(),
            Arg::XSquared => return Err(Error::Unsupported(format!("H[{w}](x^2)"))),
        })
    }

    /// The function `p(x)` on `[0, 1]`.
    pub fn primitive(&self, p: &Primitive) -> Result<Arc<UnitFunction>> {
        if let Some(f) = self.prims.lock().expect("cache poisoned").get(p) {
            return Ok(f.clone());
        }
        let built = Arc::new(self.build_primitive(p)?);
        Ok(self.prims.lock().expect("cache poisoned").entry(p.clone()).or_insert(built).clone())
    }

    fn build_primitive(&self, p: &Primitive) -> Result<UnitFunction> {
        match p {
            Primitive::Li { k, arg } => {
                if !(1..=6).contains(k) {
                    return Err(Error::UnknownName(format!("Li{k}")));
                }
                match arg {
                    Arg::XSquared => {
                        // Li_k(x^2) = 2^{k-1} (Li_k(x) + Li_k(-x))
                        let plus = self.primitive(&Primitive::Li { k: *k, arg: Arg::X })?;
                        let minus = self.primitive(&Primitive::Li { k: *k, arg: Arg::MinusX })?;
                        let s = self.float(2f64.powi(*k as i32 - 1));
                        Ok(plus.add_scaled(&minus, &self.float(1)).scaled(&s))
                    }
                    Arg::MinusX => {
                        let mut w = vec![0i8; *k as usize - 1];
                        w.push(-1);
                        Ok(self.word_at(w, Arg::X)?.scaled(&self.float(-1)))
                    }
                    _ => {
                        let mut w = vec![0i8; *k as usize - 1];
                        w.push(1);
                        self.word_at(w, *arg)
                    }
                }
            }
            Primitive::Nielsen { p, n, arg } => {
                if *p < 1 || *n < 1 || p + n > 6 {
                    return Err(Error::UnknownName(format!("S{p}{n}")));
                }
                self.word_at(HplWord::nielsen(*p, *n).letters().to_vec(), *arg)
            }
            Primitive::Hpl { word, arg } => self.word_at(word.letters().to_vec(), *arg),
            Primitive::Aux { i, arg } => self.build_aux(*i, *arg),
            Primitive::Ln(a) => {
                let (letter, sign) = match a {
                    LnArg::X => (0i8, 1),
                    LnArg::OnePlusX => (-1, 1),
                    LnArg::OneMinusX => (1, -1),
                };
                Ok(self.word_at(vec![letter], Arg::X)?.scaled(&self.float(sign)))
            }
        }
    }

    fn build_aux(&self, i: u8, arg: Arg) -> Result<UnitFunction> {
        if arg == Arg::OneMinusX {
            return Ok(self.build_aux(i, Arg::X)?.reflect());
        }
        let integrand = match (i, arg) {
            (1, Arg::X | Arg::MinusX) => {
                let li2 = self.primitive(&Primitive::Li { k: 2, arg })?;
                li2.mul(&li2)
            }
            (2, Arg::X) => {
                let l = self.primitive(&Primitive::Ln(LnArg::OneMinusX))?;
                let s12 = self.primitive(&Primitive::Nielsen { p: 1, n: 2, arg: Arg::X })?;
                l.mul(&s12)
            }
            (3, Arg::X) => {
                let li4 = self.primitive(&Primitive::Li { k: 4, arg: Arg::OneMinusX })?;
                let z4 = self.constant(ConstantName::Zeta(4))?;
                let mut f = li4.add_scaled(&self.const_fn(&z4), &self.float(-1));
                f.pin_zero_at_origin();
                f
            }
            (1..=3, _) => return Err(Error::Domain(format!("A{i}({arg}) is not supported"))),
            _ => return Err(Error::UnknownName(format!("A{i}"))),
        };
        Ok(integrand.integrate(Letter::Zero))
    }

    pub fn constant(&self, c: ConstantName) -> Result<Float> {
        let c = c.validate()?;
        if let Some(v) = self.constants.lock().expect("cache poisoned").get(&c) {
            return Ok(v.clone());
        }
        let bits = self.bits;
        let v = match c {
            ConstantName::Zeta(k) => Float::with_val(bits, k).zeta(),
            ConstantName::Ln2 => ln2(bits),
            ConstantName::LiHalf(k) => li_half(bits, k),
            ConstantName::S6 => {
                let li5 = self.primitive(&Primitive::Li { k: 5, arg: Arg::X })?;
                let integral = self
                    .quadrature()
                    .integrate(&self.prec.target(), |pt| {
                        let d = Float::with_val(bits, 1 + &pt.x);
                        li5.eval(pt) / d
                    })?
                    .value;
                let z5 = self.constant(ConstantName::Zeta(5))?;
                Float::with_val(bits, ln2(bits) * z5) * 15u32 / 16u32 + integral
            }
        };
        self.constants.lock().expect("cache poisoned").insert(c, v.clone());
        Ok(v)
    }

    pub fn constants_table(&self) -> Result<Vec<ConstantEntry>> {
        ConstantName::all()
            .into_iter()
            .map(|c| {
                let v = self.constant(c)?;
                Ok(ConstantEntry {
                    name: c.to_string(),
                    digits: self.prec.requested(),
                    value: fmt_sci(&v, self.prec.requested() as usize),
                    provenance: c.provenance(),
                })
            })
            .collect()
    }

    /// Evaluates `f` at `x ∈ [0, 1]`, endpoints included when finite.
    pub fn eval_on_unit(&self, f: &UnitFunction, x: &Float, what: &str) -> Result<Float> {
        if *x < 0 || *x > 1 {
            return Err(Error::Domain(format!("{what}: x = {} outside [0, 1]", x.to_f64())));
        }
        if x.is_zero() {
            return f.value_at_zero().ok_or_else(|| Error::Domain(format!("{what} diverges at x = 0")));
        }
        if *x == 1 {
            return f.value_at_one().ok_or_else(|| Error::Domain(format!("{what} diverges at x = 1")));
        }
        Ok(f.eval(&UnitPoint::from_x(self.bits, x)))
    }

    fn check_unit_interval(&self, x: &Float, what: &str) -> Result<()> {
        if x.is_nan() || x.clone().abs() > 1 {
            return Err(Error::Domain(format!("{what}: |x| > 1 is outside the supported domain")));
        }
        Ok(())
    }

    /// `Li_k(x)`, `|x| <= 1`.
    pub fn polylog(&self, k: u32, x: &Float) -> Result<Float> {
        self.check_unit_interval(x, "Li")?;
        if *x == 1 {
            if k < 2 {
                return Err(Error::Domain("Li1(1) diverges".into()));
            }
            return self.constant(ConstantName::Zeta(k));
        }
        if *x == -1 && k >= 2 {
            // Li_k(-1) = -(1 - 2^{1-k}) ζ_k
            let z = self.constant(ConstantName::Zeta(k))?;
            let f = self.float(1.0 - 2f64.powi(1 - k as i32));
            return Ok(-(z * f));
        }
        let (arg, ax) = split_sign(x);
        let f = self.primitive(&Primitive::Li { k, arg })?;
        self.eval_on_unit(&f, &ax, "Li")
    }

    /// Nielsen `S_{p,n}(x)`, `|x| <= 1`, `p + n <= 6`.
    pub fn nielsen(&self, p: u32, n: u32, x: &Float) -> Result<Float> {
        self.check_unit_interval(x, "S_{p,n}")?;
        let (arg, ax) = split_sign(x);
        let f = self.primitive(&Primitive::Nielsen { p, n, arg })?;
        self.eval_on_unit(&f, &ax, "S_{p,n}")
    }

    /// Nielsen `S_{p,n}(x)` straight from its integral representation
    /// `(-1)^{p+n+1}/((p-1)! n!) ∫_0^1 dz/z ln^{p-1}(z) ln^n(1 - x z)`.
    pub fn nielsen_by_quadrature(&self, p: u32, n: u32, x: &Float) -> Result<Float> {
        self.check_unit_interval(x, "S_{p,n}")?;
        if p < 1 || n < 1 {
            return Err(Error::Domain(format!("S_{{{p},{n}}} needs p, n >= 1")));
        }
        let bits = self.bits;
        let is_one = *x == 1;
        let res = self.quadrature().integrate(&self.prec.target(), |pt| {
            let l = if is_one {
                pt.ln_t.clone()
            } else {
                Float::with_val(bits, -(Float::with_val(bits, x * &pt.x))).ln_1p()
            };
            let lz = Float::with_val(bits, (&pt.ln_x).pow(p as i32 - 1));
            Float::with_val(bits, (&l).pow(n as i32)) * lz / &pt.x
        })?;
        let fact = |m: u32| (1..=m).fold(Float::with_val(bits, 1), |a, i| a * i);
        let sign = if (p + n + 1).is_multiple_of(2) { 1 } else { -1 };
        Ok(res.value * sign / (fact(p - 1) * fact(n)))
    }

    /// `H_w(x)` for `x ∈ [0, 1]`; divergent endpoint values are domain errors.
    pub fn hpl(&self, w: &HplWord, x: &Float) -> Result<Float> {
        let f = self.word(w);
        self.eval_on_unit(&f, x, &format!("H[{w}]"))
    }

    /// `A_1(x)` on `[-1, 1]`; `A_2`, `A_3` on `[0, 1]`.
    pub fn aux_a(&self, i: u8, x: &Float) -> Result<Float> {
        self.check_unit_interval(x, "A_i")?;
        let (arg, ax) = split_sign(x);
        if i != 1 && arg == Arg::MinusX {
            return Err(Error::Domain(format!("A{i} needs x in [0, 1]")));
        }
        let f = self.primitive(&Primitive::Aux { i, arg })?;
        self.eval_on_unit(&f, &ax, "A_i")
    }

    /// `S_{1,k}(1 - x)` for `k = 2, 3, 4` from its closed form in
    /// `Li_m(x)`, `ln x`, `ln(1 - x)`; the endpoint limits are returned
    /// at `x = 0` and `x = 1`.
    pub fn s1k_of_1mx(&self, k: u32, x: &Float) -> Result<Float> {
        if !(2..=4).contains(&k) {
            return Err(Error::Domain(format!("S_{{1,{k}}}(1-x) closed form needs k in 2..=4")));
        }
        if *x < 0 || *x > 1 {
            return Err(Error::Domain("S_{1,k}(1-x) needs x in [0, 1]".into()));
        }
        let zeta = self.constant(ConstantName::Zeta(k + 1))?;
        if *x == 1 {
            return Ok(self.float(0));
        }
        if x.is_zero() {
            return Ok(zeta);
        }
        let bits = self.bits;
        let lx = Float::with_val(bits, x.ln_ref());
        let l1x = Float::with_val(bits, -x.clone()).ln_1p();
        let li = |m: u32| self.polylog(m, x);
        let v = match k {
            2 => -li(3)? + Float::with_val(bits, &lx * li(2)?) + Float::with_val(bits, &l1x * lx.clone().square()) / 2u32,
            3 => {
                -li(4)? + Float::with_val(bits, &lx * li(3)?)
                    - Float::with_val(bits, lx.clone().square() * li(2)?) / 2u32
                    - Float::with_val(bits, lx.clone().pow(3u32) * &l1x) / 6u32
            }
            _ => {
                -li(5)? + Float::with_val(bits, &lx * li(4)?)
                    - Float::with_val(bits, lx.clone().square() * li(3)?) / 2u32
                    + Float::with_val(bits, lx.clone().pow(3u32) * li(2)?) / 6u32
                    + Float::with_val(bits, lx.clone().pow(4u32) * &l1x) / 24u32
            }
        };
        Ok(v + zeta)
    }
}

fn split_sign(x: &Float) -> (Arg, Float) {
    if x.is_sign_negative() && !x.is_zero() {
        (Arg::MinusX, Float::with_val(x.prec(), -x))
    } else {
        (Arg::X, x.clone())
    }
}

/// `Li_k(1/2) = Σ 2^-n n^-k`.
fn li_half(bits: u32, k: u32) -> Float {
    let mut sum = Float::new(bits);
    let mut p = Float::with_val(bits, 1);
    for n in 1..=(bits + 16) {
        p /= 2u32;
        let mut nk = Float::with_val(bits, n);
        nk.pow_assign(k);
        sum += Float::with_val(bits, &p / &nk);
    }
    sum
}
