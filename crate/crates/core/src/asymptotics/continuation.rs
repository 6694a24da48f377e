use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float};
use serde::Serialize;

use super::expansion::{order_for, SumExpansions};
use super::factorial::{asym_eval, li_kernel, series_from_kernel_to, AsymptoticSeries};
use crate::algebra::algebraic_reduce;
use crate::error::{Error, Result};
use crate::expr::{Denominator, Expr};
use crate::identities::catalog;
use crate::num::Precision;
use crate::specfun::{Arg, Primitive, SpecFun};
use crate::sums::IndexVector;

/// Highest `k` of the `Li_k(1-x)/(1-x)` family the engine knows.
pub const PHI_MAX: u32 = 5;
/// Coefficients derived for each family member.
const PHI_ORDER: usize = 160;
/// Coefficient count used when precision allows.
pub const DEFAULT_TERMS: usize = 19;
const Z_FLOOR: f64 = 25.0;
/// Beyond this threshold more terms are used instead of a larger shift.
const Z_CAP: f64 = 1000.0;

/// Sums continued through a relation in the built-in catalog.
const REPRESENTATIONS: &[(&[i32], &str, Route)] = &[
    (&[1, 1, 1, 1, 2], "S1,1,1,1,2", Route::FactorialSeries),
    (&[2, 1, 1, 1, 1], "S2,1,1,1,1.algebra", Route::Decomposition),
];

/// `∫_0^1 x^(z-1) Li_k(1-x)/(1-x) dx` in `1/z`, for `k = 1..=PHI_MAX`.
fn phi_series(k: u32) -> &'static AsymptoticSeries {
    static SERIES: OnceLock<Vec<AsymptoticSeries>> = OnceLock::new();
    let all = SERIES.get_or_init(|| {
        (1..=PHI_MAX).map(|k| series_from_kernel_to(&li_kernel(k), PHI_ORDER).expect("regular kernel")).collect()
    });
    &all[k as usize - 1]
}

/// Parity branch for `(-1)^N` at non-integer `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `η = +1`
    Even,
    /// `η = -1`
    Odd,
}

impl Branch {
    pub fn eta(self) -> i32 {
        match self {
            Branch::Even => 1,
            Branch::Odd => -1,
        }
    }

    /// The branch integer `n` lies on.
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Branch::Even
        } else {
            Branch::Odd
        }
    }

    fn flip_if(self, odd: bool) -> Self {
        match (self, odd) {
            (b, false) => b,
            (Branch::Even, true) => Branch::Odd,
            (Branch::Odd, true) => Branch::Even,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Even => "even",
            Branch::Odd => "odd",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" | "+1" | "1" => Ok(Branch::Even),
            "odd" | "-1" => Ok(Branch::Odd),
            _ => Err(Error::Domain(format!("unknown branch `{s}`; expected even or odd"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuationConfig {
    /// Asymptotic threshold: series are only evaluated at `|z| >= z_min`.
    pub z_min: f64,
    pub branch: Branch,
    #[serde(serialize_with = "ser_prec")]
    pub precision: Precision,
    /// Inverse powers taken from each factorial-series expansion.
    pub terms: usize,
}

fn ser_prec<S: serde::Serializer>(p: &Precision, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u32(p.requested())
}

fn required_z(terms: usize, digits: u32) -> f64 {
    (1..=PHI_MAX).map(|k| phi_series(k).threshold(terms, digits, Z_FLOOR)).fold(Z_FLOOR, f64::max)
}

impl ContinuationConfig {
    /// Smallest threshold with 19 terms whose truncation stays below
    /// `10^-P`; at high precision more terms keep the threshold moderate.
    pub fn new(precision: Precision, branch: Branch) -> Self {
        let digits = precision.requested();
        let mut terms = DEFAULT_TERMS;
        let mut z = required_z(terms, digits);
        while z > Z_CAP && terms + 8 < PHI_ORDER {
            terms += 4;
            z = required_z(terms, digits);
        }
        Self { z_min: z.ceil(), branch, precision, terms }
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    /// Checks that the threshold keeps the truncation below `10^-P`.
    pub fn validate(&self) -> Result<()> {
        if self.terms == 0 || self.terms + 4 > PHI_ORDER {
            return Err(Error::Domain(format!("terms must be in 1..={}", PHI_ORDER - 4)));
        }
        let need = required_z(self.terms, self.precision.requested());
        if !(self.z_min.is_finite() && self.z_min >= need) {
            return Err(Error::Domain(format!(
                "z_min = {} is too small for {} digits with {} terms (need {})",
                self.z_min,
                self.precision.requested(),
                self.terms,
                need.ceil()
            )));
        }
        Ok(())
    }
}

/// How a sum was continued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Large-`N` expansion plus downward recursion.
    EulerMaclaurin,
    /// Alternating single sum through non-alternating ones at `N/2`.
    Parity,
    /// Polynomial in single sums.
    Polynomial,
    /// `Li5(1-x)/(1-x)` factorial series plus single sums.
    FactorialSeries,
    /// Quasi-shuffle decomposition onto the factorial-series sum.
    Decomposition,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::EulerMaclaurin => "euler-maclaurin",
            Route::Parity => "parity",
            Route::Polynomial => "polynomial",
            Route::FactorialSeries => "factorial-series",
            Route::Decomposition => "decomposition",
        })
    }
}

/// Which route `continue_sum` takes for `v`, or why it cannot.
pub fn route(v: &IndexVector) -> Result<Route> {
    if v.depth() == 1 {
        return Ok(if v.is_alternating() { Route::Parity } else { Route::EulerMaclaurin });
    }
    if v.is_alternating() {
        return Err(Error::Unsupported(format!(
            "S[{v}]: continuation of alternating sums of depth > 1 is not available"
        )));
    }
    if let Some((_, _, r)) = REPRESENTATIONS.iter().find(|(w, _, _)| *w == v.entries()) {
        return Ok(*r);
    }
    let p = algebraic_reduce(v);
    if p.terms().all(|(m, _)| m.iter().all(|f| f.depth() == 1)) {
        return Ok(Route::Polynomial);
    }
    Ok(Route::EulerMaclaurin)
}

fn near_pole(n: &Complex, digits: u32) -> Option<i64> {
    let r = n.real().to_f64().round();
    if r > -1.0 {
        return None;
    }
    let bits = n.prec().0;
    let d = Float::with_val(bits, Complex::with_val(bits, n - r).abs_ref());
    (d < 10f64.powf(-f64::from(digits) / 2.0)).then_some(r as i64)
}

/// Continuation engine at one configuration. Expansions are built on first
/// use and shared between calls, so one engine serves many points.
pub struct Continuator {
    cfg: ContinuationConfig,
    bits: u32,
    ctx: Arc<SpecFun>,
    phi: Vec<AsymptoticSeries>,
    expansions: Mutex<HashMap<IndexVector, Arc<SumExpansions>>>,
}

impl fmt::Debug for Continuator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Continuator").field("cfg", &self.cfg).finish_non_exhaustive()
    }
}

impl Continuator {
    pub fn new(cfg: ContinuationConfig) -> Result<Self> {
        cfg.validate()?;
        let phi = (1..=PHI_MAX).map(|k| phi_series(k).clone().with_z_min(cfg.z_min)).collect();
        Ok(Self {
            bits: cfg.precision.bits(),
            ctx: SpecFun::shared(cfg.precision),
            cfg,
            phi,
            expansions: Mutex::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &ContinuationConfig {
        &self.cfg
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::with_val(self.bits, (re, im))
    }

    /// Upward shift bringing `z` to `|z| >= z_min` and `Re z >= z_min/2`.
    pub fn shift_for(&self, z: &Complex) -> u64 {
        let (re, im) = (z.real().to_f64(), z.imag().to_f64());
        let zm = self.cfg.z_min;
        let a = zm / 2.0 - re;
        let b = (zm * zm - im * im).max(0.0).sqrt() - re;
        a.max(b).max(0.0).ceil() as u64
    }

    fn pole_check(&self, what: &str, n: &Complex) -> Result<()> {
        match near_pole(n, self.cfg.precision.requested()) {
            Some(p) => Err(Error::Pole(format!("{what} at N = {p}"))),
            None => Ok(()),
        }
    }

    /// `S_v(N)` on the configured branch.
    pub fn value(&self, v: &IndexVector, n: &Complex) -> Result<Complex> {
        self.evaluate(v, n, self.cfg.branch, 0)
    }

    /// As [`Continuator::value`], starting the downward recursion `extra`
    /// steps higher than necessary.
    pub fn value_shifted(&self, v: &IndexVector, n: &Complex, extra: u64) -> Result<Complex> {
        self.evaluate(v, n, self.cfg.branch, extra)
    }

    /// `S_v(N)` on an explicit branch; integer checks use `Branch::of(N)`.
    pub fn value_on_branch(&self, v: &IndexVector, n: &Complex, branch: Branch) -> Result<Complex> {
        self.evaluate(v, n, branch, 0)
    }

    /// General form: explicit branch and `extra` additional upward steps.
    pub fn evaluate(&self, v: &IndexVector, n: &Complex, branch: Branch, extra: u64) -> Result<Complex> {
        let n = Complex::with_val(self.bits, n);
        self.pole_check(&format!("S[{v}]"), &n)?;
        match route(v)? {
            Route::EulerMaclaurin => self.recurse(v, &n, extra),
            Route::Parity => self.alternating_single(v, &n, branch, extra),
            Route::Polynomial => {
                let mut acc = Complex::new(self.bits);
                for (mono, c) in algebraic_reduce(v).terms() {
                    let mut t = Complex::with_val(self.bits, (Float::with_val(self.bits, c), 0));
                    for f in mono {
                        t *= self.evaluate(f, &n, branch, extra)?;
                    }
                    acc += t;
                }
                Ok(acc)
            }
            Route::FactorialSeries | Route::Decomposition => {
                let (_, id, _) = REPRESENTATIONS.iter().find(|(w, _, _)| *w == v.entries()).expect("listed");
                let rel = catalog().get(id).ok_or_else(|| Error::Catalog(format!("missing relation `{id}`")))?;
                self.eval_expr(&rel.rhs, &n, branch, extra)
            }
        }
    }

    fn expansions(&self, v: &IndexVector) -> Result<Arc<SumExpansions>> {
        if let Some(e) = self.expansions.lock().expect("expansion cache").get(v) {
            return Ok(e.clone());
        }
        let digits = self.cfg.precision.working_digits() + 5;
        let order = order_for(self.cfg.z_min, digits, v.depth());
        let fit = self.cfg.z_min.ceil().max(30.0) as u32;
        let e = Arc::new(SumExpansions::new(v, order, fit, self.bits)?);
        self.expansions.lock().expect("expansion cache").insert(v.clone(), e.clone());
        Ok(e)
    }

    /// Expansion at `N + m`, then `S_w(z-1) = S_w(z) - S_tail(z)/z^h` for
    /// every suffix `w` down to `N`.
    fn recurse(&self, v: &IndexVector, n: &Complex, extra: u64) -> Result<Complex> {
        let exp = self.expansions(v)?;
        let m = self.shift_for(n) + extra;
        let mut z = Complex::with_val(self.bits, n + m);
        let mut vals = exp.eval_all(&z);
        let hs: Vec<u32> = v.entries().iter().map(|&a| a as u32).collect();
        let hmax = *hs.iter().max().expect("nonempty") as usize;
        for _ in 0..m {
            let u = Complex::with_val(self.bits, z.recip_ref());
            let mut pows = vec![u.clone()];
            for i in 1..hmax {
                pows.push(Complex::with_val(self.bits, &pows[i - 1] * &u));
            }
            for (i, &h) in hs.iter().enumerate() {
                let t = Complex::with_val(self.bits, &pows[h as usize - 1] * &vals[i + 1]);
                vals[i] -= t;
            }
            z -= 1u32;
        }
        Ok(vals.swap_remove(0))
    }

    /// `S_{-k}(N) = 2^(1-k) S_k(N/2) - S_k(N)` on the even branch and
    /// `2^(1-k) S_k((N-1)/2) - S_k(N)` on the odd one.
    fn alternating_single(&self, v: &IndexVector, n: &Complex, branch: Branch, extra: u64) -> Result<Complex> {
        let k = v.entries()[0].unsigned_abs();
        let pos = IndexVector::new(vec![k as i32])?;
        let half = match branch {
            Branch::Even => Complex::with_val(self.bits, n / 2u32),
            Branch::Odd => Complex::with_val(self.bits, Complex::with_val(self.bits, n - 1u32) / 2u32),
        };
        if near_pole(&half, self.cfg.precision.requested()).is_some() {
            return Err(Error::Pole(format!("S[{v}] on the {branch} branch at N = {}", n.real().to_f64().round())));
        }
        let a = self.recurse(&pos, &half, extra)?;
        let b = self.recurse(&pos, n, extra)?;
        let scale = Float::with_val(self.bits, 1u32) >> (k as i32 - 1);
        Ok(Complex::with_val(self.bits, &a * &scale) - b)
    }

    /// `Φ_k(w) = ∫_0^1 x^(w-1) Li_k(1-x)/(1-x) dx`, from the factorial
    /// series at `w + m` and `Φ_k(w) = Φ_k(w+1) + Φ_{k-1}(w+1)/w`,
    /// `Φ_0(u) = 1/(u-1)`.
    pub fn phi(&self, k: u32, w: &Complex, extra: u64) -> Result<Complex> {
        if !(1..=PHI_MAX).contains(&k) {
            return Err(Error::Unsupported(format!("Li{k}(1-x)/(1-x) (available: k = 1..={PHI_MAX})")));
        }
        let w = Complex::with_val(self.bits, w);
        self.pole_check(&format!("M[Li{k}(1-x)/(1-x)]"), &Complex::with_val(self.bits, &w - 1u32))?;
        let m = self.shift_for(&w) + extra;
        let top = Complex::with_val(self.bits, &w + m);
        let mut vals = vec![Complex::new(self.bits)];
        for j in 1..=k {
            vals.push(asym_eval(&self.phi[j as usize - 1], &top, self.cfg.terms)?.value);
        }
        for step in (0..m).rev() {
            let u = Complex::with_val(self.bits, &w + step);
            let inv = Complex::with_val(self.bits, u.recip_ref());
            vals[0].clone_from(&inv);
            for j in (1..=k as usize).rev() {
                let t = Complex::with_val(self.bits, &vals[j - 1] * &inv);
                vals[j] += t;
            }
        }
        Ok(vals.swap_remove(k as usize))
    }

    fn affine(&self, a: &crate::expr::Affine, n: &Complex) -> Complex {
        let fa = Float::with_val(self.bits, &a.a);
        let fb = Float::with_val(self.bits, &a.b);
        Complex::with_val(self.bits, n * &fa) + fb
    }

    fn parity_of(a: &crate::expr::Affine, branch: Branch) -> Result<Branch> {
        if *a.a.denom() != 1 || *a.b.denom() != 1 {
            return Err(Error::Unsupported(format!("parity of non-integer argument {a}")));
        }
        // (-1)^(aN+b) = η^a (-1)^b
        let base = if a.a.numer().is_odd() { branch } else { Branch::Even };
        Ok(base.flip_if(a.b.numer().is_odd()))
    }

    /// Value of an expression in sums, constants and `Li_k(1-x)/(1-x)`
    /// transforms at complex `N`.
    pub fn eval_expr(&self, e: &Expr, n: &Complex, branch: Branch, extra: u64) -> Result<Complex> {
        let bits = self.bits;
        let r = |e: &Expr| self.eval_expr(e, n, branch, extra);
        Ok(match e {
            Expr::Num(q) => Complex::with_val(bits, (Float::with_val(bits, q), 0)),
            Expr::Const(c) => Complex::with_val(bits, (self.ctx.constant(*c)?, 0)),
            Expr::N => n.clone(),
            Expr::Parity(a) => {
                Complex::with_val(bits, (Self::parity_of(a, branch)?.eta(), 0))
            }
            Expr::Sum(v, a) => {
                let b = if a.is_constant() { branch } else { Self::parity_of(a, branch)? };
                self.evaluate(v, &self.affine(a, n), b, extra)?
            }
            Expr::Mellin(atom) => {
                let k = match (&atom.kernel, atom.denominator, atom.plus) {
                    (Expr::Fun(Primitive::Li { k, arg: Arg::OneMinusX }), Denominator::OneMinusX, false) => *k,
                    _ => {
                        return Err(Error::Unsupported(format!(
                            "M[{}]: kernel is not regular at x = 1",
                            atom.integrand_text()
                        )))
                    }
                };
                let w = self.affine(&atom.arg, n) + 1u32;
                self.phi(k, &w, extra)?
            }
            Expr::Add(a, b) => r(a)? + r(b)?,
            Expr::Sub(a, b) => r(a)? - r(b)?,
            Expr::Mul(a, b) => r(a)? * r(b)?,
            Expr::Div(a, b) => r(a)? / r(b)?,
            Expr::Neg(a) => -r(a)?,
            Expr::Pow(a, k) => {
                let base = r(a)?;
                let mut acc = Complex::with_val(bits, 1);
                for _ in 0..*k {
                    acc *= &base;
                }
                acc
            }
            other => return Err(Error::Unsupported(format!("`{other}` at complex N"))),
        })
    }
}

/// `S_v(N)` continued to complex `N` on the branch in `cfg`.
pub fn continue_sum(v: &IndexVector, n: &Complex, cfg: &ContinuationConfig) -> Result<Complex> {
    Continuator::new(cfg.clone())?.value(v, n)
}
