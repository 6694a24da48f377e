//! Large-`N` expansions of non-alternating sums in powers of `1/N` and `ln N`.
//!
//! `S_{h,w}(N) = Σ_{k<=N} f(k)` with `f(k) = S_w(k)/k^h`, so Euler–Maclaurin
//! gives `S_{h,w}(N) = C + F(N) + f(N)/2 + Σ_j B_2j/(2j)! f^(2j-1)(N)`, where
//! `F` is the constant-free antiderivative. Expansions are built from the
//! innermost index outwards and each constant `C` is fixed by the value of
//! the sum at a large integer.

use rug::{Complex, Float, Rational};

use super::bernoulli::bernoulli_upto;
use crate::error::{Error, Result};
use crate::sums::{eval_float_upto, IndexVector};

/// `Σ_{b<=order} Σ_a coef[b][a] ln^a z / z^b`.
#[derive(Clone, Debug)]
pub struct LogExpansion {
    coef: Vec<Vec<Float>>,
    bits: u32,
}

impl LogExpansion {
    fn zero(order: usize, logs: usize, bits: u32) -> Self {
        Self { coef: vec![vec![Float::new(bits); logs + 1]; order + 1], bits }
    }

    fn one(order: usize, bits: u32) -> Self {
        let mut e = Self::zero(order, 0, bits);
        e.coef[0][0] += 1u32;
        e
    }

    pub fn order(&self) -> usize {
        self.coef.len() - 1
    }

    pub fn log_degree(&self) -> usize {
        self.coef[0].len() - 1
    }

    pub fn coeff(&self, b: usize, a: usize) -> Option<&Float> {
        self.coef.get(b).and_then(|r| r.get(a))
    }

    fn with_logs(&self, logs: usize) -> Self {
        let mut out = Self::zero(self.order(), logs.max(self.log_degree()), self.bits);
        for (b, row) in self.coef.iter().enumerate() {
            for (a, c) in row.iter().enumerate() {
                out.coef[b][a].clone_from(c);
            }
        }
        out
    }

    /// Multiplies by `z^-h`, dropping what falls beyond the order.
    fn shifted(&self, h: usize) -> Self {
        let mut out = Self::zero(self.order(), self.log_degree(), self.bits);
        for b in 0..(self.order() + 1).saturating_sub(h) {
            out.coef[b + h].clone_from(&self.coef[b]);
        }
        out
    }

    fn derivative(&self) -> Self {
        // d/dz ln^a z z^-b = (a ln^(a-1) z - b ln^a z) z^-(b+1)
        let mut out = Self::zero(self.order(), self.log_degree(), self.bits);
        for b in 0..self.order() {
            for (a, c) in self.coef[b].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if a > 0 {
                    out.coef[b + 1][a - 1] += Float::with_val(self.bits, c * a as u32);
                }
                out.coef[b + 1][a] -= Float::with_val(self.bits, c * b as u32);
            }
        }
        out
    }

    /// Constant-free antiderivative of an expansion without a `z^0` part.
    fn antiderivative(&self) -> Self {
        let mut out = Self::zero(self.order(), self.log_degree() + 1, self.bits);
        for (b, row) in self.coef.iter().enumerate() {
            for (a, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                match b {
                    0 => unreachable!("summand with a constant term"),
                    1 => out.coef[0][a + 1] += Float::with_val(self.bits, c / (a as u32 + 1)),
                    _ => {
                        // -z^(1-b) Σ_i a!/(a-i)! ln^(a-i) z / (b-1)^(i+1)
                        let mut f = Float::with_val(self.bits, c / (b as u32 - 1));
                        for i in 0..=a {
                            out.coef[b - 1][a - i] -= &f;
                            f *= (a - i) as u32;
                            f /= b as u32 - 1;
                        }
                    }
                }
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &Self, s: &Float) {
        for (row, orow) in self.coef.iter_mut().zip(&other.coef) {
            for (c, o) in row.iter_mut().zip(orow) {
                if !o.is_zero() {
                    *c += Float::with_val(self.bits, o * s);
                }
            }
        }
    }

    pub fn eval(&self, z: &Complex) -> Complex {
        let bits = self.bits;
        let l = Complex::with_val(bits, z.ln_ref());
        let u = Complex::with_val(bits, z.recip_ref());
        let mut lp = vec![Complex::with_val(bits, 1)];
        for a in 1..=self.log_degree() {
            lp.push(Complex::with_val(bits, &lp[a - 1] * &l));
        }
        let mut acc = Complex::new(bits);
        for row in self.coef.iter().rev() {
            acc *= &u;
            for (c, p) in row.iter().zip(&lp) {
                if !c.is_zero() {
                    acc += Complex::with_val(bits, p * c);
                }
            }
        }
        acc
    }
}

/// Expansions of `S_{v[i..]}` for every suffix of a non-alternating `v`.
#[derive(Clone, Debug)]
pub struct SumExpansions {
    v: IndexVector,
    /// `parts[i]` expands `S_{v[i..]}`; the empty suffix is `1`.
    parts: Vec<LogExpansion>,
    /// Integer point the constants were fitted at.
    pub fit_point: u32,
}

impl SumExpansions {
    /// Builds the expansions to `order` inverse powers with constants fitted
    /// at `fit_point`.
    pub fn new(v: &IndexVector, order: usize, fit_point: u32, bits: u32) -> Result<Self> {
        if v.entries().iter().any(|&a| a < 0) {
            return Err(Error::Unsupported(format!("S[{v}] is alternating")));
        }
        let order = order.max(2);
        let bern = bernoulli_upto(order + 1);
        let mut parts = vec![LogExpansion::one(order, bits)];
        let m = Complex::with_val(bits, fit_point);
        let d = v.depth();
        for i in (0..d).rev() {
            let h = v.entries()[i] as usize;
            let inner = parts.last().expect("inner expansion");
            let f = inner.shifted(h);
            let mut s = f.antiderivative();
            let f = f.with_logs(s.log_degree());
            s.add_scaled(&f, &Float::with_val(bits, 0.5));
            // Σ B_2j/(2j)! f^(2j-1)
            let mut deriv = f.derivative();
            let mut fact = Rational::from(2);
            let mut j = 1;
            while 2 * j <= order + 1 && 2 * j - 1 + h <= order {
                let w = Float::with_val(bits, Rational::from(&bern[2 * j] / &fact));
                s.add_scaled(&deriv, &w);
                deriv = deriv.derivative().derivative();
                fact *= (2 * j + 1) as u32 * (2 * j + 2) as u32;
                j += 1;
            }
            let suffix = IndexVector::new(v.entries()[i..].to_vec())?;
            let exact = eval_float_upto(&suffix, fit_point, bits).pop().expect("value at fit point");
            let approx = s.eval(&m);
            let c = exact - approx.real();
            s.coef[0][0] += c;
            parts.push(s);
        }
        parts.reverse();
        Ok(Self { v: v.clone(), parts, fit_point })
    }

    pub fn vector(&self) -> &IndexVector {
        &self.v
    }

    /// Expansion of `S_{v[i..]}`.
    pub fn part(&self, i: usize) -> &LogExpansion {
        &self.parts[i]
    }

    /// Values of every suffix sum at `z`, outermost first, then `1`.
    pub fn eval_all(&self, z: &Complex) -> Vec<Complex> {
        self.parts.iter().map(|p| p.eval(z)).collect()
    }
}

/// Number of inverse powers needed for the Euler–Maclaurin remainder to
/// drop below `10^-digits` at `|z| >= z`.
pub fn order_for(z: f64, digits: u32, depth: usize) -> usize {
    let tau_z = (2.0 * std::f64::consts::PI * z).ln();
    let logs = depth as f64 * z.ln().max(1.0).ln();
    let target = -f64::from(digits) * std::f64::consts::LN_10;
    let mut lfact = 0.0;
    for b in 2..2000usize {
        lfact += ((b - 1) as f64).ln();
        if lfact - b as f64 * tau_z + logs < target {
            return b.max(8);
        }
    }
    2000
}
