//! Truncated log-power expansions and the two-sided function representation
//! every kernel on `[0, 1]` is built from.
//!
//! A [`LogSeries`] is `Σ_j Σ_k c[j][k] u^k ln^j(u)`. A [`UnitFunction`] keeps
//! one such expansion around `x = 0` (in `u = x`) and one around `x = 1`
//! (in `u = t = 1 - x`). Both converge at least like `2^-k` on their half of
//! the interval, so evaluation switches at `x = 1/2`, which is also where the
//! integration constant of the `x = 1` side is fixed.

use rug::Float;

/// `Σ_j Σ_k c[j][k] u^k ln^j(u)`, `k < order`.
#[derive(Clone, Debug)]
pub struct LogSeries {
    bits: u32,
    order: usize,
    terms: Vec<Vec<Float>>,
}

/// Denominators the integration letters bring along, expanded in `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometric {
    /// `1 / (1 - u)`
    OneMinus,
    /// `1 / (1 + u)`
    OnePlus,
    /// `1 / (2 - u)`
    TwoMinus,
}

impl LogSeries {
    pub fn zero(bits: u32, order: usize) -> Self {
        Self { bits, order, terms: vec![vec![Float::new(bits); order]] }
    }

    pub fn constant(bits: u32, order: usize, c: &Float) -> Self {
        let mut s = Self::zero(bits, order);
        s.terms[0][0] = Float::with_val(bits, c);
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Highest power of the logarithm present.
    pub fn log_degree(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn coeff(&self, j: usize, k: usize) -> Option<&Float> {
        self.terms.get(j).and_then(|row| row.get(k))
    }

    fn ensure_log_degree(&mut self, j: usize) {
        while self.terms.len() <= j {
            self.terms.push(vec![Float::new(self.bits); self.order]);
        }
    }

    fn trim(&mut self) {
        while self.terms.len() > 1 && self.terms.last().is_some_and(|r| r.iter().all(Float::is_zero)) {
            self.terms.pop();
        }
    }

    pub fn add_assign_scaled(&mut self, other: &LogSeries, scale: &Float) {
        self.ensure_log_degree(other.log_degree());
        for (row, orow) in self.terms.iter_mut().zip(&other.terms) {
            for (c, o) in row.iter_mut().zip(orow) {
                if !o.is_zero() {
                    *c += o * scale;
                }
            }
        }
        self.trim();
    }

    pub fn scaled(&self, scale: &Float) -> Self {
        let mut out = self.clone();
        for row in &mut out.terms {
            for c in row.iter_mut() {
                *c *= scale;
            }
        }
        out.trim();
        out
    }

    pub fn mul(&self, other: &LogSeries) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.bits, order);
        out.ensure_log_degree(self.log_degree() + other.log_degree());
        for (ja, ra) in self.terms.iter().enumerate() {
            let last_a = ra.iter().rposition(|c| !c.is_zero());
            let Some(last_a) = last_a else { continue };
            for (jb, rb) in other.terms.iter().enumerate() {
                let Some(last_b) = rb.iter().rposition(|c| !c.is_zero()) else { continue };
                let row = &mut out.terms[ja + jb];
                for (i, a) in ra.iter().enumerate().take(last_a + 1) {
                    if a.is_zero() {
                        continue;
                    }
                    let top = (order - 1 - i).min(last_b);
                    for (k, b) in rb.iter().enumerate().take(top + 1) {
                        if !b.is_zero() {
                            row[i + k] += a * b;
                        }
                    }
                }
            }
        }
        out.trim();
        out
    }

    /// Multiplies by one of the [`Geometric`] denominators.
    pub fn mul_geometric(&self, g: Geometric) -> Self {
        let mut out = self.clone();
        for row in &mut out.terms {
            let mut prev = Float::new(self.bits);
            for c in row.iter_mut() {
                match g {
                    Geometric::OneMinus => prev += &*c,
                    Geometric::OnePlus => {
                        prev = -prev;
                        prev += &*c;
                    }
                    Geometric::TwoMinus => {
                        prev += &*c;
                        prev /= 2u32;
                    }
                }
                *c = prev.clone();
            }
        }
        out
    }

    /// `∫_0^u s^k ln^j(s) ds` term by term.
    pub fn integrate_regular(&self) -> Self {
        self.integrate_shifted(1)
    }

    /// `∫ s^{k-1} ln^j(s) ds` term by term; the `k = 0` terms give
    /// `ln^{j+1}(u)/(j+1)` (the shuffle-regularized primitive).
    pub fn integrate_over_u(&self) -> Self {
        let mut out = self.integrate_shifted(0);
        out.ensure_log_degree(self.log_degree() + 1);
        for j in 0..self.terms.len() {
            let c = &self.terms[j][0];
            if !c.is_zero() {
                let v = Float::with_val(self.bits, c / (j as u32 + 1));
                out.terms[j + 1][0] += v;
            }
        }
        out.trim();
        out
    }

    /// Integrates `c s^{k+shift-1} ln^j s` to
    /// `u^{k+shift} Σ_r (-1)^r j!/(j-r)! ln^{j-r}(u) / (k+shift)^{r+1}`,
    /// skipping `k + shift = 0`.
    fn integrate_shifted(&self, shift: usize) -> Self {
        let mut out = Self::zero(self.bits, self.order);
        out.ensure_log_degree(self.log_degree());
        for (j, row) in self.terms.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                let p = k + shift;
                if c.is_zero() || p == 0 || p >= self.order {
                    continue;
                }
                // running factor (-1)^r j!/(j-r)! / p^{r+1}
                let mut f = Float::with_val(self.bits, c / p as u32);
                for r in 0..=j {
                    out.terms[j - r][p] += &f;
                    f *= (j - r) as u32;
                    f /= p as u32;
                    f = -f;
                }
            }
        }
        out.trim();
        out
    }

    /// Value at `u` with `ln u` supplied (callers keep both accurate).
    pub fn eval(&self, u: &Float, ln_u: &Float) -> Float {
        let mut total = Float::new(self.bits);
        let mut lpow = Float::with_val(self.bits, 1);
        for (j, row) in self.terms.iter().enumerate() {
            if j > 0 {
                lpow *= ln_u;
            }
            let Some(last) = row.iter().rposition(|c| !c.is_zero()) else { continue };
            let mut acc = Float::new(self.bits);
            for c in row[..=last].iter().rev() {
                acc *= u;
                acc += c;
            }
            total += acc * &lpow;
        }
        total
    }

    /// Value at `u = 0`, or `None` when a bare `ln^j(u)` term diverges.
    pub fn value_at_origin(&self) -> Option<Float> {
        if self.terms.iter().skip(1).any(|row| !row[0].is_zero()) {
            return None;
        }
        Some(self.terms[0][0].clone())
    }
}

/// A point of `[0, 1]` with both distances to the endpoints and their logs.
#[derive(Clone, Debug)]
pub struct UnitPoint {
    pub x: Float,
    pub t: Float,
    pub ln_x: Float,
    pub ln_t: Float,
}

impl UnitPoint {
    /// `x` and `t = 1 - x` must both be supplied accurately.
    pub fn new(x: Float, t: Float) -> Self {
        let ln_x = if x > 0.5 {
            Float::with_val(x.prec(), (-t.clone()).ln_1p())
        } else {
            Float::with_val(x.prec(), x.ln_ref())
        };
        let ln_t = if t > 0.5 {
            Float::with_val(t.prec(), (-x.clone()).ln_1p())
        } else {
            Float::with_val(t.prec(), t.ln_ref())
        };
        Self { x, t, ln_x, ln_t }
    }

    pub fn from_x(bits: u32, x: &Float) -> Self {
        let x = Float::with_val(bits, x);
        let t = Float::with_val(bits, 1 - &x);
        Self::new(x, t)
    }

    pub fn half(bits: u32) -> Self {
        let h = Float::with_val(bits, 0.5);
        Self::new(h.clone(), h)
    }

    pub fn reflected(&self) -> Self {
        Self { x: self.t.clone(), t: self.x.clone(), ln_x: self.ln_t.clone(), ln_t: self.ln_x.clone() }
    }

    fn near_zero(&self) -> bool {
        self.x <= 0.5
    }
}

/// Integration letters of the `{0, 1, -1}` alphabet: `1/x`, `1/(1-x)`, `1/(1+x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Zero,
    One,
    MinusOne,
}

/// A function on `[0, 1]` as a pair of log-power expansions.
#[derive(Clone, Debug)]
pub struct UnitFunction {
    at_zero: LogSeries,
    at_one: LogSeries,
}

impl UnitFunction {
    pub fn constant(bits: u32, order: usize, c: &Float) -> Self {
        Self { at_zero: LogSeries::constant(bits, order, c), at_one: LogSeries::constant(bits, order, c) }
    }

    pub fn one(bits: u32, order: usize) -> Self {
        Self::constant(bits, order, &Float::with_val(bits, 1))
    }

    pub fn expansion_at_zero(&self) -> &LogSeries {
        &self.at_zero
    }

    pub fn expansion_at_one(&self) -> &LogSeries {
        &self.at_one
    }

    pub fn eval(&self, pt: &UnitPoint) -> Float {
        if pt.near_zero() {
            self.at_zero.eval(&pt.x, &pt.ln_x)
        } else {
            self.at_one.eval(&pt.t, &pt.ln_t)
        }
    }

    /// `f(0)`, `None` if it diverges logarithmically.
    pub fn value_at_zero(&self) -> Option<Float> {
        self.at_zero.value_at_origin()
    }

    /// `f(1)`, `None` if it diverges logarithmically.
    pub fn value_at_one(&self) -> Option<Float> {
        self.at_one.value_at_origin()
    }

    /// Drops the constant term at `x = 0`, for integrands known to vanish
    /// there whose constant only survives as rounding noise.
    pub(crate) fn pin_zero_at_origin(&mut self) {
        self.at_zero.terms[0][0] = Float::new(self.at_zero.bits);
    }

    /// `x -> 1 - x`.
    pub fn reflect(&self) -> Self {
        Self { at_zero: self.at_one.clone(), at_one: self.at_zero.clone() }
    }

    pub fn add_scaled(&self, other: &UnitFunction, scale: &Float) -> Self {
        let mut out = self.clone();
        out.at_zero.add_assign_scaled(&other.at_zero, scale);
        out.at_one.add_assign_scaled(&other.at_one, scale);
        out
    }

    pub fn scaled(&self, scale: &Float) -> Self {
        Self { at_zero: self.at_zero.scaled(scale), at_one: self.at_one.scaled(scale) }
    }

    pub fn mul(&self, other: &UnitFunction) -> Self {
        Self { at_zero: self.at_zero.mul(&other.at_zero), at_one: self.at_one.mul(&other.at_one) }
    }

    /// `∫_0^x f_a(y) g(y) dy` with `f_0 = 1/y`, `f_1 = 1/(1-y)`, `f_{-1} = 1/(1+y)`.
    ///
    /// Around `x = 1` the primitive is built in `t` and shifted by the
    /// constant that makes both sides agree at `x = 1/2`.
    pub fn integrate(&self, letter: Letter) -> Self {
        let bits = self.at_zero.bits;
        let at_zero = match letter {
            Letter::Zero => self.at_zero.integrate_over_u(),
            Letter::One => self.at_zero.mul_geometric(Geometric::OneMinus).integrate_regular(),
            Letter::MinusOne => self.at_zero.mul_geometric(Geometric::OnePlus).integrate_regular(),
        };
        // d/dt of the primitive is -f_a(1 - t) g(1 - t)
        let partial = match letter {
            Letter::Zero => self.at_one.mul_geometric(Geometric::OneMinus).integrate_regular(),
            Letter::One => self.at_one.integrate_over_u(),
            Letter::MinusOne => self.at_one.mul_geometric(Geometric::TwoMinus).integrate_regular(),
        };
        let minus_one = Float::with_val(bits, -1);
        let mut at_one = partial.scaled(&minus_one);
        let half = UnitPoint::half(bits);
        let left = at_zero.eval(&half.x, &half.ln_x);
        let right = at_one.eval(&half.t, &half.ln_t);
        at_one.terms[0][0] += left - right;
        Self { at_zero, at_one }
    }
}

/// Expansion order for a working precision of `bits`.
pub fn order_for_bits(bits: u32) -> usize {
    bits as usize + 48
}
