//! Double-exponential (tanh-sinh) quadrature on `[0, 1]`.
//!
//! Nodes are `x(s) = 1 / (1 + exp(-π sinh s))`; both `x` and `1 - x` are
//! formed directly so logarithmic endpoint singularities are resolved to
//! full relative precision. Level `ℓ` adds the odd multiples of `2^-ℓ`,
//! so every refinement reuses all earlier integrand values.

use rug::Float;

use super::series::UnitPoint;
use crate::error::{Error, Result};
use crate::num::{log10_abs, pi};

pub const MAX_LEVEL: usize = 9;
const MIN_LEVEL: usize = 3;

#[derive(Clone, Debug)]
pub struct Node {
    pub pt: UnitPoint,
    /// `dx/ds = π cosh(s) x (1 - x)`
    pub weight: Float,
}

#[derive(Debug)]
pub struct TanhSinh {
    bits: u32,
    levels: Vec<Vec<Node>>,
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Float,
    pub error: Float,
    pub level: usize,
    pub evaluations: usize,
}

impl TanhSinh {
    pub fn new(bits: u32) -> Self {
        let pi = pi(bits);
        // stop once min(x, 1-x) drops below 2^-(bits+64)
        let cut = f64::from(bits + 64) * std::f64::consts::LN_2 / std::f64::consts::PI;
        let s_max = cut.asinh();
        let mut levels = Vec::with_capacity(MAX_LEVEL + 1);
        for level in 0..=MAX_LEVEL {
            let denom = 1u64 << level;
            let i_max = (s_max * denom as f64).ceil() as i64;
            let mut nodes = Vec::new();
            for i in -i_max..=i_max {
                if level > 0 && i.rem_euclid(2) == 0 {
                    continue;
                }
                let s = Float::with_val(bits, i) / denom;
                nodes.push(Self::node(bits, &pi, &s));
            }
            levels.push(nodes);
        }
        Self { bits, levels }
    }

    fn node(bits: u32, pi: &Float, s: &Float) -> Node {
        let sh = Float::with_val(bits, s.sinh_ref());
        let ch = Float::with_val(bits, s.cosh_ref());
        let e = Float::with_val(bits, &sh * pi).exp();
        let one_plus = Float::with_val(bits, &e + 1u32);
        // x = e/(1+e), 1 - x = 1/(1+e)
        let t = Float::with_val(bits, one_plus.recip_ref());
        let x = Float::with_val(bits, &e * &t);
        let weight = Float::with_val(bits, pi * &ch) * &x * &t;
        Node { pt: UnitPoint::new(x, t), weight }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn level(&self, level: usize) -> &[Node] {
        &self.levels[level]
    }

    pub fn node_count(&self, level: usize) -> usize {
        self.levels[..=level].iter().map(Vec::len).sum()
    }

    /// Integrates level by level. `level_sum(ℓ)` must return
    /// `Σ weight · g` over the nodes new at level `ℓ`.
    pub fn integrate_levels<F>(&self, target: &Float, mut level_sum: F) -> Result<QuadResult>
    where
        F: FnMut(usize) -> Float,
    {
        let bits = self.bits;
        let mut raw = Float::new(bits);
        let mut prev: Option<Float> = None;
        let mut last_err = Float::with_val(bits, f64::INFINITY);
        for level in 0..=MAX_LEVEL {
            raw += level_sum(level);
            let h = Float::with_val(bits, 1u32) >> level as i32;
            let estimate = Float::with_val(bits, &raw * &h);
            if let Some(p) = &prev {
                let err = Float::with_val(bits, &estimate - p).abs();
                if level >= MIN_LEVEL && err <= *target {
                    return Ok(QuadResult {
                        value: estimate,
                        error: err,
                        level,
                        evaluations: self.node_count(level),
                    });
                }
                last_err = err;
            }
            prev = Some(estimate);
        }
        Err(Error::Quadrature { log10_err: log10_abs(&last_err), level: MAX_LEVEL })
    }

    /// `∫_0^1 g(x) dx` for a pointwise integrand.
    pub fn integrate<G>(&self, target: &Float, g: G) -> Result<QuadResult>
    where
        G: Fn(&UnitPoint) -> Float,
    {
        self.integrate_levels(target, |level| {
            let mut acc = Float::new(self.bits);
            for node in &self.levels[level] {
                let v = g(&node.pt);
                if !v.is_zero() {
                    acc += v * &node.weight;
                }
            }
            acc
        })
    }

    /// `∫_0^a g(y) dy` for `0 < a < 1`, with `y` and `1 - y` both exact
    /// to working precision.
    pub fn integrate_to<G>(&self, a: &Float, target: &Float, g: G) -> Result<QuadResult>
    where
        G: Fn(&UnitPoint) -> Float,
    {
        let bits = self.bits;
        let res = self.integrate(target, |pt| {
            let y = Float::with_val(bits, a * &pt.x);
            let ty = Float::with_val(bits, 1 - &y);
            g(&UnitPoint::new(y, ty))
        })?;
        Ok(QuadResult { value: res.value * a, error: res.error * a, ..res })
    }
}
