//! Second-order truncated Taylor arithmetic (2-jets with full Hessians).
//!
//! A `Taylor2` carries a value, a gradient with respect to `d` seed
//! directions, and the symmetric matrix of second-order coefficients.
//! Arithmetic truncates at total order 2; the chain rule for a smooth
//! primitive g is
//!
//! ```text
//! value  g(f)
//! grad   g'(f) ∇f
//! hess   g'(f) Hf + g''(f) ∇f ∇fᵀ
//! ```
//!
//! The value slot of every operation is computed with exactly the same f64
//! instruction as the plain-real evaluation, so evaluating an expression over
//! `Taylor2` and over `f64` yields bit-identical values.

use crate::error::{Error, Result};
use crate::numeric::symmat::SymMat;

#[derive(Debug, Clone, PartialEq)]
pub struct Taylor2 {
    value: f64,
    grad: Vec<f64>,
    hess: SymMat,
}

impl Taylor2 {
    pub fn constant(value: f64, dim: usize) -> Self {
        Taylor2 {
            value,
            grad: vec![0.0; dim],
            hess: SymMat::zeros(dim),
        }
    }

    /// Seeds the i-th coordinate: value `v`, ∂/∂xᵢ = 1.
    pub fn variable(value: f64, index: usize, dim: usize) -> Self {
        let mut grad = vec![0.0; dim];
        grad[index] = 1.0;
        Taylor2 {
            value,
            grad,
            hess: SymMat::zeros(dim),
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn hess(&self) -> &SymMat {
        &self.hess
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    fn zip(&self, rhs: &Self, value: f64, g: impl Fn(f64, f64) -> f64, h: SymMat) -> Taylor2 {
        Taylor2 {
            value,
            grad: self
                .grad
                .iter()
                .zip(&rhs.grad)
                .map(|(a, b)| g(*a, *b))
                .collect(),
            hess: h,
        }
    }

    pub fn add(&self, rhs: &Self) -> Taylor2 {
        self.zip(rhs, self.value + rhs.value, |a, b| a + b, self.hess.add(&rhs.hess))
    }

    pub fn sub(&self, rhs: &Self) -> Taylor2 {
        self.zip(rhs, self.value - rhs.value, |a, b| a - b, self.hess.sub(&rhs.hess))
    }

    pub fn neg(&self) -> Taylor2 {
        Taylor2 {
            value: -self.value,
            grad: self.grad.iter().map(|a| -a).collect(),
            hess: self.hess.scale(-1.0),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Taylor2 {
        // (fg)'' = f'' g + f' ⊗ g' + g' ⊗ f' + f g''
        let hess = self
            .hess
            .scale(rhs.value)
            .add(&rhs.hess.scale(self.value))
            .add(&SymMat::sym_outer(&self.grad, &rhs.grad));
        self.zip(
            rhs,
            self.value * rhs.value,
            |a, b| a * rhs.value + self.value * b,
            hess,
        )
    }

    pub fn div(&self, rhs: &Self) -> Result<Taylor2> {
        if rhs.value.abs() < 1e-300 {
            return Err(Error::DomainError(format!(
                "division by zero (denominator {})",
                rhs.value
            )));
        }
        let inv = 1.0 / rhs.value;
        let inv2 = inv * inv;
        let inv3 = inv2 * inv;
        // (f/g)_ij = f_ij/g − f g_ij/g² − (f_i g_j + f_j g_i)/g² + 2 f g_i g_j/g³
        let hess = self
            .hess
            .scale(inv)
            .add(&rhs.hess.scale(-self.value * inv2))
            .add(&SymMat::sym_outer(&self.grad, &rhs.grad).scale(-inv2))
            .add(&SymMat::outer(&rhs.grad).scale(2.0 * self.value * inv3));
        Ok(self.zip(
            rhs,
            self.value / rhs.value,
            |a, b| a * inv - self.value * inv2 * b,
            hess,
        ))
    }

    /// Chain rule for a primitive with value `v`, first derivative `d1`, and
    /// second derivative `d2` at `self.value`.
    fn chain(&self, v: f64, d1: f64, d2: f64) -> Taylor2 {
        Taylor2 {
            value: v,
            grad: self.grad.iter().map(|a| d1 * a).collect(),
            hess: self.hess.scale(d1).add(&SymMat::outer(&self.grad).scale(d2)),
        }
    }

    pub fn sin(&self) -> Taylor2 {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Taylor2 {
        let (s, c) = (self.value.sin(), self.value.cos());
        self.chain(c, -s, -c)
    }

    pub fn exp(&self) -> Taylor2 {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn sinh(&self) -> Taylor2 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(&self) -> Taylor2 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }

    pub fn ln(&self) -> Result<Taylor2> {
        if self.value <= 0.0 {
            return Err(Error::DomainError(format!("log of non-positive value {}", self.value)));
        }
        let inv = 1.0 / self.value;
        Ok(self.chain(self.value.ln(), inv, -inv * inv))
    }

    pub fn sqrt(&self) -> Result<Taylor2> {
        if self.value <= 0.0 {
            return Err(Error::DomainError(format!(
                "sqrt of non-positive value {} (derivatives blow up at 0)",
                self.value
            )));
        }
        let s = self.value.sqrt();
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * s * s)))
    }

    pub fn powi(&self, n: i32) -> Result<Taylor2> {
        if n == 0 {
            return Ok(Taylor2::constant(1.0, self.dim()));
        }
        if n < 0 && self.value.abs() < 1e-300 {
            return Err(Error::DomainError(format!(
                "negative power of zero (base {}, exponent {n})",
                self.value
            )));
        }
        let v = self.value.powi(n);
        let d1 = f64::from(n) * self.value.powi(n - 1);
        let c2 = f64::from(n) * f64::from(n - 1);
        let d2 = if c2 == 0.0 { 0.0 } else { c2 * self.value.powi(n - 2) };
        Ok(self.chain(v, d1, d2))
    }
}
