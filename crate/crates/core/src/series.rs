//! Formal power series in `z`, truncated at a fixed order.
//!
//! Every series carries its order `T` and holds the coefficients of
//! `z^0..=z^T`. Binary operations require equal orders; nothing is resized
//! implicitly.

use alloc::vec;
use alloc::vec::Vec;

use crate::dist::{powi, DiscreteDist};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![0.0; order + 1] }
    }

    /// The multiplicative identity.
    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, 1.0)
    }

    /// `c * z^k`, or zero if `k > order`.
    pub fn monomial(order: usize, k: usize, c: f64) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series with the given leading coefficients, zero-padded or cut to `order`.
    pub fn from_coeffs(order: usize, coeffs: &[f64]) -> Self {
        let mut s = Self::zero(order);
        for (dst, src) in s.coeffs.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        s
    }

    /// Series whose coefficient of `z^n` is `f(n)`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> f64) -> Self {
        Self { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero beyond the order.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_fn(self.order(), |n| self.coeffs[n] + other.coeffs[n]))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_fn(self.order(), |n| self.coeffs[n] - other.coeffs[n]))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `z^k`, dropping what falls past the order.
    pub fn shift(&self, k: usize) -> Self {
        Self::from_fn(self.order(), |n| if n >= k { self.coeffs[n - k] } else { 0.0 })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let order = self.order();
        let mut out = vec![0.0; order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (o, b) in out[i..].iter_mut().zip(&other.coeffs) {
                *o += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplicative inverse by forward substitution.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.abs() <= 1e-12 {
            return Err(Error::SingularSeries);
        }
        let order = self.order();
        let mut b = vec![0.0; order + 1];
        b[0] = 1.0 / a0;
        for n in 1..=order {
            let acc: f64 = (1..=n).map(|k| self.coeffs[k] * b[n - k]).sum();
            b[n] = -acc / a0;
        }
        Ok(Self { coeffs: b })
    }

    /// `(sum of coefficients, sum of n * coefficient)`.
    pub fn mean_and_mass(&self) -> (f64, f64) {
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(mass, mean), (n, c)| {
            (mass + c, mean + n as f64 * c)
        })
    }

    /// Evaluates the truncated polynomial at `z`.
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }
}

/// `sum_{n >= 1} scale^n P{X > n - shift} z^n`.
///
/// With `shift == 1` this is `z (1 - X(z)) / (1 - z)`; with `shift == 0` it is
/// `(z - X(z)) / (1 - z)`. Removable denominators such as `1 - z` or
/// `1 - (1 - gamma) z` are expanded this way instead of by dividing through a
/// series whose constant term vanishes.
pub fn tail_series(d: &DiscreteDist, shift: usize, scale: f64, order: usize) -> Result<TruncatedSeries> {
    if shift > 1 {
        return Err(Error::Parameter(alloc::format!("tail shift must be 0 or 1, got {shift}")));
    }
    Ok(TruncatedSeries::from_fn(order, |n| {
        if n == 0 {
            0.0
        } else {
            powi(scale, n) * d.tail(n - shift)
        }
    }))
}

/// `X(scale * z) = sum_{n >= 1} scale^n P{X = n} z^n`.
pub fn pmf_series(d: &DiscreteDist, scale: f64, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| powi(scale, n) * d.pmf(n))
}

/// `1 / (1 - c z) = sum c^n z^n`.
pub fn geometric_series(c: f64, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| powi(c, n))
}
