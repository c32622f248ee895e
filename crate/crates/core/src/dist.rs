//! Distributions on the positive integers `{1, 2, ...}`.
//!
//! Interarrival times and service times are always at least one slot. Three
//! shapes are supported: geometric (infinite support, evaluated lazily),
//! deterministic, and explicit finite-support weights.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, param};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistKind {
    /// `P{X = j} = (1 - rate)^(j-1) * rate`.
    Geometric { rate: f64 },
    /// Point mass at `period`.
    Deterministic { period: usize },
    /// Normalised finite-support weights.
    Explicit,
}

/// A probability distribution on `{1, 2, ...}`.
///
/// For finite kinds `probs[j - 1]` holds `P{X = j}` and `tails[n]` holds
/// `P{X > n}` for `n = 0..=K`, accumulated from the right so that values
/// beyond the support are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    kind: DistKind,
    probs: Vec<f64>,
    tails: Vec<f64>,
}

impl DiscreteDist {
    pub fn geometric(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(param(format!("geometric rate must lie in (0, 1], got {rate}")));
        }
        Ok(Self {
            kind: DistKind::Geometric { rate },
            probs: Vec::new(),
            tails: Vec::new(),
        })
    }

    pub fn deterministic(period: usize) -> Result<Self> {
        if period < 1 {
            return Err(param("deterministic period must be at least 1"));
        }
        let mut probs = alloc::vec![0.0; period];
        probs[period - 1] = 1.0;
        Ok(Self::finite(DistKind::Deterministic { period }, probs))
    }

    /// Builds a distribution from weights for the values `1..=weights.len()`.
    pub fn explicit(weights: &[f64]) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(param(format!("weights must be finite and nonnegative, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(param("at least one weight must be positive"));
        }
        let last = weights.iter().rposition(|w| *w > 0.0).unwrap_or(0);
        let probs = weights[..=last].iter().map(|w| w / total).collect();
        Ok(Self::finite(DistKind::Explicit, probs))
    }

    fn finite(kind: DistKind, probs: Vec<f64>) -> Self {
        let k = probs.len();
        let mut tails = alloc::vec![0.0; k + 1];
        for n in (0..k).rev() {
            tails[n] = tails[n + 1] + probs[n];
        }
        // Normalisation: P{X > 0} is one by definition.
        tails[0] = 1.0;
        Self { kind, probs, tails }
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    /// Rate of a geometric distribution, `None` for the other kinds.
    ///
    /// `deterministic(1)` is reported as geometric with rate one, since the
    /// two distributions coincide.
    pub fn geometric_rate(&self) -> Option<f64> {
        match self.kind {
            DistKind::Geometric { rate } => Some(rate),
            _ if self.support_max() == Some(1) => Some(1.0),
            _ => None,
        }
    }

    /// Largest value with positive probability, `None` if unbounded.
    pub fn support_max(&self) -> Option<usize> {
        match self.kind {
            DistKind::Geometric { rate } if rate >= 1.0 => Some(1),
            DistKind::Geometric { .. } => None,
            _ => Some(self.probs.len()),
        }
    }

    /// `P{X = j}`.
    pub fn pmf(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        match self.kind {
            DistKind::Geometric { rate } => powi(1.0 - rate, j - 1) * rate,
            _ => self.probs.get(j - 1).copied().unwrap_or(0.0),
        }
    }

    /// `P{X > n}`; `tail(0) == 1`.
    pub fn tail(&self, n: usize) -> f64 {
        match self.kind {
            DistKind::Geometric { rate } => powi(1.0 - rate, n),
            _ => self.tails.get(n).copied().unwrap_or(0.0),
        }
    }

    /// `P{X <= n}`.
    pub fn cdf(&self, n: usize) -> f64 {
        1.0 - self.tail(n)
    }

    /// Discrete hazard `P{X = n | X > n - 1}`.
    ///
    /// Querying a value whose conditioning event has probability zero is a
    /// domain error rather than an arbitrary 0 or 1.
    pub fn hazard(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(domain("hazard is defined for n >= 1"));
        }
        if let DistKind::Geometric { rate } = self.kind {
            if rate < 1.0 || n == 1 {
                return Ok(rate);
            }
        }
        let survive = self.tail(n - 1);
        if survive <= 0.0 {
            return Err(domain(format!("P{{X > {}}} = 0, hazard at {n} is undefined", n - 1)));
        }
        Ok((self.pmf(n) / survive).clamp(0.0, 1.0))
    }

    /// Probability generating function `sum_j z^j P{X = j}`.
    pub fn pgf(&self, z: f64) -> f64 {
        match self.kind {
            DistKind::Geometric { rate } => rate * z / (1.0 - (1.0 - rate) * z),
            _ => self.probs.iter().rev().fold(0.0, |acc, p| (acc + p) * z),
        }
    }

    /// Derivative of the generating function, `sum_j j z^(j-1) P{X = j}`.
    pub fn pgf_derivative(&self, z: f64) -> f64 {
        match self.kind {
            DistKind::Geometric { rate } => {
                let d = 1.0 - (1.0 - rate) * z;
                rate / (d * d)
            }
            _ => self
                .probs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (i, p)| acc * z + (i + 1) as f64 * p),
        }
    }

    /// `(E[X], E[X^2])`.
    pub fn moments(&self) -> (f64, f64) {
        match self.kind {
            DistKind::Geometric { rate } => (1.0 / rate, (2.0 - rate) / (rate * rate)),
            _ => self.probs.iter().enumerate().fold((0.0, 0.0), |(m1, m2), (i, p)| {
                let j = (i + 1) as f64;
                (m1 + j * p, m2 + j * j * p)
            }),
        }
    }

    pub fn mean(&self) -> f64 {
        self.moments().0
    }

    /// Explicit weights of a finite-support distribution (index `j - 1`).
    pub fn probs(&self) -> Option<&[f64]> {
        match self.kind {
            DistKind::Geometric { .. } => None,
            _ => Some(&self.probs),
        }
    }
}

/// `base^exp` with `0^0 == 1`.
pub(crate) fn powi(base: f64, exp: usize) -> f64 {
    libm::pow(base, exp as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn geometric_examples() {
        let g = DiscreteDist::geometric(1.0).unwrap();
        assert_eq!(g.pmf(1), 1.0);
        assert_eq!(g.pmf(2), 0.0);
        assert!(close(DiscreteDist::geometric(0.5).unwrap().pmf(3), 0.125));

        let q = DiscreteDist::geometric(0.25).unwrap();
        assert!(close(q.tail(2), 0.75 * 0.75));
        assert!(close(q.tail(2), 1.0 - q.pmf(1) - q.pmf(2)));

        let h = DiscreteDist::geometric(0.5).unwrap();
        assert_eq!(h.tail(0), 1.0);
        assert!(close(h.tail(2), 0.25));
    }

    #[test]
    fn rate_out_of_range() {
        for r in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(DiscreteDist::geometric(r), Err(crate::Error::Parameter(_))));
        }
    }

    #[test]
    fn deterministic_examples() {
        assert_eq!(DiscreteDist::deterministic(1).unwrap().mean(), 1.0);
        let d3 = DiscreteDist::deterministic(3).unwrap();
        assert_eq!(d3.tail(2), 1.0);
        assert_eq!(d3.tail(3), 0.0);
        assert_eq!(DiscreteDist::deterministic(2).unwrap().moments().1, 4.0);
        assert!(DiscreteDist::deterministic(0).is_err());
    }

    #[test]
    fn explicit_examples() {
        let e = DiscreteDist::explicit(&[1.0, 1.0]).unwrap();
        assert_eq!(e.pmf(1), 0.5);
        assert_eq!(e.pmf(2), 0.5);
        let f = DiscreteDist::explicit(&[2.0, 0.0, 2.0]).unwrap();
        assert_eq!(f.pmf(2), 0.0);
        assert_eq!(f.pmf(3), 0.5);
        let h = DiscreteDist::explicit(&[0.5, 0.5]).unwrap();
        assert!(close(h.hazard(2).unwrap(), 1.0));
        assert!(close(h.tail(1), 0.5));

        assert!(DiscreteDist::explicit(&[0.0, 0.0]).is_err());
        assert!(DiscreteDist::explicit(&[]).is_err());
        assert!(DiscreteDist::explicit(&[0.5, -0.1]).is_err());
    }

    #[test]
    fn trailing_zero_weights_are_trimmed() {
        let d = DiscreteDist::explicit(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(d.support_max(), Some(1));
        assert_eq!(d.geometric_rate(), Some(1.0));
    }

    #[test]
    fn hazard_examples() {
        let g = DiscreteDist::geometric(0.3).unwrap();
        for n in 1..50 {
            assert_eq!(g.hazard(n).unwrap(), 0.3);
        }
        let d = DiscreteDist::deterministic(3).unwrap();
        assert_eq!(d.hazard(3).unwrap(), 1.0);
        assert_eq!(d.hazard(2).unwrap(), 0.0);
        assert!(matches!(d.hazard(4), Err(crate::Error::Domain(_))));
        assert!(d.hazard(0).is_err());

        let e = DiscreteDist::explicit(&[0.2, 0.3, 0.5]).unwrap();
        assert!(close(e.hazard(2).unwrap(), 0.3 / 0.8));
        assert!(close(e.hazard(2).unwrap(), 0.375));
    }

    #[test]
    fn pgf_examples() {
        let g = DiscreteDist::geometric(0.5).unwrap();
        assert!(close(g.pgf(0.5), 1.0 / 3.0));
        let partial: f64 = (1..200).map(|j| libm::pow(0.5, j as f64) * g.pmf(j)).sum();
        assert!(close(partial, 1.0 / 3.0));
        assert!(close(DiscreteDist::deterministic(2).unwrap().pgf(0.3), 0.09));
        for d in [
            g,
            DiscreteDist::deterministic(4).unwrap(),
            DiscreteDist::explicit(&[0.1, 0.0, 0.7, 0.2]).unwrap(),
        ] {
            assert!(close(d.pgf(1.0), 1.0));
        }
    }

    #[test]
    fn pgf_derivative_matches_finite_difference() {
        let e = DiscreteDist::explicit(&[0.1, 0.4, 0.2, 0.3]).unwrap();
        let g = DiscreteDist::geometric(0.35).unwrap();
        for d in [e, g] {
            for z in [0.2, 0.5, 0.8] {
                let h = 1e-6;
                let fd = (d.pgf(z + h) - d.pgf(z - h)) / (2.0 * h);
                assert!((fd - d.pgf_derivative(z)).abs() < 1e-7);
            }
            assert!((d.pgf_derivative(1.0) - d.mean()).abs() < 1e-12);
        }
    }

    #[test]
    fn moment_examples() {
        let (m1, m2) = DiscreteDist::geometric(0.5).unwrap().moments();
        assert!(close(m1, 2.0) && close(m2, 6.0));
        let g = DiscreteDist::geometric(0.5).unwrap();
        let s1: f64 = (1..400).map(|j| j as f64 * g.pmf(j)).sum();
        let s2: f64 = (1..400).map(|j| (j * j) as f64 * g.pmf(j)).sum();
        assert!(close(s1, 2.0) && close(s2, 6.0));
        assert_eq!(DiscreteDist::deterministic(4).unwrap().moments(), (4.0, 16.0));
        assert_eq!(DiscreteDist::explicit(&[0.5, 0.5]).unwrap().moments(), (1.5, 2.5));
    }
}
