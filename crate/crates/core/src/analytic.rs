//! Closed-form generating functions and mean AoI.
//!
//! Each generating function is expanded coefficient by coefficient with
//! [`TruncatedSeries`]; coefficient `n` is `Pr{AoI = n}`. Removable
//! singularities at `z = 1` and `z = 1 / (1 - gamma)` are resummed into
//! [`tail_series`] so that every inverted series has constant term one.
//!
//! Notation used below: `Y` is the interarrival time, `S` the service time,
//! `p` the rate of a geometric `Y`, `gamma` the rate of a geometric `S`.

use alloc::format;
use alloc::vec::Vec;

use crate::dist::DiscreteDist;
use crate::error::{domain, param};
use crate::series::{geometric_series, pmf_series, tail_series, TruncatedSeries};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Discipline {
    /// A new packet displaces the one in service.
    Preemptive,
    /// Packets arriving to a busy server are discarded.
    NonPreemptive,
}

impl Discipline {
    pub fn as_str(self) -> &'static str {
        match self {
            Discipline::Preemptive => "preemptive",
            Discipline::NonPreemptive => "nonpreemptive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub discipline: Discipline,
    pub interarrival: DiscreteDist,
    pub service: DiscreteDist,
}

impl SystemSpec {
    pub fn new(discipline: Discipline, interarrival: DiscreteDist, service: DiscreteDist) -> Self {
        Self { discipline, interarrival, service }
    }

    /// Rejects systems the closed forms do not cover: non-preemptive service
    /// must be geometric.
    pub fn check_analytic(&self) -> Result<()> {
        if self.discipline == Discipline::NonPreemptive && self.service.geometric_rate().is_none() {
            return Err(Error::Unsupported(
                "non-preemptive analytics require geometric service".into(),
            ));
        }
        Ok(())
    }
}

/// Truncated stationary AoI distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct AoIDistribution {
    /// `pmf[n] = Pr{AoI = n}`; `pmf[0]` is always zero.
    pub pmf: Vec<f64>,
    pub captured_mass: f64,
    /// Midpoint of the certified bracket, or the truncated mean (a lower
    /// bound) when certification failed.
    pub mean: f64,
    /// Bound on the probability mass beyond the last index.
    pub tail_bound: f64,
    /// Certified `(lower, upper)` bracket on the mean.
    pub mean_bounds: Option<(f64, f64)>,
}

impl AoIDistribution {
    pub fn prob(&self, n: usize) -> f64 {
        self.pmf.get(n).copied().unwrap_or(0.0)
    }

    pub fn truncated_mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn is_certified(&self) -> bool {
        self.mean_bounds.is_some()
    }

    /// Builds a distribution from generating-function coefficients.
    ///
    /// `decay_hint` is a known geometric factor of the tail (e.g. `1 - gamma`);
    /// the certified decay is the larger of the hint and the empirical ratio of
    /// the last coefficients.
    pub fn from_series(series: &TruncatedSeries, decay_hint: f64) -> Result<Self> {
        let mut pmf: Vec<f64> = series.coeffs().iter().map(|c| c.max(0.0)).collect();
        pmf[0] = 0.0;
        let captured_mass: f64 = pmf.iter().sum();
        if !(captured_mass > 1e-12) {
            return Err(domain("no probability mass: the system never delivers a packet"));
        }
        let mut out = Self {
            pmf,
            captured_mass,
            mean: 0.0,
            tail_bound: 0.0,
            mean_bounds: None,
        };
        let lower = out.truncated_mean();
        let certified = empirical_decay(&out.pmf)
            .map(|d| d.max(decay_hint))
            .filter(|d| *d < 1.0)
            .and_then(|d| certified_mean(&out, d).ok().map(|b| (d, b)));
        match certified {
            Some((d, (lo, hi))) => {
                let last = *out.pmf.last().unwrap_or(&0.0);
                out.tail_bound = if d > 0.0 { last * d / (1.0 - d) } else { 0.0 };
                out.mean = 0.5 * (lo + hi);
                out.mean_bounds = Some((lo, hi));
            }
            None => {
                out.tail_bound = (1.0 - captured_mass).max(0.0);
                out.mean = lower;
            }
        }
        Ok(out)
    }
}

const RATIO_WINDOW: usize = 10;

/// Coefficients below this are treated as zero by the tail checks; ratios of
/// numbers near the subnormal range carry no information.
const NEGLIGIBLE: f64 = 1e-250;

/// Largest ratio `pmf[n + 1] / pmf[n]` over the last [`RATIO_WINDOW`] pairs.
///
/// `Some(0.0)` when the window is identically zero; `None` when a zero is
/// followed by a positive entry (periodic coefficients).
fn empirical_decay(pmf: &[f64]) -> Option<f64> {
    let last = pmf.len() - 1;
    let start = last.saturating_sub(RATIO_WINDOW).max(1);
    let mut worst: f64 = 0.0;
    for n in start..last {
        let (a, b) = (pmf[n], pmf[n + 1]);
        if b <= NEGLIGIBLE {
            continue;
        }
        if a <= NEGLIGIBLE {
            return None;
        }
        worst = worst.max(b / a);
    }
    Some(worst)
}

/// Brackets the mean of a distribution whose tail beyond the last index is
/// dominated by `pmf[T] * decay^k`.
///
/// The lower end is the truncated mean. The upper end adds the residual mass
/// bound `pmf[T] d / (1 - d)` times the tail mean bound `T + 1 / (1 - d)`.
pub fn certified_mean(a: &AoIDistribution, decay: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&decay) {
        return Err(param(format!("decay must lie in [0, 1), got {decay}")));
    }
    let pmf = &a.pmf;
    let lower = a.truncated_mean();
    let last = pmf.len() - 1;
    let start = last.saturating_sub(RATIO_WINDOW).max(1);
    if pmf[start..].iter().all(|p| *p <= NEGLIGIBLE) {
        return Ok((lower, lower));
    }
    for n in start..last {
        let (x, y) = (pmf[n], pmf[n + 1]);
        if y <= NEGLIGIBLE {
            continue;
        }
        if x <= NEGLIGIBLE {
            return Err(Error::Certification(format!("zero coefficient at {n} followed by a positive one")));
        }
        if y / x > decay + 1e-6 {
            return Err(Error::Certification(format!(
                "coefficient ratio {} at {n} exceeds decay {decay}",
                y / x
            )));
        }
    }
    let t = last as f64;
    let q = 1.0 - decay;
    let residual_mass = pmf[last] * decay / q;
    Ok((lower, lower + residual_mass * (t + 1.0 / q)))
}

fn check_order(order: usize) -> Result<()> {
    if order < 2 {
        return Err(param(format!("series order must be at least 2, got {order}")));
    }
    Ok(())
}

fn check_rate(name: &str, r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(param(format!("{name} must lie in (0, 1], got {r}")));
    }
    Ok(())
}

fn service_decay(s: &DiscreteDist) -> f64 {
    s.geometric_rate().map_or(0.0, |g| 1.0 - g)
}

/// The two parts of the preemptive generating function: idle states
/// (`h1`, AoI mass with an empty server) and busy states (`h2`).
#[derive(Debug, Clone, PartialEq)]
pub struct PreemptiveComponents {
    pub h1: TruncatedSeries,
    pub h2: TruncatedSeries,
}

impl PreemptiveComponents {
    pub fn total(&self) -> Result<TruncatedSeries> {
        self.h1.add(&self.h2)
    }
}

/// Component functions of the preemptive G/G/1/1 generating function.
///
/// With `E = E[Y]`:
///
/// ```text
/// h1(z) = (1/E) sum z^n P{Y > n-1} P{S <= n}
/// h2(z) = (sum z^n P{Y > n-1} P{S > n}) (sum z^n P{Y = n} P{S <= n})
///         / (E (1 - sum z^n P{Y = n} P{S > n}))
/// ```
pub fn components_preemptive(y: &DiscreteDist, s: &DiscreteDist, order: usize) -> Result<PreemptiveComponents> {
    check_order(order)?;
    let inv_mean = 1.0 / y.mean();
    let build = |f: &dyn Fn(usize) -> f64| TruncatedSeries::from_fn(order, |n| if n == 0 { 0.0 } else { f(n) });
    let alive_done = build(&|n| y.tail(n - 1) * s.cdf(n));
    let alive_busy = build(&|n| y.tail(n - 1) * s.tail(n));
    let arrive_done = build(&|n| y.pmf(n) * s.cdf(n));
    let arrive_busy = build(&|n| y.pmf(n) * s.tail(n));

    let h1 = alive_done.scale(inv_mean);
    let renewal = TruncatedSeries::one(order).sub(&arrive_busy)?.reciprocal()?;
    let h2 = alive_busy.mul(&arrive_done)?.mul(&renewal)?.scale(inv_mean);
    Ok(PreemptiveComponents { h1, h2 })
}

/// Preemptive G/G/1/1 with arbitrary `Y` and `S`.
pub fn pgf_preemptive_gg(y: &DiscreteDist, s: &DiscreteDist, order: usize) -> Result<AoIDistribution> {
    let h = components_preemptive(y, s, order)?.total()?;
    AoIDistribution::from_series(&h, service_decay(s))
}

/// Preemptive Ber/G/1/1: geometric `Y` with rate `p`, arbitrary `S`.
///
/// `H(z) = p S(qz) / (q (1 - z) + p S(qz))` with `q = 1 - p`. At `p = 1` the
/// expression is `0 / 0`; the general G/G route is used instead.
pub fn pgf_preemptive_berg(p: f64, s: &DiscreteDist, order: usize) -> Result<AoIDistribution> {
    check_rate("arrival rate p", p)?;
    check_order(order)?;
    let q = 1.0 - p;
    if q <= 0.0 {
        return pgf_preemptive_gg(&DiscreteDist::geometric(1.0)?, s, order);
    }
    let num = pmf_series(s, q, order).scale(p);
    let den = TruncatedSeries::from_coeffs(order, &[q, -q]).add(&num)?;
    let h = num.mul(&den.reciprocal()?)?;
    AoIDistribution::from_series(&h, q.max(service_decay(s)))
}

/// Mean AoI of the preemptive Ber/G/1/1 system, `q / (p S(q))`.
pub fn mean_preemptive_berg(p: f64, s: &DiscreteDist) -> Result<f64> {
    check_rate("arrival rate p", p)?;
    if p >= 1.0 {
        return Err(domain("p = 1 has no closed-form mean here; use the G/G generating function"));
    }
    let q = 1.0 - p;
    Ok(q / (p * s.pgf(q)))
}

/// Preemptive G/Geo/1/1: arbitrary `Y`, geometric `S` with rate `gamma`.
///
/// `H(z) = gamma z (1 - Y(z)) / (E[Y] (1 - z) (1 - (1 - gamma) z))`.
pub fn pgf_preemptive_ggeo(y: &DiscreteDist, gamma: f64, order: usize) -> Result<AoIDistribution> {
    check_rate("service rate gamma", gamma)?;
    check_order(order)?;
    let h = tail_series(y, 1, 1.0, order)?
        .mul(&geometric_series(1.0 - gamma, order))?
        .scale(gamma / y.mean());
    AoIDistribution::from_series(&h, 1.0 - gamma)
}

/// `(1 - gamma) / gamma + (E[Y] + E[Y^2]) / (2 E[Y])`.
pub fn mean_preemptive_ggeo(y: &DiscreteDist, gamma: f64) -> Result<f64> {
    check_rate("service rate gamma", gamma)?;
    let (m1, m2) = y.moments();
    Ok((1.0 - gamma) / gamma + (m1 + m2) / (2.0 * m1))
}

/// `(1 - Y(1 - gamma)) / E[Y]`, common prefactor of the non-preemptive series.
fn idle_entry_factor(y: &DiscreteDist, gamma: f64) -> Result<f64> {
    let blocked = y.pgf(1.0 - gamma);
    if !(1.0 - blocked > 0.0) {
        return Err(domain(format!("Y(1 - gamma) = {blocked}; the server never idles")));
    }
    Ok((1.0 - blocked) / y.mean())
}

/// Component functions of the non-preemptive G/Geo/1/1 generating function.
///
/// Field names follow the classical derivation. The state groups they
/// collect, with `(n, m, y)` = (AoI, elapsed service, slots since the last
/// generation):
///
/// * `h1`: idle server, packet generated in the last slot, `(n, 0, 0)`;
/// * `h2`: busy server, packet generated in the last slot, `(n, m, 0)`;
/// * `h3`: idle server, `(n, 0, y)` with `y >= 1`;
/// * `h4`: busy server, `(n, m, y)` with `y >= 1`;
/// * `h2m`: the `(n, m, 0)` group again, indexed by `z^m` instead of `z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonPreemptiveComponents {
    pub h1: TruncatedSeries,
    pub h2: TruncatedSeries,
    pub h3: TruncatedSeries,
    pub h4: TruncatedSeries,
    pub h2m: TruncatedSeries,
}

impl NonPreemptiveComponents {
    pub fn total(&self) -> Result<TruncatedSeries> {
        self.h1.add(&self.h2)?.add(&self.h3)?.add(&self.h4)
    }
}

/// Evaluates the five component series.
///
/// ```text
/// h1  = (1 - Y(q)) gamma z / (E[Y] (1 - Y(qz)))                 q = 1 - gamma
/// h2m = (1 - Y(q)) q z / (E[Y] (1 - Y(qz)))
/// (1 - Y(qz)) h2 = q Y(z) h1 + (q Y(z) - Y(qz)) h2m
/// h3  = (z - Y(z))/(1 - z) h1 + ((1 - Y(z))/(1 - z) - (1 - Y(qz))/(1 - qz)) h2m
/// h4  = (qz - Y(qz))/(1 - qz) h2
/// ```
pub fn components_nonpreemptive(y: &DiscreteDist, gamma: f64, order: usize) -> Result<NonPreemptiveComponents> {
    check_rate("service rate gamma", gamma)?;
    check_order(order)?;
    let q = 1.0 - gamma;
    let entry = idle_entry_factor(y, gamma)?;
    let y_z = pmf_series(y, 1.0, order);
    let y_qz = pmf_series(y, q, order);
    let inv_blocked = TruncatedSeries::one(order).sub(&y_qz)?.reciprocal()?;
    let z_over_blocked = inv_blocked.shift(1);

    let h1 = z_over_blocked.scale(entry * gamma);
    let h2m = z_over_blocked.scale(entry * q);
    let h2 = y_z
        .mul(&h1)?
        .scale(q)
        .add(&y_z.scale(q).sub(&y_qz)?.mul(&h2m)?)?
        .mul(&inv_blocked)?;
    // (z - Y(z))/(1 - z) and (qz - Y(qz))/(1 - qz) as tail series; the
    // difference of the two (1 - .)/(1 - .) quotients equals the difference
    // of these, since both carry the same constant term one.
    let surv_z = tail_series(y, 0, 1.0, order)?;
    let surv_qz = tail_series(y, 0, q, order)?;
    let h3 = surv_z.mul(&h1)?.add(&surv_z.sub(&surv_qz)?.mul(&h2m)?)?;
    let h4 = surv_qz.mul(&h2)?;
    Ok(NonPreemptiveComponents { h1, h2, h3, h4, h2m })
}

/// Non-preemptive G/Geo/1/1.
///
/// `H(z) = (1 - Y(z))/(1 - z) * (1 - Y(q)) gamma z / (E[Y] (1 - Y(qz)) (1 - qz))`
/// with `q = 1 - gamma`.
pub fn pgf_nonpreemptive_ggeo(y: &DiscreteDist, gamma: f64, order: usize) -> Result<AoIDistribution> {
    check_rate("service rate gamma", gamma)?;
    check_order(order)?;
    let q = 1.0 - gamma;
    let entry = idle_entry_factor(y, gamma)?;
    let inv_blocked = TruncatedSeries::one(order).sub(&pmf_series(y, q, order))?.reciprocal()?;
    let h = tail_series(y, 1, 1.0, order)?
        .mul(&inv_blocked)?
        .mul(&geometric_series(q, order))?
        .scale(entry * gamma);
    AoIDistribution::from_series(&h, q)
}

/// `q Y'(q) / (1 - Y(q)) + 1/gamma + E[Y(Y-1)] / (2 E[Y])` with `q = 1 - gamma`.
///
/// At `gamma = 1` the first term vanishes because `Y(0) = 0`.
pub fn mean_nonpreemptive_ggeo(y: &DiscreteDist, gamma: f64) -> Result<f64> {
    check_rate("service rate gamma", gamma)?;
    let q = 1.0 - gamma;
    let blocked = y.pgf(q);
    if !(1.0 - blocked > 0.0) {
        return Err(domain(format!("Y(1 - gamma) = {blocked}; the server never idles")));
    }
    let (m1, m2) = y.moments();
    Ok(q * y.pgf_derivative(q) / (1.0 - blocked) + 1.0 / gamma + (m2 - m1) / (2.0 * m1))
}

/// Which closed form produced a distribution or a mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    PreemptiveGG,
    PreemptiveBerG,
    PreemptiveGGeo,
    NonPreemptiveGGeo,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::PreemptiveGG => "G/G/1/1 preemptive",
            Formula::PreemptiveBerG => "Ber/G/1/1 preemptive",
            Formula::PreemptiveGGeo => "G/Geo/1/1 preemptive",
            Formula::NonPreemptiveGGeo => "G/Geo/1/1 non-preemptive",
        }
    }
}

/// Result of the analytic route for one system.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSolution {
    pub distribution: AoIDistribution,
    pub pgf_formula: Formula,
    /// Closed-form mean and the formula it came from, when one applies.
    pub closed_form_mean: Option<(Formula, f64)>,
}

/// Picks the most specific generating function and closed-form mean.
///
/// Preemptive: geometric service uses the G/Geo form, else geometric
/// arrivals (`p < 1`) use the Ber/G form, else the general G/G form.
/// Non-preemptive requires geometric service.
pub fn solve(spec: &SystemSpec, order: usize) -> Result<AnalyticSolution> {
    spec.check_analytic()?;
    let (y, s) = (&spec.interarrival, &spec.service);
    match spec.discipline {
        Discipline::Preemptive => {
            if let Some(gamma) = s.geometric_rate() {
                Ok(AnalyticSolution {
                    distribution: pgf_preemptive_ggeo(y, gamma, order)?,
                    pgf_formula: Formula::PreemptiveGGeo,
                    closed_form_mean: Some((Formula::PreemptiveGGeo, mean_preemptive_ggeo(y, gamma)?)),
                })
            } else if let Some(p) = y.geometric_rate().filter(|p| *p < 1.0) {
                Ok(AnalyticSolution {
                    distribution: pgf_preemptive_berg(p, s, order)?,
                    pgf_formula: Formula::PreemptiveBerG,
                    closed_form_mean: Some((Formula::PreemptiveBerG, mean_preemptive_berg(p, s)?)),
                })
            } else {
                Ok(AnalyticSolution {
                    distribution: pgf_preemptive_gg(y, s, order)?,
                    pgf_formula: Formula::PreemptiveGG,
                    closed_form_mean: None,
                })
            }
        }
        Discipline::NonPreemptive => {
            let gamma = s.geometric_rate().ok_or_else(|| Error::Unsupported("geometric service required".into()))?;
            Ok(AnalyticSolution {
                distribution: pgf_nonpreemptive_ggeo(y, gamma, order)?,
                pgf_formula: Formula::NonPreemptiveGGeo,
                closed_form_mean: Some((Formula::NonPreemptiveGGeo, mean_nonpreemptive_ggeo(y, gamma)?)),
            })
        }
    }
}

/// Closed-form mean alone, without expanding any series.
pub fn closed_form_mean(spec: &SystemSpec) -> Result<Option<(Formula, f64)>> {
    spec.check_analytic()?;
    let (y, s) = (&spec.interarrival, &spec.service);
    Ok(match spec.discipline {
        Discipline::Preemptive => match (s.geometric_rate(), y.geometric_rate()) {
            (Some(gamma), _) => Some((Formula::PreemptiveGGeo, mean_preemptive_ggeo(y, gamma)?)),
            (None, Some(p)) if p < 1.0 => Some((Formula::PreemptiveBerG, mean_preemptive_berg(p, s)?)),
            _ => None,
        },
        Discipline::NonPreemptive => {
            let gamma = s.geometric_rate().ok_or_else(|| Error::Unsupported("geometric service required".into()))?;
            Some((Formula::NonPreemptiveGGeo, mean_nonpreemptive_ggeo(y, gamma)?))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(r: f64) -> DiscreteDist {
        DiscreteDist::geometric(r).unwrap()
    }

    fn det(k: usize) -> DiscreteDist {
        DiscreteDist::deterministic(k).unwrap()
    }

    #[test]
    fn unit_slots_pin_aoi_at_one() {
        let a = pgf_preemptive_gg(&det(1), &det(1), 16).unwrap();
        assert!((a.prob(1) - 1.0).abs() < 1e-15);
        assert!((a.mean - 1.0).abs() < 1e-15);
        assert_eq!(a.mean_bounds, Some((1.0, 1.0)));
    }

    #[test]
    fn preemptive_geometric_mean_is_three() {
        let a = pgf_preemptive_gg(&geo(0.5), &geo(0.5), 256).unwrap();
        assert!((a.mean - 3.0).abs() < 1e-9, "{}", a.mean);
        let (lo, hi) = a.mean_bounds.unwrap();
        assert!(lo <= 3.0 + 1e-12 && 3.0 <= hi + 1e-12);
    }

    #[test]
    fn preemptive_component_examples() {
        let c = components_preemptive(&geo(0.5), &geo(0.5), 64).unwrap();
        // P{Y > 0} P{S <= 1} / E[Y] = 0.5 / 2
        assert!((c.h1.coeff(1) - 0.25).abs() < 1e-15);
        let total: f64 = c.total().unwrap().coeffs().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);

        // Fresh packet every slot: the server is busy at the end of a slot
        // exactly when that slot's packet needs more than one slot.
        let d = components_preemptive(&det(1), &geo(0.3), 128).unwrap();
        assert!((d.h2.coeffs().iter().sum::<f64>() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn berg_examples() {
        let a = pgf_preemptive_berg(0.5, &geo(0.5), 256).unwrap();
        assert!((a.mean - 3.0).abs() < 1e-9);
        assert!((a.captured_mass - 1.0).abs() < 1e-12);
        let b = pgf_preemptive_berg(0.5, &det(1), 256).unwrap();
        assert!((b.mean - 2.0).abs() < 1e-9);
        assert!((mean_preemptive_berg(0.5, &geo(0.5)).unwrap() - 3.0).abs() < 1e-15);
        assert!((mean_preemptive_berg(0.5, &det(1)).unwrap() - 2.0).abs() < 1e-15);
        assert!((mean_preemptive_berg(0.999, &det(1)).unwrap() - 1.0).abs() < 1e-2);
        assert!(matches!(mean_preemptive_berg(1.0, &det(1)), Err(Error::Domain(_))));
        // p = 1 falls back to the general route.
        let c = pgf_preemptive_berg(1.0, &DiscreteDist::explicit(&[0.5, 0.5]).unwrap(), 64).unwrap();
        assert!((c.captured_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ggeo_examples() {
        let a = pgf_preemptive_ggeo(&det(1), 0.5, 128).unwrap();
        assert!((a.mean - 2.0).abs() < 1e-12);
        let b = pgf_preemptive_ggeo(&det(2), 1.0, 16).unwrap();
        assert!((b.mean - 1.5).abs() < 1e-12);
        assert!((b.captured_mass - 1.0).abs() < 1e-15);
        assert!((mean_preemptive_ggeo(&geo(0.5), 0.5).unwrap() - 3.0).abs() < 1e-15);
        assert!((mean_preemptive_ggeo(&det(1), 1.0).unwrap() - 1.0).abs() < 1e-15);
        let e = DiscreteDist::explicit(&[0.5, 0.5]).unwrap();
        assert!((mean_preemptive_ggeo(&e, 0.5).unwrap() - 7.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn nonpreemptive_examples() {
        let a = pgf_nonpreemptive_ggeo(&geo(0.5), 0.5, 256).unwrap();
        assert!((a.mean - 11.0 / 3.0).abs() < 1e-9, "{}", a.mean);
        let b = pgf_nonpreemptive_ggeo(&det(1), 0.5, 256).unwrap();
        assert!((b.mean - 3.0).abs() < 1e-9);
        assert!((a.captured_mass - 1.0).abs() < 1e-12);
        assert!((mean_nonpreemptive_ggeo(&geo(0.5), 0.5).unwrap() - 11.0 / 3.0).abs() < 1e-14);
        assert!((mean_nonpreemptive_ggeo(&det(1), 0.5).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn nonpreemptive_unit_service_matches_preemptive() {
        // With one-slot service nothing is ever preempted or discarded.
        let y = DiscreteDist::explicit(&[0.1, 0.3, 0.2, 0.4]).unwrap();
        let np = mean_nonpreemptive_ggeo(&y, 1.0).unwrap();
        let p = mean_preemptive_ggeo(&y, 1.0).unwrap();
        assert!((np - p).abs() < 1e-14);
    }

    #[test]
    fn components_sum_to_nonpreemptive_pgf() {
        let y = DiscreteDist::explicit(&[0.3, 0.0, 0.5, 0.2]).unwrap();
        let c = components_nonpreemptive(&y, 0.35, 120).unwrap();
        let total = c.total().unwrap();
        let direct = pgf_nonpreemptive_ggeo(&y, 0.35, 120).unwrap();
        for n in 0..=120 {
            assert!((total.coeff(n).max(0.0) - direct.prob(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(pgf_preemptive_gg(&geo(0.5), &geo(0.5), 1), Err(Error::Parameter(_))));
        assert!(pgf_preemptive_ggeo(&geo(0.5), 0.0, 16).is_err());
        assert!(pgf_nonpreemptive_ggeo(&geo(0.5), 1.5, 16).is_err());
        let never = pgf_preemptive_gg(&det(1), &det(2), 16);
        assert!(matches!(never, Err(Error::Domain(_))));
        let spec = SystemSpec::new(Discipline::NonPreemptive, geo(0.5), DiscreteDist::explicit(&[1.0, 1.0]).unwrap());
        assert!(matches!(solve(&spec, 32), Err(Error::Unsupported(_))));
    }

    #[test]
    fn certified_mean_examples() {
        let a = pgf_preemptive_ggeo(&det(1), 0.5, 100).unwrap();
        let (lo, hi) = certified_mean(&a, 0.5).unwrap();
        assert!(hi - lo < 1e-20);

        let point = AoIDistribution::from_series(&TruncatedSeries::from_coeffs(20, &[0.0, 0.0, 1.0]), 0.0).unwrap();
        let (lo, hi) = certified_mean(&point, 0.3).unwrap();
        assert_eq!(lo, hi);
        assert_eq!(lo, 2.0);

        let g = pgf_preemptive_ggeo(&geo(0.5), 0.5, 256).unwrap();
        let (lo, hi) = g.mean_bounds.unwrap();
        assert!(lo <= 3.0 + 1e-12 && 3.0 <= hi + 1e-12);

        // A ratio above the claimed decay is refused.
        assert!(matches!(certified_mean(&a, 0.3), Err(Error::Certification(_))));
    }

    #[test]
    fn periodic_coefficients_are_reported_uncertified() {
        // Deterministic arrivals every two slots with geometric-free service
        // give AoI mass on a lattice.
        let y = det(2);
        let s = DiscreteDist::explicit(&[0.0, 0.6, 0.0, 0.4]).unwrap();
        let a = pgf_preemptive_gg(&y, &s, 64).unwrap();
        assert!(a.mean >= a.truncated_mean() - 1e-15);
        assert!(a.captured_mass <= 1.0 + 1e-9);
    }

    #[test]
    fn dispatch_picks_specific_forms() {
        let spec = SystemSpec::new(Discipline::Preemptive, geo(0.4), DiscreteDist::explicit(&[0.2, 0.8]).unwrap());
        let sol = solve(&spec, 128).unwrap();
        assert_eq!(sol.pgf_formula, Formula::PreemptiveBerG);
        let (_, m) = sol.closed_form_mean.unwrap();
        assert!((m - sol.distribution.mean).abs() < 1e-8);

        let spec = SystemSpec::new(Discipline::Preemptive, det(3), DiscreteDist::explicit(&[0.2, 0.8]).unwrap());
        let sol = solve(&spec, 128).unwrap();
        assert_eq!(sol.pgf_formula, Formula::PreemptiveGG);
        assert!(sol.closed_form_mean.is_none());
        assert!(closed_form_mean(&spec).unwrap().is_none());
    }
}
