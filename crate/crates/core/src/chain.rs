//! Exact slot-level Markov chain of the AoI process, used as an oracle.
//!
//! Preemptive systems are tracked by `(n, m)`: AoI and age of the packet in
//! service (`m = 0` when idle). Non-preemptive systems need a third
//! coordinate `y`, the number of slots since the last generation, because
//! dropped arrivals restart the interarrival clock without touching `m`.
//!
//! The state space is cut at `n <= n_max`. Probability flowing past the cut
//! is recorded as leak and the stationary vector is renormalised after each
//! sweep. States whose conditioning event has probability zero are never
//! created, so hazards are only evaluated inside the support.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::Hash;

use hashbrown::HashMap;

use crate::analytic::AoIDistribution;
use crate::dist::DiscreteDist;
use crate::error::{domain, param};
use crate::{Error, Result};

pub trait ChainState: Copy + Eq + Hash + fmt::Debug + fmt::Display {
    /// AoI carried by the state.
    fn aoi(&self) -> usize;
}

/// Preemptive state `(n, m)`, `n > m >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State2 {
    pub n: u32,
    pub m: u32,
}

/// Non-preemptive state `(n, m, y)`: `n > y` when idle, `n > m > y` when busy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State3 {
    pub n: u32,
    pub m: u32,
    pub y: u32,
}

impl State2 {
    pub const fn new(n: u32, m: u32) -> Self {
        Self { n, m }
    }
}

impl State3 {
    pub const fn new(n: u32, m: u32, y: u32) -> Self {
        Self { n, m, y }
    }
}

impl ChainState for State2 {
    fn aoi(&self) -> usize {
        self.n as usize
    }
}

impl ChainState for State3 {
    fn aoi(&self) -> usize {
        self.n as usize
    }
}

impl fmt::Display for State2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.n, self.m)
    }
}

impl fmt::Display for State3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n, self.m, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub source: u32,
    pub target: u32,
    pub prob: f64,
}

/// Truncated chain with transitions stored as triplets sorted by source.
///
/// States are laid out level by level in AoI, busy states before idle ones
/// within a level, so that every transition except a delivery moves forward
/// in the layout.
#[derive(Debug, Clone)]
pub struct ChainModel<S> {
    states: Vec<S>,
    index: HashMap<S, u32>,
    transitions: Vec<Transition>,
    offsets: Vec<u32>,
    leak: Vec<f64>,
    n_max: usize,
    interarrival: DiscreteDist,
    service: DiscreteDist,
}

impl<S: ChainState> ChainModel<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).map(|i| *i as usize)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, i: usize) -> &[Transition] {
        &self.transitions[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Probability of leaving the truncated space in one step from state `i`.
    pub fn leak(&self, i: usize) -> f64 {
        self.leak[i]
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn interarrival(&self) -> &DiscreteDist {
        &self.interarrival
    }

    pub fn service(&self) -> &DiscreteDist {
        &self.service
    }

    /// Writes `src -> dst : prob` lines, one per transition.
    pub fn write_edge_list<W: fmt::Write>(&self, w: &mut W) -> fmt::Result {
        for t in &self.transitions {
            writeln!(
                w,
                "{} -> {} : {}",
                self.states[t.source as usize], self.states[t.target as usize], t.prob
            )?;
        }
        Ok(())
    }

    fn assemble(
        states: Vec<S>,
        n_max: usize,
        interarrival: DiscreteDist,
        service: DiscreteDist,
        mut step: impl FnMut(&S, &mut Vec<(S, f64)>),
    ) -> Result<Self> {
        let index: HashMap<S, u32> = states.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let mut transitions = Vec::with_capacity(states.len() * 4);
        let mut offsets = Vec::with_capacity(states.len() + 1);
        let mut leak = vec![0.0; states.len()];
        let mut buf = Vec::with_capacity(4);
        for (i, s) in states.iter().enumerate() {
            offsets.push(transitions.len() as u32);
            buf.clear();
            step(s, &mut buf);
            for (target, prob) in buf.drain(..) {
                if prob <= 0.0 {
                    continue;
                }
                if target.aoi() > n_max {
                    leak[i] += prob;
                    continue;
                }
                let Some(&j) = index.get(&target) else {
                    return Err(domain(format!("transition {s} -> {target} reaches a pruned state")));
                };
                transitions.push(Transition { source: i as u32, target: j, prob });
            }
        }
        offsets.push(transitions.len() as u32);
        Ok(Self { states, index, transitions, offsets, leak, n_max, interarrival, service })
    }
}

/// `P{X > k} > 0`, without trusting an underflowed geometric tail.
fn alive(d: &DiscreteDist, k: usize) -> bool {
    match d.geometric_rate() {
        Some(r) => r < 1.0 || k == 0,
        None => d.tail(k) > 0.0,
    }
}

/// `(P{X = k+1 | X > k}, P{X > k+1 | X > k})`, assuming `P{X > k} > 0`.
fn step_probs(d: &DiscreteDist, k: usize) -> (f64, f64) {
    if let Some(r) = d.geometric_rate() {
        if r < 1.0 {
            return (r, 1.0 - r);
        }
    }
    let alive = d.tail(k);
    (d.pmf(k + 1) / alive, d.tail(k + 1) / alive)
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max < 3 {
        return Err(param(format!("n_max must be at least 3, got {n_max}")));
    }
    if n_max > u32::MAX as usize / 2 {
        return Err(param("n_max too large"));
    }
    Ok(())
}

/// Enumerates the preemptive chain on `{(n, m) : n_max >= n > m >= 0}`.
///
/// From a busy state `(n, m)` the next slot brings, with `a` the arrival
/// hazard at `m` and `c` the completion hazard at `m + 1`:
/// `(n+1, m+1)` w.p. `(1-a)(1-c)`, `(m+1, 0)` w.p. `(1-a) c`,
/// `(n+1, 1)` w.p. `a P{S > 1}`, `(1, 0)` w.p. `a P{S = 1}`.
/// From an idle state `(n, 0)`: `(n+1, 0)`, `(n+1, 1)` or `(1, 0)`.
pub fn build_preemptive(y: &DiscreteDist, s: &DiscreteDist, n_max: usize) -> Result<ChainModel<State2>> {
    check_n_max(n_max)?;
    let mut states = Vec::new();
    for n in 1..=n_max {
        for m in (1..n).rev() {
            if alive(y, m - 1) && alive(s, m) {
                states.push(State2::new(n as u32, m as u32));
            }
        }
        if alive(y, n - 1) {
            states.push(State2::new(n as u32, 0));
        }
    }
    let (s_one, s_more) = (s.pmf(1), s.tail(1));
    ChainModel::assemble(states, n_max, y.clone(), s.clone(), |st, out| {
        let (n, m) = (st.n, st.m);
        if m == 0 {
            let (arrive, wait) = step_probs(y, n as usize - 1);
            out.push((State2::new(n + 1, 0), wait));
            out.push((State2::new(n + 1, 1), arrive * s_more));
            out.push((State2::new(1, 0), arrive * s_one));
        } else {
            let (arrive, wait) = step_probs(y, m as usize - 1);
            let (done, busy) = step_probs(s, m as usize);
            out.push((State2::new(n + 1, m + 1), wait * busy));
            out.push((State2::new(m + 1, 0), wait * done));
            out.push((State2::new(n + 1, 1), arrive * s_more));
            out.push((State2::new(1, 0), arrive * s_one));
        }
    })
}

/// Enumerates the non-preemptive chain with geometric service of rate `gamma`.
pub fn build_nonpreemptive(y: &DiscreteDist, gamma: f64, n_max: usize) -> Result<ChainModel<State3>> {
    let s = DiscreteDist::geometric(gamma)?;
    build_nonpreemptive_general(y, &s, n_max)
}

/// Non-preemptive chain for an arbitrary service distribution.
///
/// The `(n, m, y)` description stays exact for general service since `m` is
/// the elapsed service time; the completion probability becomes the service
/// hazard at `m + 1` instead of a constant `gamma`.
pub fn build_nonpreemptive_general(y: &DiscreteDist, s: &DiscreteDist, n_max: usize) -> Result<ChainModel<State3>> {
    check_n_max(n_max)?;
    let y_cap = y.support_max().unwrap_or(usize::MAX);
    let mut states = Vec::new();
    for n in 1..=n_max {
        for m in (1..n).rev() {
            if !alive(s, m) {
                continue;
            }
            for yy in 0..m.min(y_cap) {
                states.push(State3::new(n as u32, m as u32, yy as u32));
            }
        }
        for yy in 0..n.min(y_cap) {
            states.push(State3::new(n as u32, 0, yy as u32));
        }
    }
    let (s_one, s_more) = (s.pmf(1), s.tail(1));
    ChainModel::assemble(states, n_max, y.clone(), s.clone(), |st, out| {
        let State3 { n, m, y: age } = *st;
        let (arrive, wait) = step_probs(y, age as usize);
        if m == 0 {
            out.push((State3::new(n + 1, 0, age + 1), wait));
            out.push((State3::new(n + 1, 1, 0), arrive * s_more));
            out.push((State3::new(1, 0, 0), arrive * s_one));
        } else {
            let (done, busy) = step_probs(s, m as usize);
            out.push((State3::new(n + 1, m + 1, age + 1), wait * busy));
            out.push((State3::new(m + 1, 0, age + 1), wait * done));
            out.push((State3::new(n + 1, m + 1, 0), arrive * busy));
            out.push((State3::new(m + 1, 0, 0), arrive * done));
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryVector {
    pub probs: Vec<f64>,
    /// `|| pi P / |pi P| - pi ||_1` of the returned vector.
    pub residual: f64,
    /// Stationary probability of leaving the truncated space per slot.
    pub leak: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// In-place sweeps in layout order; inflow from lower levels is used as
    /// soon as it is computed.
    GaussSeidel,
    /// Power iteration on the lazy chain `(I + P) / 2`.
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub method: Method,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iters: 1_000_000, method: Method::GaussSeidel }
    }
}

/// Stationary vector with the default Gauss-Seidel solver.
pub fn stationary<S: ChainState>(model: &ChainModel<S>, tol: f64, max_iters: usize) -> Result<StationaryVector> {
    stationary_with(model, SolveOptions { tol, max_iters, ..SolveOptions::default() })
}

/// Iterates from the uniform vector until the L1 change between successive
/// normalised iterates drops below `tol`.
pub fn stationary_with<S: ChainState>(model: &ChainModel<S>, opts: SolveOptions) -> Result<StationaryVector> {
    if model.is_empty() {
        return Err(param("empty chain"));
    }
    if !(opts.tol > 0.0) {
        return Err(param("tolerance must be positive"));
    }
    let len = model.len();
    let mut pi = vec![1.0 / len as f64; len];
    let mut change = f64::INFINITY;
    let mut iterations = 0;
    match opts.method {
        Method::GaussSeidel => {
            let incoming = Incoming::new(model);
            let mut prev = pi.clone();
            // Sweeps of a periodic chain can cycle; damping breaks the cycle.
            let damp_after = 2_000.min(opts.max_iters / 2).max(1);
            while iterations < opts.max_iters {
                iterations += 1;
                prev.copy_from_slice(&pi);
                // Solving pi P = lambda pi keeps the fixed point equal to the
                // renormalised power iteration when mass leaks.
                let lambda = 1.0 - pi.iter().zip(&model.leak).map(|(p, l)| p * l).sum::<f64>();
                incoming.sweep(&mut pi, lambda);
                if iterations > damp_after {
                    for (p, q) in pi.iter_mut().zip(&prev) {
                        *p = 0.5 * (*p + q);
                    }
                }
                normalise(&mut pi);
                change = l1_distance(&pi, &prev);
                if change < opts.tol {
                    break;
                }
            }
        }
        Method::Power => {
            let mut next = vec![0.0; len];
            while iterations < opts.max_iters {
                iterations += 1;
                push_forward(model, &pi, &mut next);
                for (n, p) in next.iter_mut().zip(&pi) {
                    *n = 0.5 * (*n + p);
                }
                normalise(&mut next);
                change = l1_distance(&pi, &next);
                core::mem::swap(&mut pi, &mut next);
                if change < opts.tol {
                    break;
                }
            }
        }
    }
    let (residual, leak) = residual_of(model, &pi);
    let out = StationaryVector { probs: pi, residual, leak, iterations };
    if change >= opts.tol && residual > opts.tol {
        return Err(Error::Convergence(alloc::boxed::Box::new(out)));
    }
    Ok(out)
}

/// Incoming transitions grouped by target, with self-loops split off.
struct Incoming {
    offsets: Vec<u32>,
    sources: Vec<u32>,
    probs: Vec<f64>,
    self_loop: Vec<f64>,
}

impl Incoming {
    fn new<S: ChainState>(model: &ChainModel<S>) -> Self {
        let len = model.len();
        let mut counts = vec![0u32; len + 1];
        let mut self_loop = vec![0.0; len];
        for t in model.transitions() {
            if t.source == t.target {
                self_loop[t.source as usize] += t.prob;
            } else {
                counts[t.target as usize + 1] += 1;
            }
        }
        for i in 0..len {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let total = offsets[len] as usize;
        let mut sources = vec![0u32; total];
        let mut probs = vec![0.0; total];
        let mut fill = counts;
        for t in model.transitions() {
            if t.source != t.target {
                let k = fill[t.target as usize] as usize;
                sources[k] = t.source;
                probs[k] = t.prob;
                fill[t.target as usize] += 1;
            }
        }
        Self { offsets, sources, probs, self_loop }
    }

    fn sweep(&self, pi: &mut [f64], lambda: f64) {
        for t in 0..pi.len() {
            let (lo, hi) = (self.offsets[t] as usize, self.offsets[t + 1] as usize);
            let inflow: f64 = self.sources[lo..hi]
                .iter()
                .zip(&self.probs[lo..hi])
                .map(|(s, p)| pi[*s as usize] * p)
                .sum();
            let stay = self.self_loop[t];
            pi[t] = if stay < lambda - 1e-15 { inflow / (lambda - stay) } else { pi[t] + inflow };
        }
    }
}

fn push_forward<S: ChainState>(model: &ChainModel<S>, pi: &[f64], next: &mut [f64]) {
    next.iter_mut().for_each(|x| *x = 0.0);
    for t in model.transitions() {
        next[t.target as usize] += pi[t.source as usize] * t.prob;
    }
}

fn normalise(v: &mut [f64]) {
    let total: f64 = v.iter().sum();
    if total > 0.0 {
        v.iter_mut().for_each(|x| *x /= total);
    }
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn residual_of<S: ChainState>(model: &ChainModel<S>, pi: &[f64]) -> (f64, f64) {
    let mut next = vec![0.0; pi.len()];
    push_forward(model, pi, &mut next);
    let leak: f64 = pi.iter().zip(&model.leak).map(|(p, l)| p * l).sum();
    normalise(&mut next);
    (l1_distance(&next, pi), leak)
}

/// Sums stationary mass by AoI.
///
/// The tail bound is the per-slot leak plus a geometric extrapolation of the
/// mass beyond `n_max` from the last two levels.
pub fn aoi_marginal<S: ChainState>(model: &ChainModel<S>, pi: &StationaryVector) -> AoIDistribution {
    let mut pmf = vec![0.0; model.n_max() + 1];
    for (s, p) in model.states().iter().zip(&pi.probs) {
        pmf[s.aoi()] += p;
    }
    let captured_mass: f64 = pmf.iter().sum();
    let mean: f64 = pmf.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let last = pmf[model.n_max()];
    let before = pmf[model.n_max() - 1];
    let beyond = if last <= 0.0 {
        0.0
    } else if before > last {
        let r = last / before;
        last * r / (1.0 - r)
    } else {
        1.0
    };
    AoIDistribution {
        pmf,
        captured_mass,
        mean,
        tail_bound: (pi.leak + beyond).min(1.0),
        mean_bounds: None,
    }
}

/// Largest violation of the balance equations written per state group.
///
/// The equations are evaluated from the distributions directly, not from the
/// stored transitions, so they check the builder as well as the solver. The
/// leak renormalisation is undone by comparing against the scaled vector.
pub trait BalanceEquations {
    fn residuals(&self, pi: &StationaryVector) -> f64;
}

/// `P{X > k | X > k-1}`, zero when the condition is impossible.
fn survive(d: &DiscreteDist, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let alive = d.tail(k - 1);
    if alive > 0.0 {
        d.tail(k) / alive
    } else {
        0.0
    }
}

/// `P{X = k | X > k-1}`, zero when the condition is impossible.
fn hazard(d: &DiscreteDist, k: usize) -> f64 {
    let alive = d.tail(k - 1);
    if alive > 0.0 {
        d.pmf(k) / alive
    } else {
        0.0
    }
}

fn scale_for_leak(pi: &StationaryVector) -> f64 {
    1.0 - pi.leak
}

impl BalanceEquations for ChainModel<State2> {
    fn residuals(&self, pi: &StationaryVector) -> f64 {
        let (y, s) = (&self.interarrival, &self.service);
        let at = |n: usize, m: usize| -> f64 {
            self.index_of(&State2::new(n as u32, m as u32)).map_or(0.0, |i| pi.probs[i])
        };
        let n_max = self.n_max;
        let keep = scale_for_leak(pi);
        // Probability that a packet is generated in a slot.
        let mut arrivals = 0.0;
        for st in &self.states {
            let m = if st.m == 0 { st.n } else { st.m } as usize;
            arrivals += at(st.n as usize, st.m as usize) * hazard(y, m);
        }
        let mut worst: f64 = 0.0;
        for st in &self.states {
            let (n, m) = (st.n as usize, st.m as usize);
            let rhs = if m >= 2 {
                at(n - 1, m - 1) * survive(y, m - 1) * survive(s, m)
            } else if m == 1 && n >= 3 {
                let fresh = at(n - 1, 0) * hazard(y, n - 1)
                    + (1..=n - 2).map(|j| at(n - 1, j) * hazard(y, j)).sum::<f64>();
                fresh * s.tail(1)
            } else if m == 1 {
                at(1, 0) * y.pmf(1) * s.tail(1)
            } else if n >= 2 {
                let carried = (n..=n_max).map(|k| at(k, n - 1)).sum::<f64>();
                at(n - 1, 0) * survive(y, n - 1) + carried * survive(y, n - 1) * hazard(s, n)
            } else {
                arrivals * s.pmf(1)
            };
            worst = worst.max((rhs - keep * at(n, m)).abs());
        }
        worst
    }
}

impl BalanceEquations for ChainModel<State3> {
    fn residuals(&self, pi: &StationaryVector) -> f64 {
        let (y, s) = (&self.interarrival, &self.service);
        let at = |n: usize, m: usize, a: usize| -> f64 {
            self.index_of(&State3::new(n as u32, m as u32, a as u32)).map_or(0.0, |i| pi.probs[i])
        };
        let n_max = self.n_max;
        let keep = scale_for_leak(pi);
        // P{Y = j+1 | Y > j}
        let arrive = |j: usize| hazard(y, j + 1);
        let mut worst: f64 = 0.0;
        for st in &self.states {
            let (n, m, a) = (st.n as usize, st.m as usize, st.y as usize);
            let rhs = if m >= 1 {
                let busy = survive(s, m);
                if a >= 2 {
                    at(n - 1, m - 1, a - 1) * survive(y, a) * busy
                } else if a == 1 {
                    // (n, m, 1) with m >= 2; m = 1 would need y < m = 1.
                    at(n - 1, m - 1, 0) * y.tail(1) * busy
                } else if m >= 3 {
                    let fresh = at(n - 1, m - 1, 0) * y.pmf(1)
                        + (1..=m - 2).map(|j| at(n - 1, m - 1, j) * arrive(j)).sum::<f64>();
                    fresh * busy
                } else if m == 2 {
                    at(n - 1, 1, 0) * y.pmf(1) * busy
                } else if n >= 3 {
                    let fresh = at(n - 1, 0, 0) * y.pmf(1)
                        + (1..=n - 2).map(|j| at(n - 1, 0, j) * arrive(j)).sum::<f64>();
                    fresh * s.tail(1)
                } else {
                    at(1, 0, 0) * y.pmf(1) * s.tail(1)
                }
            } else {
                let done = hazard(s, n);
                if a >= 2 {
                    let carried = (n..=n_max).map(|k| at(k, n - 1, a - 1)).sum::<f64>();
                    at(n - 1, 0, a - 1) * survive(y, a) + carried * survive(y, a) * done
                } else if a == 1 {
                    let carried = (n..=n_max).map(|k| at(k, n - 1, 0)).sum::<f64>();
                    at(n - 1, 0, 0) * y.tail(1) + carried * y.tail(1) * done
                } else if n >= 3 {
                    let first = (n..=n_max).map(|k| at(k, n - 1, 0)).sum::<f64>() * y.pmf(1);
                    let later = (1..=n - 2)
                        .map(|j| (n..=n_max).map(|k| at(k, n - 1, j)).sum::<f64>() * arrive(j))
                        .sum::<f64>();
                    (first + later) * done
                } else if n == 2 {
                    (2..=n_max).map(|k| at(k, 1, 0)).sum::<f64>() * y.pmf(1) * done
                } else {
                    let idle_fresh = (1..=n_max).map(|k| at(k, 0, 0)).sum::<f64>() * y.pmf(1);
                    let idle_aged = self
                        .states
                        .iter()
                        .filter(|t| t.m == 0 && t.y >= 1)
                        .map(|t| at(t.n as usize, 0, t.y as usize) * arrive(t.y as usize))
                        .sum::<f64>();
                    (idle_fresh + idle_aged) * s.pmf(1)
                }
            };
            worst = worst.max((rhs - keep * at(n, m, a)).abs());
        }
        worst
    }
}

/// Solves a preemptive chain and returns its AoI marginal.
pub fn solve_preemptive(y: &DiscreteDist, s: &DiscreteDist, n_max: usize, opts: SolveOptions) -> Result<AoIDistribution> {
    let model = build_preemptive(y, s, n_max)?;
    let pi = stationary_with(&model, opts)?;
    Ok(aoi_marginal(&model, &pi))
}

/// Solves a non-preemptive chain (general service) and returns its AoI marginal.
pub fn solve_nonpreemptive(y: &DiscreteDist, s: &DiscreteDist, n_max: usize, opts: SolveOptions) -> Result<AoIDistribution> {
    let model = build_nonpreemptive_general(y, s, n_max)?;
    let pi = stationary_with(&model, opts)?;
    Ok(aoi_marginal(&model, &pi))
}

/// Edge list of a model as a string.
pub fn edge_list<S: ChainState>(model: &ChainModel<S>) -> String {
    let mut out = String::new();
    // Writing into a String cannot fail.
    let _ = model.write_edge_list(&mut out);
    out
}
