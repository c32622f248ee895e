//! Slot-level Monte Carlo simulation of the AoI process.
//!
//! Each slot, a packet may be generated at the start (renewal clock reaching
//! the sampled interarrival time) and the packet in service may complete at
//! the end. A completed packet sets AoI to its elapsed service time;
//! otherwise AoI grows by one. AoI is recorded at slot ends.

use aoi_core::{DiscreteDist, Discipline, DistKind, SystemSpec};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Generator and stream derivation, recorded alongside simulation output.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), seed_from_u64(seed), stream = replication index";

pub const DEFAULT_WARMUP: u64 = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub spec: SystemSpec,
    /// Total simulated slots per replication, warmup included.
    pub slots: u64,
    pub warmup: u64,
    pub seed: u64,
    pub replications: usize,
}

impl SimConfig {
    pub fn new(spec: SystemSpec, slots: u64, seed: u64, replications: usize) -> Self {
        Self { spec, slots, warmup: DEFAULT_WARMUP.min(slots / 10), seed, replications }
    }

    pub fn validate(&self) -> Result<(), aoi_core::Error> {
        if self.replications == 0 {
            return Err(aoi_core::Error::Parameter("at least one replication is required".into()));
        }
        if self.warmup >= self.slots {
            return Err(aoi_core::Error::Parameter(format!(
                "warmup ({}) must be smaller than slots ({})",
                self.warmup, self.slots
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// `pmf[n]` is the fraction of recorded slots with AoI `n`.
    pub pmf: Vec<f64>,
    /// Time-average AoI of each replication.
    pub replication_means: Vec<f64>,
    pub mean: f64,
    /// Standard error of `mean` across replications; `None` for a single one.
    pub std_error: Option<f64>,
    pub recorded_slots: u64,
}

enum Sampler {
    Fixed(u64),
    Geometric(rand_distr::Geometric),
    Table(WeightedIndex<f64>),
}

impl Sampler {
    fn new(d: &DiscreteDist) -> Self {
        match d.kind() {
            DistKind::Geometric { rate } if rate >= 1.0 => Sampler::Fixed(1),
            DistKind::Geometric { rate } => Sampler::Geometric(rand_distr::Geometric::new(rate).expect("rate in (0, 1)")),
            DistKind::Deterministic { period } => Sampler::Fixed(period as u64),
            DistKind::Explicit => {
                let probs = d.probs().expect("explicit distribution has weights");
                Sampler::Table(WeightedIndex::new(probs).expect("normalised weights"))
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            Sampler::Fixed(k) => *k,
            // Counts failures before the first success.
            Sampler::Geometric(g) => g.sample(rng) + 1,
            Sampler::Table(w) => w.sample(rng) as u64 + 1,
        }
    }
}

/// What happened in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotEvent {
    pub generated: bool,
    pub delivered: bool,
}

/// Sample path of a single replication.
struct Path {
    preemptive: bool,
    arrivals: Sampler,
    service: Sampler,
    rng: ChaCha8Rng,
    aoi: u64,
    /// Slots until the next generation; zero means "this slot".
    until_arrival: u64,
    /// Elapsed service of the packet in the server, zero when idle.
    elapsed: u64,
    required: u64,
}

impl Path {
    /// Starts just after a packet was generated and delivered in one slot.
    fn new(spec: &SystemSpec, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let arrivals = Sampler::new(&spec.interarrival);
        let until_arrival = arrivals.sample(&mut rng);
        Self {
            preemptive: spec.discipline == Discipline::Preemptive,
            arrivals,
            service: Sampler::new(&spec.service),
            rng,
            aoi: 1,
            until_arrival,
            elapsed: 0,
            required: 0,
        }
    }

    #[inline]
    fn step(&mut self) -> SlotEvent {
        self.until_arrival -= 1;
        let generated = self.until_arrival == 0;
        if generated {
            self.until_arrival = self.arrivals.sample(&mut self.rng);
            if self.preemptive || self.required == 0 {
                self.elapsed = 0;
                self.required = self.service.sample(&mut self.rng);
            } else {
                // Discarded: the clock restarts, the server is untouched.
            }
        }
        let busy = self.required > 0;
        let mut delivered = false;
        if busy {
            self.elapsed += 1;
            if self.elapsed == self.required {
                self.aoi = self.elapsed;
                self.elapsed = 0;
                self.required = 0;
                delivered = true;
            }
        }
        if !delivered {
            self.aoi += 1;
        }
        SlotEvent { generated, delivered }
    }
}

struct Tally {
    counts: Vec<u64>,
    sum: u128,
    recorded: u64,
}

fn run_replication(config: &SimConfig, rep: usize) -> Tally {
    let mut path = Path::new(&config.spec, config.seed, rep as u64);
    for _ in 0..config.warmup {
        path.step();
    }
    let mut counts = vec![0u64; 64];
    let mut sum = 0u128;
    for _ in config.warmup..config.slots {
        path.step();
        let a = path.aoi as usize;
        if a >= counts.len() {
            counts.resize(a * 2, 0);
        }
        counts[a] += 1;
        sum += a as u128;
    }
    Tally { counts, sum, recorded: config.slots - config.warmup }
}

/// Runs all replications, in parallel, and pools them.
///
/// Replication `r` draws from stream `r` of the generator seeded with
/// `config.seed`, so the result does not depend on scheduling.
pub fn simulate(config: &SimConfig) -> Result<SimResult, aoi_core::Error> {
    config.validate()?;
    let tallies: Vec<Tally> = (0..config.replications)
        .into_par_iter()
        .map(|rep| run_replication(config, rep))
        .collect();
    let len = tallies.iter().map(|t| t.counts.iter().rposition(|c| *c > 0).unwrap_or(0) + 1).max().unwrap_or(1);
    let mut counts = vec![0u64; len];
    for t in &tallies {
        for (c, x) in counts.iter_mut().zip(&t.counts) {
            *c += x;
        }
    }
    let recorded: u64 = tallies.iter().map(|t| t.recorded).sum();
    let pmf = counts.iter().map(|c| *c as f64 / recorded as f64).collect();
    let replication_means: Vec<f64> = tallies.iter().map(|t| t.sum as f64 / t.recorded as f64).collect();
    let r = replication_means.len() as f64;
    let mean = replication_means.iter().sum::<f64>() / r;
    let std_error = (replication_means.len() > 1).then(|| {
        let var = replication_means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (r - 1.0);
        (var / r).sqrt()
    });
    Ok(SimResult { pmf, replication_means, mean, std_error, recorded_slots: recorded })
}

/// Outcome of [`state_trace_check`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceReport {
    pub transitions: u64,
    pub violations: u64,
    pub max_m: u64,
    pub max_y: u64,
}

/// `(n, m, y)` with `y` the slots since the last generation.
type TraceState = (u64, u64, u64);

/// Runs one replication for `horizon` slots and checks every one-slot state
/// change against the transition table of the discipline.
///
/// A transition is a violation unless the table row selected by the realised
/// (generation, delivery) pair leads to the observed state and has positive
/// probability in the observed state.
pub fn state_trace_check(config: &SimConfig, horizon: u64) -> TraceReport {
    let spec = &config.spec;
    let mut path = Path::new(spec, config.seed, 0);
    let mut since = 0u64;
    let mut state: TraceState = (1, 0, 0);
    let mut report = TraceReport::default();
    for _ in 0..horizon {
        let event = path.step();
        since = if event.generated { 0 } else { since + 1 };
        let next = (path.aoi, path.elapsed, since);
        let expected = match spec.discipline {
            Discipline::Preemptive => preemptive_row(spec, state, event),
            Discipline::NonPreemptive => nonpreemptive_row(spec, state, event),
        };
        let observed = match spec.discipline {
            Discipline::Preemptive => (next.0, next.1, 0),
            Discipline::NonPreemptive => next,
        };
        report.transitions += 1;
        match expected {
            Some((target, prob)) if target == observed && prob > 0.0 => {}
            _ => report.violations += 1,
        }
        report.max_m = report.max_m.max(next.1);
        report.max_y = report.max_y.max(next.2);
        state = observed;
    }
    report
}

/// `P{X > k | X > k-1}`, or `None` when the condition is impossible.
fn survive(d: &DiscreteDist, k: u64) -> Option<f64> {
    let alive = d.tail(k as usize - 1);
    (alive > 0.0).then(|| d.tail(k as usize) / alive)
}

fn arrival_given(d: &DiscreteDist, k: u64) -> Option<f64> {
    survive(d, k).map(|s| 1.0 - s)
}

fn preemptive_row(spec: &SystemSpec, (n, m, _): TraceState, e: SlotEvent) -> Option<(TraceState, f64)> {
    let (y, s) = (&spec.interarrival, &spec.service);
    // The renewal clock is implicit: `m` slots when busy, `n` when idle.
    let clock = if m == 0 { n } else { m };
    let a = if e.generated { arrival_given(y, clock)? } else { survive(y, clock)? };
    let row = match (m, e.generated, e.delivered) {
        (0, false, false) => ((n + 1, 0, 0), a),
        (0, false, true) => return None,
        (_, true, false) => ((n + 1, 1, 0), a * s.tail(1)),
        (_, true, true) => ((1, 0, 0), a * s.pmf(1)),
        (_, false, false) => ((n + 1, m + 1, 0), a * survive(s, m + 1)?),
        (_, false, true) => ((m + 1, 0, 0), a * (1.0 - survive(s, m + 1)?)),
    };
    Some(row)
}

fn nonpreemptive_row(spec: &SystemSpec, (n, m, y): TraceState, e: SlotEvent) -> Option<(TraceState, f64)> {
    let (yd, s) = (&spec.interarrival, &spec.service);
    let a = if e.generated { arrival_given(yd, y + 1)? } else { survive(yd, y + 1)? };
    let row = match (m, e.generated, e.delivered) {
        (0, false, false) => ((n + 1, 0, y + 1), a),
        (0, false, true) => return None,
        (0, true, false) => ((n + 1, 1, 0), a * s.tail(1)),
        (0, true, true) => ((1, 0, 0), a * s.pmf(1)),
        (_, g, false) => ((n + 1, m + 1, if g { 0 } else { y + 1 }), a * survive(s, m + 1)?),
        (_, g, true) => ((m + 1, 0, if g { 0 } else { y + 1 }), a * (1.0 - survive(s, m + 1)?)),
    };
    Some(row)
}
