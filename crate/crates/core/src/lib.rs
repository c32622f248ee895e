//! Discrete age of information (AoI) for bufferless status-update systems.
//!
//! Time is slotted. A source emits packets with i.i.d. interarrival times `Y`
//! and a single server without buffer transmits them with i.i.d. service
//! times `S`, both supported on `{1, 2, ...}`. Under the *preemptive*
//! discipline a fresh packet displaces the one in service; under the
//! *non-preemptive* discipline it is dropped while the server is busy.
//!
//! The crate provides three independent views of the stationary AoI:
//!
//! * [`analytic`]: closed-form probability generating functions expanded as
//!   truncated power series ([`series`]), plus closed-form means;
//! * [`chain`]: the exact slot-level Markov chain on `(n, m)` /
//!   `(n, m, y)` state vectors, truncated at a maximal AoI and solved
//!   numerically, used as an oracle;
//! * a Monte Carlo simulator, which lives in the `aoi` companion crate
//!   together with file formats and the command line front end.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analytic;
pub mod chain;
pub mod dist;
mod error;
pub mod series;

pub use analytic::{AoIDistribution, Discipline, SystemSpec};
pub use dist::{DiscreteDist, DistKind};
pub use error::{Error, Result};
pub use series::TruncatedSeries;

/// Absolute tolerance used for probability comparisons.
pub const PROB_EPS: f64 = 1e-12;
