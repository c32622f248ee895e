//! Simulation, file formats and the `aoi` command line on top of `aoi-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distspec;
pub mod report;
pub mod sim;

pub use distspec::{format_dist, parse_dist};
pub use sim::{simulate, state_trace_check, SimConfig, SimResult, TraceReport};
