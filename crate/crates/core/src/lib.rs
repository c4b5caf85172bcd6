//! Two-way transmission capacity of Poisson ad-hoc networks.
//!
//! The crate provides closed-form bounds on the density of simultaneously
//! active bidirectional links that meet a joint outage target, the optimal
//! split of a frequency band between the two directions, a lower bound for
//! transmit beamforming with quantized feedback, and a Monte Carlo simulator
//! that samples correlated transmitter/receiver point processes to validate
//! all of them.
//!
//! Modules:
//!
//! - [`analytic`]: SIR thresholds, interference constants, joint success
//!   bounds and the capacity interval.
//! - [`allocation`]: the convex bandwidth-split problem and its solver.
//! - [`feedback`]: limited-feedback beamforming bound.
//! - [`montecarlo`]: the simulator.
//! - [`experiments`]: JSON-configured runs that emit CSV.

pub mod allocation;
pub mod analytic;
mod error;
pub mod experiments;
pub mod feedback;
pub mod montecarlo;

pub use error::{Error, Result};
