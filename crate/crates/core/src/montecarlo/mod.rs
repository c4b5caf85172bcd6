//! Monte Carlo simulator for the two-way link over a Poisson field.
//!
//! The typical receiver `Rx0` sits at the origin and its transmitter `Tx0` at
//! `(d, 0)`. Interfering transmitters are a Poisson process on a disk centered
//! at the pair midpoint; each one has its own receiver at distance `d` in a
//! uniform direction. The forward band sees the transmitter process at `Rx0`
//! and the reverse band sees the receiver process at `Tx0`, so a single point
//! process drives both bands and their interference is correlated. Fades are
//! independent per band, per link and per trial.
//!
//! Every trial draws from its own ChaCha stream keyed by
//! `(master_seed, trial_index)`, and estimates are reduced from integer counts,
//! so results do not depend on how trials are spread across threads.

mod beamforming;
mod curve;
mod estimate;
mod region;
mod sampling;
pub mod stats;
mod trial;

pub use beamforming::{
    beamforming_trial, draw_projection_power, estimate_beamforming_success, BeamformingEstimate,
    BeamformingFades, BeamformingOutcome, GainModel,
};
pub use curve::{
    estimate_beamforming_density_at_outage, estimate_density_at_outage, DensityEstimate,
    SuccessCurve,
};
pub use estimate::{
    correlation_diagnostic, estimate_joint_success, region_doubling_shift, CorrelationReport,
    JointEstimate, TrialEstimate, TruncationCheck,
};
pub use region::{Parallelism, SimRegion, TrialPlan, TRUNCATION_BUDGET};
pub use sampling::{draw_fade_powers, sample_interferer_pairs, BandFades, PairSample, Point};
pub use trial::{joint_success_trial, TrialOutcome};
