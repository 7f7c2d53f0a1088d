//! Age-of-information laboratory for a two-stage status-update pipeline.
//!
//! A zero-wait source pushes updates through an exponential transmission
//! stage into an exponential edge server fronted by a one-packet-buffer
//! replacement queue (or, as a baseline, an unbounded FCFS queue). The crate
//! provides:
//!
//! * [`analytics`]: closed-form distributions, moments and the stationary
//!   average age, generic over the scalar type (floats, and exact rationals
//!   for the rational-function moments);
//! * [`simulator`]: a seedable discrete-event simulator producing
//!   [`SimulationTrace`]s and the time-averaged sawtooth age;
//! * [`estimators`]: batch-means confidence intervals, moment reports and
//!   empirical-vs-analytic density comparisons.

pub mod age;
pub mod analytics;
pub mod estimators;
pub mod format;
pub mod params;
pub mod quadrature;
pub mod record;
pub mod scalar;
pub mod simulator;

pub use age::AgeAccumulator;
pub use params::{ParamError, SystemParams};
pub use record::{ComputedPacketRecord, SimulationTrace, TraceViolation};
pub use scalar::{Real, Scalar};
pub use simulator::{QueuePolicy, SimConfig, SimError};

use num_rational::BigRational;

/// Double-precision parameters; the simulator and estimators work in this type.
pub type Params = SystemParams<f64>;
/// Single-precision parameters.
pub type Params32 = SystemParams<f32>;
/// Exact rational parameters for evaluating the closed-form moments without rounding.
pub type ExactParams = SystemParams<BigRational>;

/// Validated double-precision parameters from the two stage rates.
pub fn make_params(lambda: f64, mu: f64) -> Result<Params, ParamError> {
    SystemParams::new(lambda, mu)
}
