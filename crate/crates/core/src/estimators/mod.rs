//! Statistical estimates from simulation traces and their comparison with
//! the closed forms.

mod batch;
mod density;
mod report;

use thiserror::Error;

use crate::simulator::SimError;

pub use batch::{batch_means_ci, ratio_batch_means_ci, sample_correlation, BatchEstimate, Z_95};
pub use density::{compare_density, DensityComparison, DensityQuantity, MIN_DENSITY_SAMPLES};
pub use report::{
    build_moment_report, build_moment_report_with, MomentEstimate, MomentReport, Quantity,
    DEFAULT_BATCHES, ZERO_WAIT_THRESHOLD,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("insufficient data: need at least {needed} samples, have {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("{0}")]
    Param(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}
