//! Batch driver for the age-of-information laboratory: parameter sweeps,
//! single-point deep reports and plot-ready figure data.

pub mod config;
pub mod error;
pub mod figure;
pub mod single;
pub mod sweep;

pub use config::{Options, PolicySelection, RhoGrid, Settings};
pub use error::CliError;
pub use figure::{emit_figure_data, FigureOutcome};
pub use single::{run_single, SingleOutcome, SingleSpec};
pub use sweep::{run_sweep, SweepOutcome, SweepRow, SweepSpec};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "AOI_WORKERS";
