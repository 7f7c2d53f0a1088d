//! Command-line flags, `key=value` config files and their merge.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;

use aoi_core::QueuePolicy;

use crate::error::CliError;

/// Options shared by every subcommand. Each may also come from a config
/// file (`--config`); flags win on conflict.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Options {
    /// Plain-text key=value file; keys are the long flag names without dashes.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transmission rate (single-point runs; overrides --rho).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Computing rate.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Utilisation: a value, a comma list, or start:stop:step.
    #[arg(long)]
    pub rho: Option<RhoGrid>,
    /// replacement, fcfs or both.
    #[arg(long)]
    pub policy: Option<PolicySelection>,
    /// Computed packets per point, warmup included.
    #[arg(long)]
    pub packets: Option<usize>,
    /// Leading share of computed packets excluded from statistics.
    #[arg(long = "warmup-frac")]
    pub warmup_frac: Option<f64>,
    /// Base seed; point i of a sweep uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Concurrent sweep points.
    #[arg(long, env = crate::WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Output file (stdout when absent, except for figure data).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the full trace of a single-point run here.
    #[arg(long = "trace-dump")]
    pub trace_dump: Option<PathBuf>,
    /// Largest tolerated relative error of a single-point report.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Omit the timestamp comment line from CSV output.
    #[arg(long = "no-timestamp")]
    pub no_timestamp: bool,
    /// Packet cap for FCFS points with rho >= 1.
    #[arg(long = "fcfs-cap")]
    pub fcfs_cap: Option<usize>,
}

impl Options {
    /// Parses a config file body. Blank lines and `#` comments are skipped.
    pub fn from_config_text(text: &str) -> Result<Self, CliError> {
        let mut o = Options::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Param(format!("config line {}: expected key=value", lineno + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let bad =
                |e: String| CliError::Param(format!("config line {} ({key}): {e}", lineno + 1));
            match key.as_str() {
                "lambda" => o.lambda = Some(parse(value).map_err(bad)?),
                "mu" => o.mu = Some(parse(value).map_err(bad)?),
                "rho" => o.rho = Some(value.parse().map_err(bad)?),
                "policy" => o.policy = Some(value.parse().map_err(bad)?),
                "packets" => o.packets = Some(parse(value).map_err(bad)?),
                "warmup-frac" => o.warmup_frac = Some(parse(value).map_err(bad)?),
                "seed" => o.seed = Some(parse(value).map_err(bad)?),
                "workers" => o.workers = Some(parse(value).map_err(bad)?),
                "out" => o.out = Some(PathBuf::from(value)),
                "trace-dump" => o.trace_dump = Some(PathBuf::from(value)),
                "threshold" => o.threshold = Some(parse(value).map_err(bad)?),
                "no-timestamp" => o.no_timestamp = parse(value).map_err(bad)?,
                "fcfs-cap" => o.fcfs_cap = Some(parse(value).map_err(bad)?),
                other => {
                    return Err(CliError::Param(format!(
                        "config line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(o)
    }

    pub fn from_config_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_config_text(&text)
    }

    /// `self` with every unset field taken from `file`.
    pub fn or(self, file: Options) -> Options {
        Options {
            config: self.config.or(file.config),
            lambda: self.lambda.or(file.lambda),
            mu: self.mu.or(file.mu),
            rho: self.rho.or(file.rho),
            policy: self.policy.or(file.policy),
            packets: self.packets.or(file.packets),
            warmup_frac: self.warmup_frac.or(file.warmup_frac),
            seed: self.seed.or(file.seed),
            workers: self.workers.or(file.workers),
            out: self.out.or(file.out),
            trace_dump: self.trace_dump.or(file.trace_dump),
            threshold: self.threshold.or(file.threshold),
            no_timestamp: self.no_timestamp || file.no_timestamp,
            fcfs_cap: self.fcfs_cap.or(file.fcfs_cap),
        }
    }

    /// Merges the referenced config file (if any) under the flags.
    pub fn resolve(self) -> Result<Settings, CliError> {
        let merged = match &self.config {
            Some(path) => {
                let file = Options::from_config_file(path)?;
                self.or(file)
            }
            None => self,
        };
        Ok(Settings::from_options(merged))
    }
}

fn parse<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| format!("`{s}`: {e}"))
}

pub const DEFAULT_PACKETS: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_THRESHOLD: f64 = 0.05;
pub const DEFAULT_FCFS_CAP: usize = 100_000;

/// Fully resolved options with defaults applied. `rho` stays optional since
/// its default depends on the subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub lambda: Option<f64>,
    pub mu: f64,
    pub rho: Option<RhoGrid>,
    pub policy: Option<PolicySelection>,
    pub packets: usize,
    pub warmup_frac: f64,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub trace_dump: Option<PathBuf>,
    pub threshold: f64,
    pub timestamp: bool,
    pub fcfs_cap: usize,
}

impl Settings {
    fn from_options(o: Options) -> Self {
        Settings {
            lambda: o.lambda,
            mu: o.mu.unwrap_or(1.0),
            rho: o.rho,
            policy: o.policy,
            packets: o.packets.unwrap_or(DEFAULT_PACKETS),
            warmup_frac: o
                .warmup_frac
                .unwrap_or(aoi_core::simulator::DEFAULT_WARMUP_FRACTION),
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            workers: o.workers.unwrap_or_else(default_workers),
            out: o.out,
            trace_dump: o.trace_dump,
            threshold: o.threshold.unwrap_or(DEFAULT_THRESHOLD),
            timestamp: !o.no_timestamp,
            fcfs_cap: o.fcfs_cap.unwrap_or(DEFAULT_FCFS_CAP),
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Which queue policies to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicySelection {
    Replacement,
    Fcfs,
    Both,
}

impl PolicySelection {
    pub fn policies(self) -> Vec<QueuePolicy> {
        match self {
            PolicySelection::Replacement => vec![QueuePolicy::Replacement],
            PolicySelection::Fcfs => vec![QueuePolicy::Fcfs],
            PolicySelection::Both => vec![QueuePolicy::Replacement, QueuePolicy::Fcfs],
        }
    }
}

impl FromStr for PolicySelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "replacement" => Ok(PolicySelection::Replacement),
            "fcfs" => Ok(PolicySelection::Fcfs),
            "both" => Ok(PolicySelection::Both),
            other => Err(format!(
                "unknown policy `{other}` (expected replacement, fcfs or both)"
            )),
        }
    }
}

/// Utilisation values in sweep order.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoGrid(pub Vec<f64>);

impl RhoGrid {
    /// Inclusive `start..=stop` in multiples of `step`.
    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self, String> {
        if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
            return Err(format!("invalid range {start}:{stop}:{step}"));
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if !(0.0..=1e6).contains(&count) {
            return Err(format!("range {start}:{stop}:{step} is empty or too long"));
        }
        // Rounding to 12 decimals keeps grid points like 0.3 tidy.
        let values = (0..=count as usize)
            .map(|i| {
                let v = start + i as f64 * step;
                format!("{v:.12}")
                    .parse::<f64>()
                    .expect("formatted float parses")
            })
            .collect();
        Ok(RhoGrid(values))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.0.is_empty() {
            return Err(CliError::Param("rho grid is empty".into()));
        }
        if let Some(bad) = self.0.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(CliError::Param(format!(
                "rho values must be positive, got {bad}"
            )));
        }
        if self.0.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Param(
                "rho grid must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

impl FromStr for RhoGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(RhoGrid(Vec::new()));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [start, stop, step] => RhoGrid::range(parse(start)?, parse(stop)?, parse(step)?),
            [_] => s
                .split(',')
                .map(|v| parse(v.trim()))
                .collect::<Result<_, _>>()
                .map(RhoGrid),
            _ => Err(format!(
                "`{s}`: expected a value, a comma list or start:stop:step"
            )),
        }
    }
}
