//! Parameter sweeps over `rho` for one or both queue policies.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use aoi_core::analytics;
use aoi_core::estimators::{build_moment_report, Quantity};
use aoi_core::format::fmt_real;
use aoi_core::simulator::{run_simulation, SimConfig};
use aoi_core::{Params, QueuePolicy};

use crate::config::{PolicySelection, RhoGrid, Settings};
use crate::error::CliError;

pub const SWEEP_COLUMNS: [&str; 17] = [
    "rho",
    "mu",
    "policy",
    "analytic_avg_age",
    "sim_avg_age",
    "ci_half_width",
    "mean_x",
    "mean_y",
    "mean_y_sq",
    "mean_ty",
    "prob_w0_emp",
    "prob_w0_analytic",
    "discarded_fraction",
    "packets",
    "seed",
    "warning",
    "error",
];

/// FCFS points at or above this utilisation get a warning.
pub const FCFS_NEAR_CRITICAL: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mu: f64,
    pub rho_values: RhoGrid,
    pub policies: Vec<QueuePolicy>,
    pub packets_per_point: usize,
    pub warmup_frac: f64,
    /// Point `i` (an index into `rho_values`) uses `seed + i` for every policy.
    pub seed: u64,
    pub workers: usize,
    pub output_path: Option<PathBuf>,
    pub timestamp: bool,
    /// Packet cap for FCFS points with `rho >= 1`.
    pub fcfs_cap: usize,
}

impl SweepSpec {
    pub fn new(
        mu: f64,
        rho_values: Vec<f64>,
        policies: Vec<QueuePolicy>,
        packets_per_point: usize,
        seed: u64,
    ) -> Self {
        SweepSpec {
            mu,
            rho_values: RhoGrid(rho_values),
            policies,
            packets_per_point,
            warmup_frac: aoi_core::simulator::DEFAULT_WARMUP_FRACTION,
            seed,
            workers: 1,
            output_path: None,
            timestamp: false,
            fcfs_cap: crate::config::DEFAULT_FCFS_CAP,
        }
    }

    pub fn from_settings(
        s: &Settings,
        default_rho: &str,
        default_policy: PolicySelection,
    ) -> Result<Self, CliError> {
        let rho = match &s.rho {
            Some(g) => g.clone(),
            None => default_rho.parse().map_err(CliError::Param)?,
        };
        Ok(SweepSpec {
            mu: s.mu,
            rho_values: rho,
            policies: s.policy.unwrap_or(default_policy).policies(),
            packets_per_point: s.packets,
            warmup_frac: s.warmup_frac,
            seed: s.seed,
            workers: s.workers,
            output_path: s.out.clone(),
            timestamp: s.timestamp,
            fcfs_cap: s.fcfs_cap,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.rho_values.validate()?;
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(CliError::Param(format!(
                "mu must be positive, got {}",
                self.mu
            )));
        }
        if self.policies.is_empty() {
            return Err(CliError::Param("no policy selected".into()));
        }
        if self.packets_per_point == 0 || self.fcfs_cap == 0 {
            return Err(CliError::Param("packet counts must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.warmup_frac) {
            return Err(CliError::Param(format!(
                "warmup fraction must be in [0, 1), got {}",
                self.warmup_frac
            )));
        }
        if self.workers == 0 {
            return Err(CliError::Param("workers must be positive".into()));
        }
        Ok(())
    }
}

/// One `(rho, policy)` point. Simulated fields are `None` when the point
/// failed; `error` then says why.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rho: f64,
    pub mu: f64,
    pub policy: QueuePolicy,
    pub analytic_avg_age: Option<f64>,
    pub sim_avg_age: Option<f64>,
    pub ci_half_width: Option<f64>,
    pub mean_x: Option<f64>,
    pub mean_y: Option<f64>,
    pub mean_y_sq: Option<f64>,
    pub mean_ty: Option<f64>,
    pub prob_w0_emp: Option<f64>,
    pub prob_w0_analytic: Option<f64>,
    pub discarded_fraction: Option<f64>,
    pub packets: usize,
    pub seed: u64,
    pub warning: Option<String>,
    pub error: Option<String>,
}

impl SweepRow {
    fn csv_line(&self) -> String {
        let f = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
        let text = |v: &Option<String>| v.as_deref().map(csv_text).unwrap_or_default();
        [
            fmt_real(self.rho),
            fmt_real(self.mu),
            self.policy.to_string(),
            f(self.analytic_avg_age),
            f(self.sim_avg_age),
            f(self.ci_half_width),
            f(self.mean_x),
            f(self.mean_y),
            f(self.mean_y_sq),
            f(self.mean_ty),
            f(self.prob_w0_emp),
            f(self.prob_w0_analytic),
            f(self.discarded_fraction),
            self.packets.to_string(),
            self.seed.to_string(),
            text(&self.warning),
            text(&self.error),
        ]
        .join(",")
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub csv: String,
}

impl SweepOutcome {
    /// One human-readable line per row.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let sim = r.sim_avg_age.map_or("-".to_string(), |v| format!("{v:.5}"));
            let analytic = r
                .analytic_avg_age
                .map_or("-".to_string(), |v| format!("{v:.5}"));
            let _ = write!(
                out,
                "rho={:<8} {:<11} sim={sim:<12} analytic={analytic}",
                r.rho,
                r.policy.as_str()
            );
            if let Some(w) = &r.warning {
                let _ = write!(out, "  [warning: {w}]");
            }
            if let Some(e) = &r.error {
                let _ = write!(out, "  [error: {e}]");
            }
            out.push('\n');
        }
        out
    }
}

struct Point {
    rho: f64,
    policy: QueuePolicy,
    seed: u64,
}

fn run_point(spec: &SweepSpec, point: &Point) -> SweepRow {
    let mut packets = spec.packets_per_point;
    let mut warning = None;
    if point.policy == QueuePolicy::Fcfs && point.rho >= 1.0 {
        packets = packets.min(spec.fcfs_cap);
        warning = Some(format!(
            "unstable fcfs queue (rho >= 1): age grows without bound; run capped at {packets} packets"
        ));
    } else if point.policy == QueuePolicy::Fcfs && point.rho >= FCFS_NEAR_CRITICAL {
        warning = Some("near-critical fcfs queue: slow convergence".to_string());
    }
    let analytic_ok = point.policy == QueuePolicy::Replacement;
    let mut row = SweepRow {
        rho: point.rho,
        mu: spec.mu,
        policy: point.policy,
        analytic_avg_age: None,
        sim_avg_age: None,
        ci_half_width: None,
        mean_x: None,
        mean_y: None,
        mean_y_sq: None,
        mean_ty: None,
        prob_w0_emp: None,
        prob_w0_analytic: None,
        discarded_fraction: None,
        packets,
        seed: point.seed,
        warning,
        error: None,
    };
    let params = match Params::from_rho(point.rho, spec.mu) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    if analytic_ok {
        row.analytic_avg_age = Some(analytics::avg_age_replacement(&params));
        row.prob_w0_analytic = Some(analytics::prob_wait_zero(&params));
    }
    let config = SimConfig::new(params, point.policy, packets, point.seed)
        .with_warmup_fraction(spec.warmup_frac);
    let result = run_simulation(&config)
        .map_err(|e| e.to_string())
        .and_then(|trace| {
            build_moment_report(&trace)
                .map(|r| (trace, r))
                .map_err(|e| e.to_string())
        });
    match result {
        Ok((trace, report)) => {
            let age = report.get(Quantity::AvgAge);
            row.sim_avg_age = Some(age.point);
            row.ci_half_width = Some(age.half_width);
            row.mean_x = Some(report.get(Quantity::MeanX).point);
            row.mean_y = Some(report.get(Quantity::MeanY).point);
            row.mean_y_sq = Some(report.get(Quantity::MeanYSq).point);
            row.mean_ty = Some(report.get(Quantity::MeanTY).point);
            row.prob_w0_emp = Some(report.get(Quantity::ProbW0).point);
            row.discarded_fraction =
                Some(trace.discarded_count as f64 / trace.generated_count as f64);
        }
        Err(e) => row.error = Some(e),
    }
    row
}

/// Renders rows as CSV, optionally preceded by a `# generated` comment line.
pub fn render_csv(rows: &[SweepRow], timestamp: bool) -> String {
    let mut csv = String::new();
    if timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        let _ = writeln!(csv, "# generated unix_time={secs}");
    }
    csv.push_str(&SWEEP_COLUMNS.join(","));
    csv.push('\n');
    for r in rows {
        csv.push_str(&r.csv_line());
        csv.push('\n');
    }
    csv
}

/// Runs every `(rho, policy)` point and assembles rows in sweep order.
///
/// Points run concurrently on `spec.workers` threads; a failing point is
/// recorded in its row instead of aborting the sweep. The CSV is written to
/// `spec.output_path` when set.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome, CliError> {
    spec.validate()?;
    let points: Vec<Point> = spec
        .rho_values
        .0
        .iter()
        .enumerate()
        .flat_map(|(i, &rho)| {
            spec.policies.iter().map(move |&policy| Point {
                rho,
                policy,
                seed: spec.seed.wrapping_add(i as u64),
            })
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| CliError::Param(format!("cannot start {} workers: {e}", spec.workers)))?;
    let rows: Vec<SweepRow> =
        pool.install(|| points.par_iter().map(|p| run_point(spec, p)).collect());
    let csv = render_csv(&rows, spec.timestamp);
    if let Some(path) = &spec.output_path {
        fs::write(path, &csv).map_err(|e| CliError::io(path, e))?;
    }
    Ok(SweepOutcome { rows, csv })
}
