//! Single-point deep report with a relative-error self-check.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use aoi_core::estimators::{build_moment_report, MomentReport};
use aoi_core::format::fmt_real;
use aoi_core::simulator::{run_simulation, write_trace_dump, SimConfig};
use aoi_core::{Params, QueuePolicy};

use crate::config::{PolicySelection, Settings};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SingleSpec {
    pub params: Params,
    pub policy: QueuePolicy,
    pub packets: usize,
    pub warmup_frac: f64,
    pub seed: u64,
    /// Largest tolerated relative error among quantities with a closed form.
    pub threshold: f64,
    pub report_path: Option<PathBuf>,
    pub trace_dump: Option<PathBuf>,
}

impl SingleSpec {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let params = match (s.lambda, &s.rho) {
            (Some(lambda), _) => Params::new(lambda, s.mu)?,
            (None, Some(grid)) => match grid.0.as_slice() {
                [rho] => Params::from_rho(*rho, s.mu)?,
                _ => return Err(CliError::Param("single runs take one rho value".into())),
            },
            (None, None) => Params::from_rho(1.0, s.mu)?,
        };
        let policy = match s.policy.unwrap_or(PolicySelection::Replacement) {
            PolicySelection::Replacement => QueuePolicy::Replacement,
            PolicySelection::Fcfs => QueuePolicy::Fcfs,
            PolicySelection::Both => {
                return Err(CliError::Param("single runs take one policy".into()))
            }
        };
        if s.threshold.is_nan() || s.threshold < 0.0 {
            return Err(CliError::Param(format!(
                "threshold must be non-negative, got {}",
                s.threshold
            )));
        }
        Ok(SingleSpec {
            params,
            policy,
            packets: s.packets,
            warmup_frac: s.warmup_frac,
            seed: s.seed,
            threshold: s.threshold,
            report_path: s.out.clone(),
            trace_dump: s.trace_dump.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleOutcome {
    pub report: MomentReport,
    /// Report CSV as written to `report_path` (or meant for stdout).
    pub text: String,
    /// Quantities whose relative error exceeded the threshold.
    pub failures: Vec<String>,
}

impl SingleOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const REPORT_COLUMNS: &str = "quantity,point,half_width,analytic,relative_error";

pub fn render_report(report: &MomentReport) -> String {
    let f = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# rho={} mu={} policy={} records={}",
        fmt_real(report.params.rho()),
        fmt_real(report.params.mu()),
        report.policy,
        report.records
    );
    out.push_str(REPORT_COLUMNS);
    out.push('\n');
    for e in &report.estimates {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.quantity,
            fmt_real(e.point),
            fmt_real(e.half_width),
            f(e.analytic),
            f(e.relative_error)
        );
    }
    let analytic_age = report.estimates.iter().find_map(|e| match e.quantity {
        aoi_core::estimators::Quantity::AvgAge => e.analytic,
        _ => None,
    });
    for (name, value) in [
        ("avg_age_integrated", report.avg_age_integrated),
        ("avg_age_assembled", report.avg_age_assembled),
    ] {
        let rel = analytic_age.map(|a| (value - a).abs() / a);
        let _ = writeln!(
            out,
            "{name},{},,{},{}",
            fmt_real(value),
            f(analytic_age),
            f(rel)
        );
    }
    out
}

/// Simulates one point, reports every moment against its closed form and
/// checks the relative errors against `spec.threshold`.
///
/// A tolerance failure is reported through [`SingleOutcome::failures`], not
/// as an error, so callers still get the report.
pub fn run_single(spec: &SingleSpec) -> Result<SingleOutcome, CliError> {
    let config = SimConfig::new(spec.params, spec.policy, spec.packets, spec.seed)
        .with_warmup_fraction(spec.warmup_frac);
    let trace = run_simulation(&config)?;
    if let Some(path) = &spec.trace_dump {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        write_trace_dump(&trace, BufWriter::new(file)).map_err(|e| CliError::io(path, e))?;
    }
    let report = build_moment_report(&trace)?;
    let text = render_report(&report);
    if let Some(path) = &spec.report_path {
        fs::write(path, &text).map_err(|e| CliError::io(path, e))?;
    }
    let failures = report
        .estimates
        .iter()
        .filter_map(|e| {
            let rel = e.relative_error?;
            (rel > spec.threshold).then(|| {
                format!(
                    "{}: relative error {rel:.3e} > {:.3e}",
                    e.quantity, spec.threshold
                )
            })
        })
        .collect();
    Ok(SingleOutcome {
        report,
        text,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Options, RhoGrid};

    fn settings(o: Options) -> Settings {
        Options {
            workers: Some(1),
            ..o
        }
        .resolve()
        .unwrap()
    }

    #[test]
    fn params_from_lambda_or_rho() {
        let s = settings(Options {
            lambda: Some(3.0),
            mu: Some(2.0),
            ..Options::default()
        });
        assert_eq!(SingleSpec::from_settings(&s).unwrap().params.rho(), 1.5);
        let s = settings(Options {
            rho: Some(RhoGrid(vec![2.0])),
            ..Options::default()
        });
        assert_eq!(SingleSpec::from_settings(&s).unwrap().params.lambda(), 2.0);
        let s = settings(Options {
            rho: Some(RhoGrid(vec![1.0, 2.0])),
            ..Options::default()
        });
        assert!(SingleSpec::from_settings(&s).is_err());
        let s = settings(Options {
            policy: Some(PolicySelection::Both),
            ..Options::default()
        });
        assert!(SingleSpec::from_settings(&s).is_err());
    }

    #[test]
    fn undersampled_run_fails_tight_threshold() {
        let s = settings(Options {
            packets: Some(1000),
            threshold: Some(0.001),
            seed: Some(42),
            ..Options::default()
        });
        let out = run_single(&SingleSpec::from_settings(&s).unwrap()).unwrap();
        assert!(!out.passed());
        assert!(out.text.contains("avg_age_integrated"));
        assert!(out.text.contains("avg_age_assembled"));
    }
}
