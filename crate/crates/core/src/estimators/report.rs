use std::fmt;

use crate::analytics;
use crate::record::SimulationTrace;
use crate::simulator::{age_segments, extract_moments, integrate_age, QueuePolicy};
use crate::Params;

use super::batch::{batch_means_ci, ratio_batch_means_ci, BatchEstimate};
use super::EstimateError;

/// Waits below this count as the zero-wait atom.
pub const ZERO_WAIT_THRESHOLD: f64 = 1e-12;

pub const DEFAULT_BATCHES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    MeanX,
    MeanY,
    MeanYSq,
    MeanZ,
    MeanTY,
    MeanWPlusY,
    MeanW,
    ProbW0,
    AvgAge,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::MeanX,
        Quantity::MeanY,
        Quantity::MeanYSq,
        Quantity::MeanZ,
        Quantity::MeanTY,
        Quantity::MeanWPlusY,
        Quantity::MeanW,
        Quantity::ProbW0,
        Quantity::AvgAge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::MeanX => "mean_x",
            Quantity::MeanY => "mean_y",
            Quantity::MeanYSq => "mean_y_sq",
            Quantity::MeanZ => "mean_z",
            Quantity::MeanTY => "mean_ty",
            Quantity::MeanWPlusY => "mean_wplus_y",
            Quantity::MeanW => "mean_w",
            Quantity::ProbW0 => "prob_w0",
            Quantity::AvgAge => "avg_age",
        }
    }

    /// Closed-form value under the replacement policy.
    fn analytic(self, p: &Params) -> f64 {
        match self {
            Quantity::MeanX => analytics::mean_x(p),
            Quantity::MeanY | Quantity::MeanZ => analytics::mean_y(p),
            Quantity::MeanYSq => analytics::mean_y_sq(p),
            Quantity::MeanTY => analytics::mean_ty(p),
            Quantity::MeanWPlusY => analytics::mean_wplus_times_y(p),
            Quantity::MeanW => analytics::mean_wait(p),
            Quantity::ProbW0 => analytics::prob_wait_zero(p),
            Quantity::AvgAge => analytics::avg_age_replacement(p),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub quantity: Quantity,
    pub point: f64,
    pub half_width: f64,
    pub analytic: Option<f64>,
    pub relative_error: Option<f64>,
}

impl MomentEstimate {
    fn new(quantity: Quantity, est: BatchEstimate, analytic: Option<f64>) -> Self {
        let relative_error = analytic
            .filter(|a| *a != 0.0)
            .map(|a| (est.mean - a).abs() / a.abs());
        Self {
            quantity,
            point: est.mean,
            half_width: est.half_width,
            analytic,
            relative_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub params: Params,
    pub policy: QueuePolicy,
    /// Post-warmup records the estimates are based on.
    pub records: usize,
    pub estimates: Vec<MomentEstimate>,
    /// Average age assembled from the trace moments,
    /// `(mean(X) mean(Y) + mean(TY) + mean(Y^2)/2) / mean(Y)`.
    pub avg_age_assembled: f64,
    /// Time-averaged age from direct integration of the sawtooth.
    pub avg_age_integrated: f64,
}

impl MomentReport {
    pub fn get(&self, q: Quantity) -> &MomentEstimate {
        self.estimates
            .iter()
            .find(|e| e.quantity == q)
            .expect("every quantity is reported")
    }

    /// Largest relative error among quantities with an analytic value.
    pub fn max_relative_error(&self) -> Option<(Quantity, f64)> {
        self.estimates
            .iter()
            .filter_map(|e| e.relative_error.map(|r| (e.quantity, r)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn build_moment_report(trace: &SimulationTrace) -> Result<MomentReport, EstimateError> {
    build_moment_report_with(trace, DEFAULT_BATCHES)
}

/// Estimates every [`Quantity`] with a batch-means interval and pairs it
/// with the closed form. Analytic values are attached only for the
/// replacement policy; the closed forms do not describe FCFS.
pub fn build_moment_report_with(
    trace: &SimulationTrace,
    num_batches: usize,
) -> Result<MomentReport, EstimateError> {
    let seq = extract_moments(trace)?;
    let segments = age_segments(trace)?;
    let zero_wait: Vec<f64> = seq
        .w
        .iter()
        .map(|&w| if w < ZERO_WAIT_THRESHOLD { 1.0 } else { 0.0 })
        .collect();
    let (areas, durations): (Vec<f64>, Vec<f64>) = segments.into_iter().unzip();
    let p = trace.params;
    let with_analytic = trace.policy == QueuePolicy::Replacement;

    let mut estimates = Vec::with_capacity(Quantity::ALL.len());
    for q in Quantity::ALL {
        let est = match q {
            Quantity::MeanX => batch_means_ci(&seq.x, num_batches)?,
            Quantity::MeanY => batch_means_ci(&seq.y, num_batches)?,
            Quantity::MeanYSq => batch_means_ci(&seq.y_sq, num_batches)?,
            Quantity::MeanZ => batch_means_ci(&seq.z, num_batches)?,
            Quantity::MeanTY => batch_means_ci(&seq.ty, num_batches)?,
            Quantity::MeanWPlusY => batch_means_ci(&seq.wplus_y, num_batches)?,
            Quantity::MeanW => batch_means_ci(&seq.w, num_batches)?,
            Quantity::ProbW0 => batch_means_ci(&zero_wait, num_batches)?,
            Quantity::AvgAge => ratio_batch_means_ci(&areas, &durations, num_batches)?,
        };
        estimates.push(MomentEstimate::new(
            q,
            est,
            with_analytic.then(|| q.analytic(&p)),
        ));
    }

    let my = mean(&seq.y);
    let avg_age_assembled = (mean(&seq.x) * my + mean(&seq.ty) + mean(&seq.y_sq) / 2.0) / my;
    Ok(MomentReport {
        params: p,
        policy: trace.policy,
        records: trace.post_warmup().len(),
        estimates,
        avg_age_assembled,
        avg_age_integrated: integrate_age(trace)?,
    })
}
