use std::str::FromStr;

use crate::analytics::{pdf_y, WaitDistribution};
use crate::quadrature;
use crate::record::SimulationTrace;
use crate::simulator::extract_moments;
use crate::Params;

use super::report::ZERO_WAIT_THRESHOLD;
use super::EstimateError;

/// Smallest sample count accepted by [`compare_density`].
pub const MIN_DENSITY_SAMPLES: usize = 100_000;

const BIN_RANGE: std::ops::RangeInclusive<usize> = 20..=500;
const CDF_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityQuantity {
    /// Continuous part of the waiting time (the zero atom is split off).
    WaitContinuous,
    /// Gap between transmission completions of consecutive computed packets.
    InterArrival,
}

impl FromStr for DensityQuantity {
    type Err = EstimateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "w" | "wait" => Ok(DensityQuantity::WaitContinuous),
            "y" | "inter_arrival" => Ok(DensityQuantity::InterArrival),
            other => Err(EstimateError::Param(format!(
                "unsupported density quantity `{other}`"
            ))),
        }
    }
}

/// Empirical histogram and CDF of a trace quantity against its closed-form
/// density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityComparison {
    pub quantity: DensityQuantity,
    /// `num_bins + 1` edges at equal-probability quantiles of the analytic
    /// continuous part; the last edge is stretched to cover every sample.
    pub bin_edges: Vec<f64>,
    /// Counts divided by `(total_count * width)`, so heights times widths sum
    /// to the empirical continuous mass.
    pub heights: Vec<f64>,
    /// Bin midpoints.
    pub grid: Vec<f64>,
    /// Analytic (continuous-part) density at `grid`.
    pub analytic_density: Vec<f64>,
    /// Sup distance between the empirical and analytic CDFs of the
    /// continuous part, both normalised to unit mass.
    pub sup_cdf_distance: f64,
    /// Samples in the zero atom (always zero for the inter-arrival gap).
    pub atom_count: usize,
    pub continuous_count: usize,
    pub total_count: usize,
}

impl DensityComparison {
    pub fn atom_mass(&self) -> f64 {
        self.atom_count as f64 / self.total_count as f64
    }

    pub fn continuous_mass(&self) -> f64 {
        self.continuous_count as f64 / self.total_count as f64
    }
}

struct Analytic {
    pdf: Box<dyn Fn(f64) -> f64>,
    mass: f64,
    decay: f64,
}

impl Analytic {
    fn of(quantity: DensityQuantity, p: &Params) -> Self {
        match quantity {
            DensityQuantity::WaitContinuous => {
                let dist = WaitDistribution::of(p);
                Analytic {
                    pdf: Box::new(move |w| dist.density(w)),
                    mass: dist.continuous_mass(),
                    decay: dist.density_decay,
                }
            }
            DensityQuantity::InterArrival => {
                let p = *p;
                Analytic {
                    pdf: Box::new(move |y| {
                        pdf_y(y.max(0.0), &p).expect("y is clamped to the support")
                    }),
                    mass: 1.0,
                    decay: p.lambda().min(p.mu()),
                }
            }
        }
    }

    /// Normalised continuous-part CDF by quadrature.
    fn cdf(&self, x: f64) -> f64 {
        quadrature::integrate(&self.pdf, 0.0, x, CDF_TOL) / self.mass
    }

    fn quantile(&self, prob: f64) -> f64 {
        let mut hi = 1.0 / self.decay;
        while self.cdf(hi) < prob {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < prob {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Compares the empirical distribution of `quantity` in `trace` with the
/// closed-form density.
///
/// Bins are equal-probability under the analytic continuous part. The CDF
/// distance is computed over the continuous samples only (waits at or above
/// the zero-wait threshold for `W`).
pub fn compare_density(
    trace: &SimulationTrace,
    quantity: DensityQuantity,
    num_bins: usize,
) -> Result<DensityComparison, EstimateError> {
    if !BIN_RANGE.contains(&num_bins) {
        return Err(EstimateError::Param(format!(
            "num_bins must be in [{}, {}], got {num_bins}",
            BIN_RANGE.start(),
            BIN_RANGE.end()
        )));
    }
    let seq = extract_moments(trace)?;
    let raw = match quantity {
        DensityQuantity::WaitContinuous => seq.w,
        DensityQuantity::InterArrival => seq.y,
    };
    let total_count = raw.len();
    if total_count < MIN_DENSITY_SAMPLES {
        return Err(EstimateError::InsufficientData {
            needed: MIN_DENSITY_SAMPLES,
            got: total_count,
        });
    }
    let mut samples: Vec<f64> = match quantity {
        DensityQuantity::WaitContinuous => raw
            .into_iter()
            .filter(|&w| w >= ZERO_WAIT_THRESHOLD)
            .collect(),
        DensityQuantity::InterArrival => raw,
    };
    let continuous_count = samples.len();
    let atom_count = total_count - continuous_count;
    if continuous_count < 2 {
        return Err(EstimateError::InsufficientData {
            needed: 2,
            got: continuous_count,
        });
    }
    samples.sort_by(f64::total_cmp);

    let analytic = Analytic::of(quantity, &trace.params);

    let n = continuous_count as f64;
    let mut sup: f64 = 0.0;
    let mut cdf = 0.0;
    let mut prev = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        cdf += quadrature::integrate(&analytic.pdf, prev, x, CDF_TOL) / analytic.mass;
        prev = x;
        let below = i as f64 / n;
        let above = (i + 1) as f64 / n;
        sup = sup.max(above - cdf).max(cdf - below);
    }

    let mut bin_edges = Vec::with_capacity(num_bins + 1);
    bin_edges.push(0.0);
    for j in 1..num_bins {
        bin_edges.push(analytic.quantile(j as f64 / num_bins as f64));
    }
    let last_quantile = *bin_edges.last().expect("edges are non-empty");
    let max_sample = *samples.last().expect("samples are non-empty");
    bin_edges.push(if max_sample > last_quantile {
        max_sample
    } else {
        last_quantile * (1.0 + 1e-9) + f64::MIN_POSITIVE
    });

    let mut counts = vec![0usize; num_bins];
    let mut bin = 0;
    for &x in &samples {
        while bin + 1 < num_bins && x >= bin_edges[bin + 1] {
            bin += 1;
        }
        counts[bin] += 1;
    }
    let mut heights = Vec::with_capacity(num_bins);
    let mut grid = Vec::with_capacity(num_bins);
    let mut analytic_density = Vec::with_capacity(num_bins);
    for (j, &count) in counts.iter().enumerate() {
        let (lo, hi) = (bin_edges[j], bin_edges[j + 1]);
        heights.push(count as f64 / (total_count as f64 * (hi - lo)));
        let mid = 0.5 * (lo + hi);
        grid.push(mid);
        analytic_density.push((analytic.pdf)(mid));
    }

    Ok(DensityComparison {
        quantity,
        bin_edges,
        heights,
        grid,
        analytic_density,
        sup_cdf_distance: sup,
        atom_count,
        continuous_count,
        total_count,
    })
}
