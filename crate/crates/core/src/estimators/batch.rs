use super::EstimateError;

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchEstimate {
    pub mean: f64,
    /// Half-width of the normal-approximation 95% interval.
    pub half_width: f64,
}

fn check_len(len: usize, num_batches: usize) -> Result<usize, EstimateError> {
    if num_batches < 10 {
        return Err(EstimateError::Param(format!(
            "need at least 10 batches, got {num_batches}"
        )));
    }
    let needed = 10 * num_batches;
    if len < needed {
        return Err(EstimateError::InsufficientData { needed, got: len });
    }
    Ok(len / num_batches)
}

fn half_width(batch_values: &[f64], center: f64) -> f64 {
    let b = batch_values.len() as f64;
    let var = batch_values
        .iter()
        .map(|v| (v - center).powi(2))
        .sum::<f64>()
        / (b - 1.0);
    Z_95 * (var / b).sqrt()
}

/// Batch-means interval for the mean of a stationary, possibly
/// autocorrelated series.
///
/// The series is cut into `num_batches` contiguous batches of equal size
/// `len / num_batches`; a remainder at the end is dropped. The point
/// estimate is the mean of the batch means.
pub fn batch_means_ci(series: &[f64], num_batches: usize) -> Result<BatchEstimate, EstimateError> {
    let size = check_len(series.len(), num_batches)?;
    let means: Vec<f64> = series
        .chunks_exact(size)
        .take(num_batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let mean = means.iter().sum::<f64>() / num_batches as f64;
    Ok(BatchEstimate {
        mean,
        half_width: half_width(&means, mean),
    })
}

/// Batch-means interval for a ratio of sums such as a time average
/// `sum(area) / sum(duration)`. The point estimate is the overall ratio; the
/// half-width comes from the spread of the per-batch ratios.
pub fn ratio_batch_means_ci(
    numer: &[f64],
    denom: &[f64],
    num_batches: usize,
) -> Result<BatchEstimate, EstimateError> {
    assert_eq!(numer.len(), denom.len(), "ratio series must be aligned");
    let size = check_len(numer.len(), num_batches)?;
    let ratios: Vec<f64> = numer
        .chunks_exact(size)
        .zip(denom.chunks_exact(size))
        .take(num_batches)
        .map(|(n, d)| n.iter().sum::<f64>() / d.iter().sum::<f64>())
        .collect();
    let mean = numer.iter().sum::<f64>() / denom.iter().sum::<f64>();
    Ok(BatchEstimate {
        mean,
        half_width: half_width(&ratios, mean),
    })
}

/// Pearson correlation of two aligned series.
pub fn sample_correlation(a: &[f64], b: &[f64]) -> Result<f64, EstimateError> {
    assert_eq!(a.len(), b.len(), "correlated series must be aligned");
    if a.len() < 3 {
        return Err(EstimateError::InsufficientData {
            needed: 3,
            got: a.len(),
        });
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    Ok(sab / (saa * sbb).sqrt())
}
