//! Time-averaged age of a trace and the per-record sequences behind the
//! moment estimates.

use crate::age::AgeAccumulator;
use crate::record::{ComputedPacketRecord, SimulationTrace};

use super::SimError;

fn usable(trace: &SimulationTrace) -> Result<&[ComputedPacketRecord], SimError> {
    let records = trace.post_warmup();
    if records.len() < 2 {
        return Err(SimError::InsufficientData {
            needed: 2,
            got: records.len(),
        });
    }
    Ok(records)
}

/// `(area, duration)` of every inter-delivery segment of the sawtooth over
/// the post-warmup window.
pub fn age_segments(trace: &SimulationTrace) -> Result<Vec<(f64, f64)>, SimError> {
    let records = usable(trace)?;
    Ok(records
        .windows(2)
        .map(|pair| {
            let duration = pair[1].compute_done() - pair[0].compute_done();
            (
                AgeAccumulator::segment_area(pair[0].age_at_delivery(), duration),
                duration,
            )
        })
        .collect())
}

/// Time-averaged age over `[first post-warmup delivery, last delivery]`.
///
/// The partial segment after the final delivery is not integrated.
pub fn integrate_age(trace: &SimulationTrace) -> Result<f64, SimError> {
    let records = usable(trace)?;
    let first = &records[0];
    let mut acc = AgeAccumulator::new(first.compute_done(), first.age_at_delivery());
    for r in &records[1..] {
        acc.reset(r.compute_done(), r.age_at_delivery());
    }
    acc.average().ok_or(SimError::InsufficientData {
        needed: 2,
        got: records.len(),
    })
}

/// Raw per-record sequences over the post-warmup records.
///
/// Per-record sequences (`x`, `t_sys`, `w`, `s`) have one entry per record.
/// Paired sequences have one entry per consecutive pair `(k-1, k)`, i.e.
/// `len - 1` entries: `y[i]`, `z[i]`, `ty[i] = T_k Y_k`,
/// `wplus_y[i] = (W_{k-1} + S_{k-1} - Y_k)^+ Y_k`, and `x_prev[i] = X_{k-1}`
/// aligned with `z[i]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawSequences {
    pub x: Vec<f64>,
    pub t_sys: Vec<f64>,
    pub w: Vec<f64>,
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub y_sq: Vec<f64>,
    pub ty: Vec<f64>,
    pub wplus_y: Vec<f64>,
    pub x_prev: Vec<f64>,
}

pub fn extract_moments(trace: &SimulationTrace) -> Result<RawSequences, SimError> {
    let records = usable(trace)?;
    let n = records.len();
    let mut out = RawSequences {
        x: Vec::with_capacity(n),
        t_sys: Vec::with_capacity(n),
        w: Vec::with_capacity(n),
        s: Vec::with_capacity(n),
        y: Vec::with_capacity(n - 1),
        z: Vec::with_capacity(n - 1),
        y_sq: Vec::with_capacity(n - 1),
        ty: Vec::with_capacity(n - 1),
        wplus_y: Vec::with_capacity(n - 1),
        x_prev: Vec::with_capacity(n - 1),
    };
    for r in records {
        out.x.push(r.x());
        out.t_sys.push(r.t_sys());
        out.w.push(r.w());
        out.s.push(r.s());
    }
    for pair in records.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        let y = cur.y().expect("paired record has a predecessor");
        let z = cur.z().expect("paired record has a predecessor");
        out.y.push(y);
        out.z.push(z);
        out.y_sq.push(y * y);
        out.ty.push(cur.t_sys() * y);
        out.wplus_y.push((prev.w() + prev.s() - y).max(0.0) * y);
        out.x_prev.push(prev.x());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::make_params;
    use crate::simulator::{run_simulation, QueuePolicy, SimConfig};

    fn hand_trace() -> SimulationTrace {
        let config = SimConfig::new(
            make_params(1.0, 1.0).unwrap(),
            QueuePolicy::Replacement,
            2,
            0,
        )
        .with_warmup(0)
        .with_override(vec![1.0; 8], vec![2.5, 0.5]);
        run_simulation(&config).unwrap()
    }

    #[test]
    fn hand_trace_age() {
        let trace = hand_trace();
        assert_eq!(integrate_age(&trace).unwrap(), 3.75);
        assert_eq!(age_segments(&trace).unwrap(), vec![(1.875, 0.5)]);
    }

    #[test]
    fn hand_trace_sequences() {
        let seq = extract_moments(&hand_trace()).unwrap();
        assert_eq!(seq.x, vec![1.0, 1.0]);
        assert_eq!(seq.y, vec![2.0]);
        assert_eq!(seq.z, vec![0.5]);
        assert_eq!(seq.ty, vec![2.0]);
        assert_eq!(seq.wplus_y, vec![1.0]);
        assert_eq!(seq.x_prev, vec![1.0]);
    }

    #[test]
    fn needs_two_records() {
        let config = SimConfig::new(
            make_params(1.0, 1.0).unwrap(),
            QueuePolicy::Replacement,
            3,
            0,
        )
        .with_warmup(2);
        let trace = run_simulation(&config).unwrap();
        assert!(matches!(
            integrate_age(&trace),
            Err(SimError::InsufficientData { got: 1, .. })
        ));
        assert!(extract_moments(&trace).is_err());
    }

    #[test]
    fn pairing_lengths() {
        let config = SimConfig::new(
            make_params(0.7, 1.0).unwrap(),
            QueuePolicy::Replacement,
            1000,
            9,
        );
        let trace = run_simulation(&config).unwrap();
        let n = trace.post_warmup().len();
        let seq = extract_moments(&trace).unwrap();
        assert_eq!(seq.x.len(), n);
        for paired in [
            &seq.y,
            &seq.z,
            &seq.ty,
            &seq.wplus_y,
            &seq.x_prev,
            &seq.y_sq,
        ] {
            assert_eq!(paired.len(), n - 1);
        }
    }

    #[test]
    fn idle_regime_never_waits() {
        // Lambda far below mu: almost every packet finds the server idle.
        let config = SimConfig::new(
            make_params(1e-4, 1.0).unwrap(),
            QueuePolicy::Replacement,
            2000,
            5,
        );
        let seq = extract_moments(&run_simulation(&config).unwrap()).unwrap();
        let waited = seq.w.iter().filter(|&&w| w != 0.0).count();
        assert!(waited <= 2, "{waited} packets waited");
    }
}
