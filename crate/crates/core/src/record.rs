//! Computed-packet records and whole simulation traces.

use thiserror::Error;

use crate::simulator::QueuePolicy;
use crate::Params;

/// Absolute tolerance for the identities checked across a trace.
pub const TRACE_TOLERANCE: f64 = 1e-9;

/// One packet that made it through the computing stage.
///
/// Absolute timestamps and the derived intervals are both stored so that
/// trace identities can be checked without re-deriving anything. `y` and `z`
/// are `None` for the first computed packet.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputedPacketRecord {
    k: u64,
    gen_time: f64,
    transmit_done: f64,
    compute_done: f64,
    x: f64,
    y: Option<f64>,
    z: Option<f64>,
    w: f64,
    s: f64,
    t_sys: f64,
    warmup: bool,
}

impl ComputedPacketRecord {
    /// Builds the `k`-th record. `compute_done` is derived as
    /// `transmit_done + (w + s)`.
    pub fn new(
        k: u64,
        gen_time: f64,
        transmit_done: f64,
        w: f64,
        s: f64,
        prev: Option<&ComputedPacketRecord>,
        warmup: bool,
    ) -> Self {
        let t_sys = w + s;
        let compute_done = transmit_done + t_sys;
        Self {
            k,
            gen_time,
            transmit_done,
            compute_done,
            x: transmit_done - gen_time,
            y: prev.map(|p| transmit_done - p.transmit_done),
            z: prev.map(|p| compute_done - p.compute_done),
            w,
            s,
            t_sys,
            warmup,
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }
    pub fn gen_time(&self) -> f64 {
        self.gen_time
    }
    pub fn transmit_done(&self) -> f64 {
        self.transmit_done
    }
    pub fn compute_done(&self) -> f64 {
        self.compute_done
    }
    /// Transmission time.
    pub fn x(&self) -> f64 {
        self.x
    }
    /// Gap between this and the previous transmission completion.
    pub fn y(&self) -> Option<f64> {
        self.y
    }
    /// Gap between this and the previous compute completion.
    pub fn z(&self) -> Option<f64> {
        self.z
    }
    /// Waiting time in the computing stage.
    pub fn w(&self) -> f64 {
        self.w
    }
    /// Service time.
    pub fn s(&self) -> f64 {
        self.s
    }
    /// System time in the computing stage, `w + s`.
    pub fn t_sys(&self) -> f64 {
        self.t_sys
    }
    pub fn is_warmup(&self) -> bool {
        self.warmup
    }

    /// Age right after this packet is delivered.
    pub fn age_at_delivery(&self) -> f64 {
        self.x + self.t_sys
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceViolation {
    #[error("record {k}: timestamps not strictly ordered")]
    Ordering { k: u64 },
    #[error("record {k}: generation time does not increase")]
    Freshness { k: u64 },
    #[error("record {k}: compute completion does not increase")]
    Departure { k: u64 },
    #[error("record {k}: waiting-time recursion off by {residual:e}")]
    Recursion { k: u64, residual: f64 },
    #[error("record {k}: waited {w} beyond the predecessor's system time {prev_t_sys}")]
    Wait { k: u64, w: f64, prev_t_sys: f64 },
}

/// Output of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub params: Params,
    pub policy: QueuePolicy,
    pub records: Vec<ComputedPacketRecord>,
    /// Packets replaced in the buffer and never computed.
    pub discarded_count: u64,
    /// Packets whose transmission started, including the one in flight at the end.
    pub generated_count: u64,
    /// Packets transmitting, buffered or in service when the run stopped.
    pub in_flight_at_end: u64,
    /// Time of the last compute completion.
    pub total_time: f64,
    pub seed: u64,
    pub warmup_count: usize,
}

impl SimulationTrace {
    /// Records used for statistics.
    pub fn post_warmup(&self) -> &[ComputedPacketRecord] {
        &self.records[self.warmup_count.min(self.records.len())..]
    }

    /// Checks the per-record and consecutive-record identities.
    pub fn check_invariants(&self) -> Result<(), TraceViolation> {
        let mut prev: Option<&ComputedPacketRecord> = None;
        for r in &self.records {
            if !(r.gen_time < r.transmit_done && r.transmit_done < r.compute_done) {
                return Err(TraceViolation::Ordering { k: r.k });
            }
            if let Some(p) = prev {
                if r.gen_time <= p.gen_time {
                    return Err(TraceViolation::Freshness { k: r.k });
                }
                if r.compute_done <= p.compute_done {
                    return Err(TraceViolation::Departure { k: r.k });
                }
                let y = r.y.expect("records after the first carry y");
                let expected = (p.w + p.s - y).max(0.0);
                let residual = (r.w - expected).abs();
                if residual > TRACE_TOLERANCE {
                    return Err(TraceViolation::Recursion { k: r.k, residual });
                }
                if self.policy == QueuePolicy::Replacement && r.w > p.t_sys + TRACE_TOLERANCE {
                    return Err(TraceViolation::Wait {
                        k: r.k,
                        w: r.w,
                        prev_t_sys: p.t_sys,
                    });
                }
            }
            prev = Some(r);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_intervals() {
        let first = ComputedPacketRecord::new(1, 0.0, 1.0, 0.0, 2.5, None, false);
        assert_eq!(first.compute_done(), 3.5);
        assert_eq!(first.y(), None);
        assert_eq!(first.z(), None);
        let second = ComputedPacketRecord::new(2, 2.0, 3.0, 0.5, 0.5, Some(&first), false);
        assert_eq!(second.x(), 1.0);
        assert_eq!(second.y(), Some(2.0));
        assert_eq!(second.z(), Some(0.5));
        assert_eq!(second.t_sys(), 1.0);
        assert_eq!(
            second.compute_done(),
            second.transmit_done() + second.t_sys()
        );
        assert_eq!(second.age_at_delivery(), 2.0);
    }
}
