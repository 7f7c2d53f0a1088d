//! Event-driven simulation of the transmission and computing stages.
//!
//! The source is zero-wait: packet `i` is generated the instant packet
//! `i - 1` finishes transmission, so the channel is always busy and edge
//! arrivals form a renewal process with exponential gaps. The edge server
//! is non-preemptive. Under [`QueuePolicy::Replacement`] at most one packet
//! waits and a newer arrival displaces it; under [`QueuePolicy::Fcfs`] all
//! packets queue in arrival order.

pub mod dump;
pub mod rng;
pub mod sample_path;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::params::ParamError;
use crate::record::{ComputedPacketRecord, SimulationTrace};
use crate::Params;

pub use dump::write_trace_dump;
pub use rng::Stage;
pub use sample_path::{age_segments, extract_moments, integrate_age, RawSequences};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueuePolicy {
    /// One-packet buffer, newest arrival wins.
    Replacement,
    /// Unbounded buffer served in arrival order; nothing is discarded.
    Fcfs,
}

impl QueuePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            QueuePolicy::Replacement => "replacement",
            QueuePolicy::Fcfs => "fcfs",
        }
    }
}

impl fmt::Display for QueuePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QueuePolicy {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "replacement" => Ok(QueuePolicy::Replacement),
            "fcfs" => Ok(QueuePolicy::Fcfs),
            other => Err(ParamError::Invalid(format!(
                "unknown queue policy `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("{stage:?} override sequence exhausted after {used} draws")]
    SamplerExhausted { stage: Stage, used: usize },
    #[error("insufficient data: need at least {needed} post-warmup records, have {got}")]
    InsufficientData { needed: usize, got: usize },
}

/// Deterministic duration sequences replacing the exponential draws.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerOverride {
    pub transmission: Vec<f64>,
    pub service: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: Params,
    pub policy: QueuePolicy,
    /// The run stops after this many compute completions.
    pub target_computed_packets: usize,
    /// Leading records flagged as warmup and excluded from statistics.
    pub warmup_computed_packets: usize,
    pub seed: u64,
    pub sampler_override: Option<SamplerOverride>,
}

/// Default warmup share of the target record count.
pub const DEFAULT_WARMUP_FRACTION: f64 = 0.01;

impl SimConfig {
    /// Exponential run with the default 1% warmup.
    pub fn new(
        params: Params,
        policy: QueuePolicy,
        target_computed_packets: usize,
        seed: u64,
    ) -> Self {
        Self {
            params,
            policy,
            target_computed_packets,
            warmup_computed_packets: warmup_for(target_computed_packets, DEFAULT_WARMUP_FRACTION),
            seed,
            sampler_override: None,
        }
    }

    pub fn with_warmup(mut self, warmup: usize) -> Self {
        self.warmup_computed_packets = warmup;
        self
    }

    pub fn with_warmup_fraction(mut self, fraction: f64) -> Self {
        self.warmup_computed_packets = warmup_for(self.target_computed_packets, fraction);
        self
    }

    pub fn with_override(mut self, transmission: Vec<f64>, service: Vec<f64>) -> Self {
        self.sampler_override = Some(SamplerOverride {
            transmission,
            service,
        });
        self
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.target_computed_packets == 0 {
            return Err(ParamError::Invalid(
                "target_computed_packets must be positive".into(),
            ));
        }
        if self.warmup_computed_packets >= self.target_computed_packets {
            return Err(ParamError::Invalid(format!(
                "warmup ({}) must be below the target ({})",
                self.warmup_computed_packets, self.target_computed_packets
            )));
        }
        if let Some(o) = &self.sampler_override {
            let bad = o
                .transmission
                .iter()
                .chain(&o.service)
                .find(|d| !(d.is_finite() && **d > 0.0));
            if let Some(d) = bad {
                return Err(ParamError::Invalid(format!(
                    "override durations must be positive, got {d}"
                )));
            }
        }
        Ok(())
    }
}

fn warmup_for(target: usize, fraction: f64) -> usize {
    (target as f64 * fraction.clamp(0.0, 1.0)).floor() as usize
}

enum Durations<'a> {
    Exponential {
        rng: Box<ChaCha8Rng>,
        rate: f64,
    },
    Fixed {
        seq: &'a [f64],
        pos: usize,
        stage: Stage,
    },
}

impl Durations<'_> {
    fn next(&mut self) -> Result<f64, SimError> {
        match self {
            Durations::Exponential { rng, rate } => Ok(rng::sample_exp(rng, *rate)),
            Durations::Fixed { seq, pos, stage } => {
                let d = seq.get(*pos).copied().ok_or(SimError::SamplerExhausted {
                    stage: *stage,
                    used: *pos,
                })?;
                *pos += 1;
                Ok(d)
            }
        }
    }
}

/// What happened to one generated packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disposition {
    /// Delivered as the `k`-th computed packet.
    Computed(u64),
    Replaced,
    InFlightAtEnd,
}

/// Per-packet transmission history, collected on request.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionEntry {
    pub gen_time: f64,
    /// `None` if the run ended during this packet's transmission.
    pub arrival_time: Option<f64>,
    pub disposition: Disposition,
}

#[derive(Debug, Clone, Copy)]
struct Waiting {
    id: usize,
    gen_time: f64,
    arrival: f64,
}

#[derive(Debug, Clone, Copy)]
struct InService {
    packet: Waiting,
    w: f64,
    s: f64,
    done: f64,
}

enum Buffer {
    Single(Option<Waiting>),
    Queue(VecDeque<Waiting>),
}

impl Buffer {
    fn len(&self) -> usize {
        match self {
            Buffer::Single(slot) => usize::from(slot.is_some()),
            Buffer::Queue(q) => q.len(),
        }
    }

    fn take_next(&mut self) -> Option<Waiting> {
        match self {
            Buffer::Single(slot) => slot.take(),
            Buffer::Queue(q) => q.pop_front(),
        }
    }

    /// Stores an arrival; returns the packet it displaced, if any.
    fn offer(&mut self, p: Waiting) -> Option<Waiting> {
        match self {
            Buffer::Single(slot) => slot.replace(p),
            Buffer::Queue(q) => {
                q.push_back(p);
                None
            }
        }
    }

    fn iter(&self) -> Box<dyn Iterator<Item = &Waiting> + '_> {
        match self {
            Buffer::Single(slot) => Box::new(slot.iter()),
            Buffer::Queue(q) => Box::new(q.iter()),
        }
    }
}

/// Runs the pipeline until `target_computed_packets` compute completions.
///
/// Deterministic in `config`. When a service completion and an arrival
/// coincide, the completion is handled first.
pub fn run_simulation(config: &SimConfig) -> Result<SimulationTrace, SimError> {
    simulate(config, false).map(|(trace, _)| trace)
}

/// [`run_simulation`] that also returns the fate of every generated packet.
pub fn run_simulation_logged(
    config: &SimConfig,
) -> Result<(SimulationTrace, Vec<TransmissionEntry>), SimError> {
    simulate(config, true).map(|(trace, log)| (trace, log.unwrap_or_default()))
}

fn simulate(
    config: &SimConfig,
    keep_log: bool,
) -> Result<(SimulationTrace, Option<Vec<TransmissionEntry>>), SimError> {
    config.validate()?;
    let params = config.params;
    let (mut transmit, mut service) = match &config.sampler_override {
        Some(o) => (
            Durations::Fixed {
                seq: &o.transmission,
                pos: 0,
                stage: Stage::Transmission,
            },
            Durations::Fixed {
                seq: &o.service,
                pos: 0,
                stage: Stage::Service,
            },
        ),
        None => (
            Durations::Exponential {
                rng: Box::new(rng::substream(config.seed, Stage::Transmission)),
                rate: params.lambda(),
            },
            Durations::Exponential {
                rng: Box::new(rng::substream(config.seed, Stage::Service)),
                rate: params.mu(),
            },
        ),
    };
    let target = config.target_computed_packets;
    let mut log: Option<Vec<TransmissionEntry>> = keep_log.then(Vec::new);
    let mut buffer = match config.policy {
        QueuePolicy::Replacement => Buffer::Single(None),
        QueuePolicy::Fcfs => Buffer::Queue(VecDeque::new()),
    };
    let mut records: Vec<ComputedPacketRecord> = Vec::with_capacity(target);
    let mut server: Option<InService> = None;
    let mut discarded = 0u64;

    // Packet currently on the channel.
    let mut in_transit = Waiting {
        id: 0,
        gen_time: 0.0,
        arrival: transmit.next()?,
    };
    let mut generated = 1u64;
    if let Some(log) = log.as_mut() {
        log.push(TransmissionEntry {
            gen_time: 0.0,
            arrival_time: None,
            disposition: Disposition::InFlightAtEnd,
        });
    }

    loop {
        match server {
            Some(busy) if busy.done <= in_transit.arrival => {
                let k = records.len() as u64 + 1;
                let record = ComputedPacketRecord::new(
                    k,
                    busy.packet.gen_time,
                    busy.packet.arrival,
                    busy.w,
                    busy.s,
                    records.last(),
                    records.len() < config.warmup_computed_packets,
                );
                let now = record.compute_done();
                if let Some(log) = log.as_mut() {
                    log[busy.packet.id].disposition = Disposition::Computed(k);
                }
                records.push(record);
                server = None;
                if records.len() == target {
                    break;
                }
                if let Some(next) = buffer.take_next() {
                    let w = now - next.arrival;
                    let s = service.next()?;
                    server = Some(InService {
                        packet: next,
                        w,
                        s,
                        done: next.arrival + (w + s),
                    });
                }
            }
            _ => {
                let arrived = in_transit;
                if let Some(log) = log.as_mut() {
                    log[arrived.id].arrival_time = Some(arrived.arrival);
                }
                if server.is_none() {
                    let s = service.next()?;
                    server = Some(InService {
                        packet: arrived,
                        w: 0.0,
                        s,
                        done: arrived.arrival + (0.0 + s),
                    });
                } else if let Some(old) = buffer.offer(arrived) {
                    discarded += 1;
                    if let Some(log) = log.as_mut() {
                        log[old.id].disposition = Disposition::Replaced;
                    }
                }
                let gen_time = arrived.arrival;
                in_transit = Waiting {
                    id: generated as usize,
                    gen_time,
                    arrival: gen_time + transmit.next()?,
                };
                generated += 1;
                if let Some(log) = log.as_mut() {
                    log.push(TransmissionEntry {
                        gen_time,
                        arrival_time: None,
                        disposition: Disposition::InFlightAtEnd,
                    });
                }
            }
        }
    }

    // Whatever is still buffered or in service at the end stays in flight.
    let in_flight = 1 + buffer.len() as u64 + u64::from(server.is_some());
    if let Some(log) = log.as_mut() {
        for p in buffer.iter().chain(server.as_ref().map(|s| &s.packet)) {
            log[p.id].disposition = Disposition::InFlightAtEnd;
        }
    }
    let total_time = records.last().map_or(0.0, |r| r.compute_done());
    let trace = SimulationTrace {
        params,
        policy: config.policy,
        records,
        discarded_count: discarded,
        generated_count: generated,
        in_flight_at_end: in_flight,
        total_time,
        seed: config.seed,
        warmup_count: config.warmup_computed_packets,
    };
    Ok((trace, log))
}
