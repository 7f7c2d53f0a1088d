use aoi_core::estimators::{build_moment_report, sample_correlation, Quantity};
use aoi_core::make_params;
use aoi_core::simulator::{
    extract_moments, integrate_age, run_simulation, run_simulation_logged, write_trace_dump,
    Disposition, QueuePolicy, SimConfig,
};
use aoi_core::{analytics, AgeAccumulator};
use proptest::prelude::*;

fn config(lambda: f64, mu: f64, policy: QueuePolicy, packets: usize, seed: u64) -> SimConfig {
    SimConfig::new(make_params(lambda, mu).unwrap(), policy, packets, seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn traces_satisfy_invariants(
        lambda in 0.05f64..20.0,
        mu in 0.2f64..5.0,
        seed in any::<u64>(),
        fcfs in any::<bool>(),
    ) {
        let policy = if fcfs { QueuePolicy::Fcfs } else { QueuePolicy::Replacement };
        // Keep FCFS stable so the horizon (and float spacing) stays bounded.
        let lambda = if fcfs { lambda.min(0.9 * mu) } else { lambda };
        let trace = run_simulation(&config(lambda, mu, policy, 5_000, seed)).unwrap();
        prop_assert_eq!(trace.records.len(), 5_000);
        trace.check_invariants().map_err(|e| TestCaseError::fail(e.to_string()))?;
        if fcfs {
            prop_assert_eq!(trace.discarded_count, 0);
        }
        prop_assert_eq!(
            trace.generated_count,
            trace.records.len() as u64 + trace.discarded_count + trace.in_flight_at_end
        );
        if !fcfs {
            prop_assert!(trace.in_flight_at_end <= 2);
        }
    }

    #[test]
    fn age_resets_to_delivered_packet_age(seed in any::<u64>()) {
        let trace = run_simulation(&config(1.3, 1.0, QueuePolicy::Replacement, 300, seed).with_warmup(0)).unwrap();
        let r = &trace.records;
        let mut acc = AgeAccumulator::new(r[0].compute_done(), r[0].age_at_delivery());
        let mut last_integral = 0.0;
        for rec in &r[1..] {
            acc.reset(rec.compute_done(), rec.age_at_delivery());
            prop_assert_eq!(acc.current_age_at_reset(), rec.x() + rec.t_sys());
            prop_assert!(acc.integral() >= last_integral);
            last_integral = acc.integral();
        }
        prop_assert_eq!(acc.average().unwrap(), integrate_age(&trace).unwrap());
    }
}

#[test]
fn transmission_log_is_zero_wait_and_conserving() {
    for policy in [QueuePolicy::Replacement, QueuePolicy::Fcfs] {
        let (trace, log) = run_simulation_logged(&config(0.8, 1.0, policy, 2_000, 17)).unwrap();
        assert_eq!(log.len() as u64, trace.generated_count);
        for pair in log.windows(2) {
            assert_eq!(pair[1].gen_time, pair[0].arrival_time.unwrap());
        }
        let computed = log
            .iter()
            .filter(|e| matches!(e.disposition, Disposition::Computed(_)))
            .count();
        let replaced = log
            .iter()
            .filter(|e| e.disposition == Disposition::Replaced)
            .count();
        let in_flight = log
            .iter()
            .filter(|e| e.disposition == Disposition::InFlightAtEnd)
            .count();
        assert_eq!(computed, trace.records.len());
        assert_eq!(replaced as u64, trace.discarded_count);
        assert_eq!(in_flight as u64, trace.in_flight_at_end);
        assert!(log.last().unwrap().arrival_time.is_none());
        // Computed packets appear in generation order with consecutive k.
        let ks: Vec<u64> = log
            .iter()
            .filter_map(|e| match e.disposition {
                Disposition::Computed(k) => Some(k),
                _ => None,
            })
            .collect();
        assert!(ks.iter().zip(1..).all(|(&k, want)| k == want));
        if policy == QueuePolicy::Fcfs {
            assert_eq!(replaced, 0);
        }
    }
}

#[test]
fn identical_configs_give_identical_dumps() {
    let c = config(1.7, 1.0, QueuePolicy::Replacement, 20_000, 42);
    let dump = |c: &SimConfig| {
        let mut buf = Vec::new();
        write_trace_dump(&run_simulation(c).unwrap(), &mut buf).unwrap();
        buf
    };
    let a = dump(&c);
    assert_eq!(a, dump(&c));
    assert_ne!(
        a,
        dump(&SimConfig {
            seed: 43,
            ..c.clone()
        })
    );
}

#[test]
fn policies_share_random_numbers() {
    // Same seed: the first packet sees the same transmission and service draws.
    let a = run_simulation(&config(2.0, 1.0, QueuePolicy::Replacement, 10, 5)).unwrap();
    let b = run_simulation(&config(2.0, 1.0, QueuePolicy::Fcfs, 10, 5)).unwrap();
    assert_eq!(a.records[0], b.records[0]);
}

#[test]
fn fcfs_queue_is_uncapped_above_saturation() {
    // rho = 3: the backlog grows roughly as (lambda - mu) t and must not be truncated.
    let (trace, log) =
        run_simulation_logged(&config(3.0, 1.0, QueuePolicy::Fcfs, 5_000, 8)).unwrap();
    assert_eq!(trace.discarded_count, 0);
    assert!(
        trace.in_flight_at_end > 5_000,
        "backlog {}",
        trace.in_flight_at_end
    );
    assert!(log.iter().all(|e| e.disposition != Disposition::Replaced));
}

#[test]
fn moderate_run_tracks_closed_forms() {
    let trace = run_simulation(&config(1.0, 1.0, QueuePolicy::Replacement, 200_000, 99)).unwrap();
    let report = build_moment_report(&trace).unwrap();
    for q in Quantity::ALL {
        let e = report.get(q);
        let a = e.analytic.unwrap();
        // 4.5 half-widths of a 95% interval: a generous, seed-stable band.
        assert!(
            (e.point - a).abs() < 4.5 * e.half_width + 1e-12,
            "{q}: {} vs {a} (hw {})",
            e.point,
            e.half_width
        );
    }
    let seq = extract_moments(&trace).unwrap();
    assert!(sample_correlation(&seq.x_prev, &seq.z).unwrap().abs() < 0.02);
    let assembled = report.avg_age_assembled;
    let direct = report.avg_age_integrated;
    assert!((assembled - direct).abs() / direct < 0.02);
    assert!((direct - analytics::avg_age_replacement(&trace.params)).abs() / direct < 0.02);
}
