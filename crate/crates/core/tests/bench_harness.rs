use oilpaint::bench::{
    improvement_pct, parse_csv, run_sweep, write_csv, BenchPair, BenchRecord, BenchReport, Engine,
    RecordRow, SizeSpec, SweepConfig, TimeStats,
};
use oilpaint::{FilterParams, ParallelConfig};
use proptest::prelude::*;

fn record_strategy() -> impl Strategy<Value = BenchRecord> {
    (
        prop_oneof![Just("VGA".to_string()), Just("64x48".to_string())],
        0usize..9,
        1u32..=255,
        any::<bool>(),
        proptest::collection::vec(1e-3f64..1e5, 1..6),
    )
        .prop_map(|(label, radius, levels, seq, times)| {
            let size = SizeSpec::new(label, 640, 480);
            let params = FilterParams::new(radius, levels).unwrap();
            let engine = if seq {
                Engine::Sequential
            } else {
                Engine::Parallel
            };
            BenchRecord::from_times(&size, &params, engine, times)
        })
}

proptest! {
    #[test]
    fn improvement_is_scale_invariant(t1 in 1e-3f64..1e6, t2 in 0f64..1e6, k in 1e-3f64..1e3) {
        let a = improvement_pct(t1, t2).unwrap();
        let b = improvement_pct(k * t1, k * t2).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn csv_round_trip(records in proptest::collection::vec(record_strategy(), 0..6), t in proptest::collection::vec((1e-3f64..1e5, 1e-3f64..1e5), 0..4)) {
        let pairs: Vec<_> = t.iter().enumerate()
            .map(|(i, &(t1, t2))| BenchPair::new("XGA", i, t1, t2).unwrap())
            .collect();
        let report = BenchReport { records, pairs };
        let parsed = parse_csv(&write_csv(&report)).unwrap();
        let rows: Vec<RecordRow> = report.records.iter().map(RecordRow::from).collect();
        prop_assert_eq!(parsed.records, rows);
        prop_assert_eq!(parsed.pairs.len(), report.pairs.len());
        for (p, q) in parsed.pairs.iter().zip(&report.pairs) {
            prop_assert_eq!(p.t1_ms, q.t1_ms);
            prop_assert_eq!(p.t2_ms, q.t2_ms);
            prop_assert!((p.improvement_pct - q.improvement_pct).abs() <= 5e-7);
        }
    }

    #[test]
    fn median_is_a_sample(times in proptest::collection::vec(0f64..1e4, 1..12)) {
        let s = TimeStats::of(&times);
        prop_assert!(times.contains(&s.median));
        let below = times.iter().filter(|&&t| t < s.median).count();
        let at_or_below = times.iter().filter(|&&t| t <= s.median).count();
        prop_assert!(below <= (times.len() - 1) / 2 && (times.len() - 1) / 2 < at_or_below);
    }
}

#[test]
fn sweep_order_and_csv_counts() {
    let cfg = SweepConfig {
        sizes: vec![SizeSpec::new("a", 20, 14), SizeSpec::new("b", 18, 22)],
        radii: vec![1, 2],
        reps: 2,
        parallel: ParallelConfig::with_workers(2).unwrap(),
        ..Default::default()
    };
    let report = run_sweep(&cfg).unwrap();
    assert_eq!(report.records.len(), 8);
    let order: Vec<_> = report
        .pairs
        .iter()
        .map(|p| (p.label.as_str(), p.radius))
        .collect();
    assert_eq!(order, [("a", 1), ("a", 2), ("b", 1), ("b", 2)]);
    for r in &report.records {
        assert_eq!(r.times_ms.len(), 2);
        assert_eq!(r.reps, 2);
        assert!(r.min_ms <= r.median_ms && r.median_ms <= r.max_ms);
    }
    let text = String::from_utf8(write_csv(&report)).unwrap();
    assert_eq!(text.lines().count(), 1 + 8 + 1 + 1 + 4);
    let parsed = parse_csv(text.as_bytes()).unwrap();
    assert_eq!(parsed.records.len(), 8);
    assert_eq!(parsed.pairs.len(), 4);
}
