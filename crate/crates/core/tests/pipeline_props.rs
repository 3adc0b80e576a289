use chrono::{Days, NaiveDate};
use proptest::prelude::*;

use quantret::oscillator::ModelParams;
use quantret::pipeline::{
    bars_from_returns, compute_returns, detect_ground_level, load_bars, synthesize_market, threshold_at, write_bars,
    DetectionConfig, ReturnRecord,
};

fn records(returns: &[f64], volumes: &[f64]) -> Vec<ReturnRecord> {
    let start = NaiveDate::from_ymd_opt(2015, 6, 1).unwrap();
    returns
        .iter()
        .zip(volumes)
        .enumerate()
        .map(|(i, (&r, &volume))| ReturnRecord {
            date: start + Days::new(i as u64),
            r,
            volume,
        })
        .collect()
}

fn series() -> impl Strategy<Value = Vec<ReturnRecord>> {
    (30usize..120).prop_flat_map(|n| {
        (
            prop::collection::vec(-0.1f64..0.1, n),
            prop::collection::vec(prop_oneof![Just(0.0), 1.0f64..1e6, Just(5e5)], n),
        )
            .prop_map(|(r, v)| records(&r, &v))
    })
}

fn config(seed: u64) -> DetectionConfig {
    DetectionConfig {
        n_boot: 20,
        seed,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_follows_threshold_grid(recs in series(), seed in any::<u64>()) {
        let cfg = config(seed);
        let Ok(res) = detect_ground_level(&recs, &cfg) else {
            // only equal volumes are rejected for series this long
            prop_assert!(recs.iter().all(|r| r.volume == recs[0].volume));
            return Ok(());
        };
        for (k, step) in res.trace.iter().enumerate() {
            prop_assert_eq!(step.threshold, threshold_at(k, res.v_min, res.v_max, &cfg));
            let upper = recs.iter().filter(|r| r.volume >= step.threshold).count();
            let lower = recs.iter().filter(|r| r.volume < step.threshold).count();
            prop_assert_eq!(step.subset_size, upper);
            prop_assert_eq!(upper + lower, recs.len());
            prop_assert!(step.subset_size >= cfg.min_subset_days);
        }
        prop_assert!(res.trace.windows(2).all(|w| w[0].threshold < w[1].threshold));
        match res.e0 {
            Some(e0) => {
                let eta = res.eta.ratio().unwrap();
                prop_assert!(eta > 0.0 && eta <= 1.0);
                prop_assert_eq!(eta, e0 / res.v_max);
                prop_assert!(res.trace.last().unwrap().p_value < cfg.alpha_sig);
            }
            None => prop_assert!(res.trace.iter().all(|s| s.p_value >= cfg.alpha_sig)),
        }
    }

    #[test]
    fn bars_round_trip_preserves_returns(r in prop::collection::vec(-0.2f64..0.2, 1..60)) {
        let vols: Vec<f64> = (0..r.len()).map(|i| 1000.0 + i as f64).collect();
        let bars = bars_from_returns(&records(&r, &vols));
        let mut buf = Vec::new();
        write_bars(&mut buf, &["fixture".to_string()], &bars).unwrap();
        let loaded = load_bars(buf.as_slice()).unwrap();
        prop_assert_eq!(&loaded, &bars);
        for (rec, bar) in compute_returns(&loaded).iter().zip(&loaded) {
            prop_assert_eq!(rec.r, bar.close.ln() - bar.open.ln());
            prop_assert!((rec.r - r[rec.date.signed_duration_since(loaded[0].date).num_days() as usize]).abs() < 1e-12);
        }
    }
}

#[test]
fn detection_ignores_thread_count() {
    let p = ModelParams::harmonic(1.0, 1.0).unwrap();
    let recs = synthesize_market(&p, 0, 1, 60.0, 1200, 8).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| detect_ground_level(&recs, &config(77)).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn too_few_records() {
    let recs = records(&[0.01; 10], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]);
    assert!(detect_ground_level(&recs, &config(0)).is_err());
}

#[test]
fn first_split_already_too_small() {
    // one huge day stretches the range so the first threshold leaves a single day above it
    let mut vols = vec![1.0; 40];
    vols[7] = 1e9;
    let recs = records(&(0..40).map(|i| 0.001 * i as f64).collect::<Vec<_>>(), &vols);
    let res = detect_ground_level(&recs, &config(0)).unwrap();
    assert!(res.e0.is_none());
    assert!(res.trace.is_empty());
    assert_eq!(res.eta.to_string(), ">1");
}
