use bipolar_svc::codec::{ChannelKind, SparseCodeParams};
use bipolar_svc::sim::{
    compare_matrices, compare_methods, run_bler, run_bler_with_matrix, MatrixSource, PointResult,
    SimConfig, SimResult, StopRule,
};
use bipolar_svc::{construct, ConstructionSpec, Method};

fn config(method: Method, channel: ChannelKind, snrs: &[f64], trials: u32) -> SimConfig {
    let params = SparseCodeParams::new(8, 2, 24, 15).unwrap();
    let mut c = SimConfig::new(
        params,
        MatrixSource::Construct(ConstructionSpec::new(method, 15, 24, 1)),
        channel,
    );
    c.snr_grid_db = snrs.to_vec();
    c.trials_per_point = trials;
    c.master_seed = 21;
    c.stop_rule = StopRule::DISABLED;
    c
}

/// Everything except wall-clock time.
fn counts(r: &SimResult) -> Vec<(f64, u64, u64)> {
    r.points
        .iter()
        .map(|p| (p.snr_db, p.trials, p.errors))
        .collect()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    for channel in [ChannelKind::Awgn, ChannelKind::Rayleigh] {
        let cfg = config(Method::Bernoulli, channel, &[0.0, 4.0], 2_500);
        let one = in_pool(1, || run_bler(&cfg).unwrap());
        let eight = in_pool(8, || run_bler(&cfg).unwrap());
        assert_eq!(counts(&one), counts(&eight));
        assert_eq!(one.rows(), eight.rows());
    }
}

#[test]
fn stopping_early_agrees_with_the_full_run() {
    let mut cfg = config(
        Method::Bernoulli,
        ChannelKind::Awgn,
        &[0.0, 2.0, 4.0],
        20_000,
    );
    let full = run_bler(&cfg).unwrap();
    cfg.stop_rule = StopRule {
        min_errors: Some(200),
    };
    let early = run_bler(&cfg).unwrap();
    for (f, e) in full.points.iter().zip(&early.points) {
        assert!(e.trials % 1000 == 0 && e.trials <= f.trials);
        assert!(e.errors >= 200 || e.trials == f.trials);
        // the early run is a prefix of the full one; allow a 99.9% sampling band
        let half = 3.29 * (f.bler * (1.0 - f.bler) / e.trials as f64).sqrt();
        assert!((e.bler - f.bler).abs() <= half, "{f:?} vs {e:?}");
    }
    // 0 dB has plenty of errors, so it stops well before the cap
    assert!(early.points[0].trials < full.points[0].trials);
}

#[test]
fn awgn_bler_does_not_increase_with_snr() {
    let cfg = config(
        Method::Bernoulli,
        ChannelKind::Awgn,
        &[-4.0, -2.0, 0.0, 2.0, 4.0, 6.0],
        3_000,
    );
    let results = compare_methods(&cfg, &Method::ALL).unwrap();
    for r in &results {
        for w in r.points.windows(2) {
            let (lo, hi): (&PointResult, &PointResult) = (&w[0], &w[1]);
            assert!(
                hi.bler <= lo.bler || hi.ci_lo <= lo.ci_hi,
                "{} {:?}",
                r.label,
                r.points
            );
        }
    }
}

#[test]
fn the_same_matrix_twice_gives_identical_columns() {
    let cfg = config(Method::Oca, ChannelKind::Rayleigh, &[5.0, 10.0], 2_000);
    let c = construct(&ConstructionSpec::new(Method::Pm, 15, 24, 9)).unwrap();
    let r = compare_matrices(&cfg, &[("a".into(), c.clone()), ("b".into(), c)]).unwrap();
    assert_eq!(counts(&r[0]), counts(&r[1]));
}

#[test]
fn single_method_comparison_equals_run_bler() {
    let cfg = config(Method::Cbm, ChannelKind::Awgn, &[0.0, 3.0], 2_000);
    let single = run_bler(&cfg).unwrap();
    let compared = compare_methods(&cfg, &[Method::Cbm]).unwrap();
    assert_eq!(compared.len(), 1);
    assert_eq!(counts(&single), counts(&compared[0]));
    assert_eq!(single.label, "cbm");
}

#[test]
fn noiseless_points_and_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let c = construct(&ConstructionSpec::new(Method::Oca, 15, 24, 0)).unwrap();
    let path = dir.path().join("oca.json");
    bipolar_svc::matrix_file::write(&path, &c).unwrap();
    let mut cfg = config(Method::Oca, ChannelKind::Awgn, &[f64::INFINITY], 1_000);
    cfg.matrix = MatrixSource::File(path);
    let from_file = run_bler(&cfg).unwrap();
    assert_eq!(from_file.label, "oca");
    assert_eq!(from_file.points[0].errors, 0);
    let direct = run_bler_with_matrix(&cfg, &c, "oca").unwrap();
    assert_eq!(counts(&from_file), counts(&direct));
}

#[test]
fn mismatched_or_invalid_configs_are_rejected() {
    let cfg = config(Method::Oca, ChannelKind::Awgn, &[0.0], 100);
    let wrong = construct(&ConstructionSpec::new(Method::Oca, 14, 24, 0)).unwrap();
    assert!(run_bler_with_matrix(&cfg, &wrong, "x").is_err());
    let mut bad = cfg.clone();
    bad.trials_per_point = 0;
    assert!(run_bler(&bad).is_err());
    let mut bad = cfg;
    bad.snr_grid_db.clear();
    assert!(run_bler(&bad).is_err());
}
