use mwt_core::harness::{
    dkw_bound, ks_distance, run_experiment, run_experiment_with, summary_path, ExperimentConfig,
    HarnessError, Scale, CSV_HEADER,
};
use mwt_core::limits::LimitLaw;
use mwt_core::model::{ModelError, SimBudget};

#[test]
fn single_replicate_is_deterministic() {
    let c = ExperimentConfig::new(100, 1e-3, 2, 1, 42);
    let a = run_experiment(&c).unwrap();
    let b = run_experiment_with(&c, Some(1)).unwrap();
    assert_eq!(a.records, b.records);
    assert_eq!(a.distribution.samples().len(), 1);
    assert_eq!(a.summary.n_samples, 1);
}

#[test]
fn m1_scaled_sample_is_unit_exponential() {
    let mut c = ExperimentConfig::new(100, 0.01, 1, 10_000, 7);
    c.comparison = Some(LimitLaw::Exponential { rate: 1.0 });
    let out = run_experiment(&c).unwrap();
    assert!((out.summary.scale_factor - 1.0).abs() < 1e-12);
    let ks = out.summary.ks.unwrap();
    assert_eq!(
        ks,
        ks_distance(&out.distribution, &LimitLaw::Exponential { rate: 1.0 })
    );
    assert!(ks <= dkw_bound(10_000, 0.01).unwrap(), "ks {ks}");
    // Negative control.
    assert!(ks_distance(&out.distribution, &LimitLaw::Gamma { shape: 2 }) > 0.1);
}

#[test]
fn files_are_written_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub").join("run.csv");
    let mut c = ExperimentConfig::new(50, 1e-3, 2, 200, 9);
    c.output_path = Some(path.clone());
    let out = run_experiment_with(&c, Some(2)).unwrap();
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 200);
    let summary_file = summary_path(&path);
    assert_eq!(
        summary_file,
        dir.path().join("sub").join("run.summary.json")
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary_file).unwrap()).unwrap();
    for key in [
        "config",
        "regime",
        "n_samples",
        "ks",
        "dkw_99",
        "quantiles",
        "scale_factor",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["regime"]["kind"], "SmallMuExp");
    assert_eq!(json["quantiles"].as_array().unwrap().len(), 7);
    assert_eq!(json["n_samples"], out.summary.n_samples);

    let first = std::fs::read(&path).unwrap();
    let first_summary = std::fs::read(&summary_file).unwrap();
    run_experiment_with(&c, Some(1)).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);
    assert_eq!(std::fs::read(&summary_file).unwrap(), first_summary);
}

#[test]
fn records_keep_raw_and_scaled_tau() {
    let mut c = ExperimentConfig::new(30, 0.02, 1, 50, 3);
    c.scale = Scale::Explicit(2.0);
    let out = run_experiment(&c).unwrap();
    for (i, r) in out.records.iter().enumerate() {
        assert_eq!(r.replicate_index, i as u64);
        assert_eq!(r.scaled_tau, 2.0 * r.raw_tau);
        assert_eq!(r.events, 1);
    }
    assert_eq!(out.summary.scale_factor, 2.0);
}

#[test]
fn truncation_cap_is_enforced() {
    let mut c = ExperimentConfig::new(1000, 1e-7, 3, 20, 5);
    c.budget = SimBudget::new(5, f64::INFINITY).unwrap();
    match run_experiment(&c) {
        Err(HarnessError::TruncationCap { truncated, .. }) => assert!(truncated > 0),
        other => panic!("{other:?}"),
    }
    c.truncation_cap = 1.0;
    // All truncated: nothing left for the ECDF.
    assert!(matches!(run_experiment(&c), Err(HarnessError::EmptySample)));
}

#[test]
fn truncated_replicates_are_counted_not_sampled() {
    let mut c = ExperimentConfig::new(100, 0.01, 1, 2_000, 11);
    c.budget = SimBudget::new(10, 0.5).unwrap();
    c.truncation_cap = 1.0;
    let out = run_experiment(&c).unwrap();
    let d = &out.distribution;
    assert!(d.truncated_count() > 0);
    assert_eq!(d.count(), 2_000);
    assert_eq!(d.samples().len() as u64 + d.truncated_count(), 2_000);
    assert!(d.samples().iter().all(|&t| t <= 0.5));
    assert!((out.summary.truncation_fraction - d.truncated_count() as f64 / 2000.0).abs() < 1e-15);
}

#[test]
fn invalid_configs_and_stalls() {
    assert!(matches!(
        run_experiment(&ExperimentConfig::new(100, 0.01, 1, 0, 1)),
        Err(HarnessError::InvalidConfig(_))
    ));
    let mut c = ExperimentConfig::new(100, 0.01, 1, 10, 1);
    c.scale = Scale::Explicit(-1.0);
    assert!(run_experiment(&c).is_err());
    assert!(matches!(
        run_experiment(&ExperimentConfig::new(100, 0.0, 2, 10, 1)),
        Err(HarnessError::Model(ModelError::Stalled { .. }))
    ));
    // Band wide enough to overlap two borders.
    let mut c = ExperimentConfig::new(10, 10f64.powf(-7.0 / 6.0), 3, 10, 1);
    c.band = 0.9;
    assert!(matches!(run_experiment(&c), Err(HarnessError::Limits(_))));
}
