use fdepth::robust::{
    detection_experiment, mise_experiment, DetectionConfig, Estimator, MiseConfig,
};
use fdepth::sim::{ModelId, ModelSpec};
use fdepth::DepthMethod;

fn trimmed(depth: DepthMethod) -> Estimator {
    Estimator::Trimmed { depth }
}

fn config(estimators: Vec<Estimator>, n_reps: usize, seed: u64) -> MiseConfig {
    MiseConfig {
        estimators,
        ..MiseConfig::new(n_reps, seed)
    }
}

#[test]
fn standard_errors_shrink_with_replicates() {
    let models = [ModelSpec::new(ModelId::M0)];
    let ests = vec![Estimator::Mean, trimmed(DepthMethod::Linf)];
    let se = |reps| {
        let r = mise_experiment(&models, &config(ests.clone(), reps, 5)).unwrap();
        ["MEAN", "LinfD"].map(|e| r.cell(e, ModelId::M0).unwrap().se)
    };
    let (a, b, c) = (se(50), se(200), se(800));
    for k in 0..2 {
        for ratio in [a[k] / b[k], b[k] / c[k]] {
            assert!((ratio - 2.0).abs() < 0.6, "ratio {ratio}");
        }
    }
}

#[test]
fn sup_norm_trimming_resists_large_shifts() {
    let models: Vec<ModelSpec> = [ModelId::M1, ModelId::M2]
        .map(|m| ModelSpec::new(m).with_magnitude(25.0))
        .to_vec();
    let ests = vec![
        trimmed(DepthMethod::Linf),
        trimmed(DepthMethod::Bd3),
        trimmed(DepthMethod::Hrd),
        trimmed(DepthMethod::rtd(0)),
    ];
    let r = mise_experiment(&models, &config(ests, 500, 11)).unwrap();
    for m in [ModelId::M1, ModelId::M2] {
        let linf = r.cell("LinfD", m).unwrap().value;
        for other in ["BD", "HRD", "RTD"] {
            let v = r.cell(other, m).unwrap().value;
            assert!(linf < v, "{m}: LinfD {linf} vs {other} {v}");
        }
    }
}

#[test]
fn mean_is_best_under_shape_contamination() {
    let models: Vec<ModelSpec> = ModelId::SHAPE.map(ModelSpec::new).to_vec();
    let r = mise_experiment(&models, &MiseConfig::new(500, 12)).unwrap();
    for m in ModelId::SHAPE {
        let mean = r.cell("MEAN", m).unwrap();
        for row in r.rows.iter().filter(|row| row.as_str() != "MEAN") {
            let c = r.cell(row, m).unwrap();
            let tol = 2.0 * (mean.se.powi(2) + c.se.powi(2)).sqrt();
            assert!(
                mean.value <= c.value + tol,
                "{m}: MEAN {} vs {row} {}",
                mean.value,
                c.value
            );
        }
    }
}

#[test]
fn tiny_shifts_barely_move_the_error() {
    let ests = vec![
        Estimator::Mean,
        Estimator::Median,
        trimmed(DepthMethod::Linf),
        trimmed(DepthMethod::Mbd2),
    ];
    let clean = mise_experiment(
        &[ModelSpec::new(ModelId::M1).with_q(0.0)],
        &config(ests.clone(), 100, 3),
    )
    .unwrap();
    let tiny = mise_experiment(
        &[ModelSpec::new(ModelId::M1).with_magnitude(0.01)],
        &config(ests, 100, 3),
    )
    .unwrap();
    for row in &clean.rows {
        let a = clean.cell(row, ModelId::M1).unwrap();
        let b = tiny.cell(row, ModelId::M1).unwrap();
        assert!(
            (a.value - b.value).abs() < 0.1 * a.value,
            "{row}: {} vs {}",
            a.value,
            b.value
        );
    }
}

#[test]
fn enormous_outliers_are_always_detected() {
    let models: Vec<ModelSpec> = [ModelId::M1, ModelId::M2, ModelId::M3, ModelId::M4]
        .map(|m| ModelSpec::new(m).with_magnitude(1e6))
        .to_vec();
    let cfg = DetectionConfig {
        methods: vec![DepthMethod::Linf, DepthMethod::Spatd],
        ..DetectionConfig::new(100, 8)
    };
    let r = detection_experiment(&models, &cfg).unwrap();
    for c in &r.cells {
        assert_eq!(c.value, 1.0, "{} on {}", c.row, c.model);
        assert_eq!(c.se, 0.0);
    }
}

#[test]
fn reports_are_reproducible() {
    let models = [ModelSpec::new(ModelId::M3)];
    let ests = vec![
        Estimator::Median,
        trimmed(DepthMethod::rtd(0)),
        trimmed(DepthMethod::Mhrd),
    ];
    let a = mise_experiment(&models, &config(ests.clone(), 20, 1)).unwrap();
    let b = mise_experiment(&models, &config(ests.clone(), 20, 1)).unwrap();
    let c = mise_experiment(&models, &config(ests, 20, 2)).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_ne!(a.to_csv(), c.to_csv());
}
