use fdepth::io::load_dataset;
use fdepth::lightcurve::{
    fold, preprocess, read_manifest, smooth, synth_lightcurves, write_manifest, CurveKind,
    LcConfig, NaturalSplineBasis, RawLightCurve, SynthSpec,
};
use fdepth::{compute_depth, count_ranks, DepthMethod, Grid};
use tempfile::TempDir;

fn raw_stars(n: usize, seed: u64) -> Vec<RawLightCurve> {
    synth_lightcurves(n, &SynthSpec::default(), seed)
        .unwrap()
        .raw(150, 0.02, seed + 1)
        .unwrap()
}

#[test]
fn pipeline_rows_are_centred_and_start_at_the_minimum() {
    let ds = preprocess(&raw_stars(30, 1), LcConfig::default()).unwrap();
    assert_eq!(ds.p(), 100);
    for row in ds.rows() {
        assert!((row.iter().sum::<f64>() / row.len() as f64).abs() < 1e-10);
        let min = row.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(row[0], min);
    }
}

#[test]
fn pipeline_is_deterministic_and_permutation_equivariant() {
    let stars = raw_stars(20, 2);
    let a = preprocess(&stars, LcConfig::default()).unwrap();
    let b = preprocess(&stars, LcConfig::default()).unwrap();
    assert_eq!(a.values(), b.values());
    let order: Vec<usize> = (0..stars.len()).rev().collect();
    let shuffled: Vec<RawLightCurve> = order.iter().map(|&i| stars[i].clone()).collect();
    let c = preprocess(&shuffled, LcConfig::default()).unwrap();
    for (k, &i) in order.iter().enumerate() {
        assert_eq!(c.row(k), a.row(i));
        assert_eq!(c.label(k), a.label(i));
    }
}

#[test]
fn smoothing_recovers_the_generating_curves() {
    let synth = synth_lightcurves(200, &SynthSpec::clean(), 3).unwrap();
    let stars = synth.raw(400, 0.005, 4).unwrap();
    let basis = NaturalSplineBasis::new(15).unwrap();
    let grid = Grid::phase(100).unwrap();
    for (i, (star, curve)) in stars.iter().zip(&synth.curves).enumerate() {
        let got = smooth(&fold(star).unwrap(), &basis, &grid).unwrap();
        let truth: Vec<f64> = grid.points().iter().map(|&t| curve.eval(t)).collect();
        let centre = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|x| x - m).collect::<Vec<_>>()
        };
        let (got, truth) = (centre(&got), centre(&truth));
        let rms = (got
            .iter()
            .zip(&truth)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            / got.len() as f64)
            .sqrt();
        let scale = truth.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(rms < 0.1 * scale, "star {i}: rms {rms} scale {scale}");
    }
}

#[test]
fn manifest_round_trip_feeds_the_pipeline() {
    let stars = raw_stars(12, 5);
    let dir = TempDir::new().unwrap();
    let manifest = write_manifest(&stars, dir.path()).unwrap();
    let back = read_manifest(&manifest).unwrap();
    assert_eq!(back.len(), stars.len());
    for (a, b) in back.iter().zip(&stars) {
        assert_eq!(a.star_id, b.star_id);
        assert_eq!(a.period, b.period);
        assert_eq!(a.observations, b.observations);
    }
    let out = dir.path().join("phase.csv");
    let ds = preprocess(&back, LcConfig::default()).unwrap();
    fdepth::io::save_dataset(&ds, &out).unwrap();
    let reloaded = load_dataset(&out).unwrap();
    assert_eq!(reloaded.values(), ds.values());
    assert_eq!(reloaded.label(3), stars[3].star_id);
}

#[test]
fn misregistered_curves_are_among_the_least_deep() {
    let mut hits = [0usize; 3];
    let mut planted = 0;
    for seed in 0..10u64 {
        let synth = synth_lightcurves(200, &SynthSpec::default(), seed).unwrap();
        let shifted = synth.indices(CurveKind::PhaseShifted);
        planted += shifted.len();
        for (k, method) in [DepthMethod::Linf, DepthMethod::Mbd2, DepthMethod::Spatd]
            .into_iter()
            .enumerate()
        {
            let ranks = count_ranks(&compute_depth(&synth.dataset, method).unwrap().values);
            hits[k] += shifted.iter().filter(|&&i| ranks[i] <= 20).count();
        }
    }
    for h in hits {
        assert!(h as f64 >= 0.8 * planted as f64, "{h} of {planted}");
    }
}
