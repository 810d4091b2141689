use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{FunctionalDataset, Grid};
use crate::error::{Error, Result};
use crate::lightcurve::{align_phase, RawLightCurve};
use crate::numeric::mean;
use crate::rng::{derive_seed, stream, tags};

/// Role of a synthetic curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Inlier,
    /// Template amplitude inflated.
    HighAmplitude,
    /// Template amplitude deflated, without the random perturbation.
    LowAmplitude,
    /// Aligned curve rotated by a quarter period.
    PhaseShifted,
}

/// Parameters of the synthetic light-curve generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub grid_size: usize,
    /// Fractions of each outlier family (rounded to whole curves).
    pub high_fraction: f64,
    pub low_fraction: f64,
    pub shift_fraction: f64,
    /// Standard deviation of the log amplitude of inliers.
    pub amplitude_spread: f64,
    pub high_factor: f64,
    pub low_factor: f64,
    /// Standard deviation of the first harmonic of the perturbation.
    pub wiggle: f64,
    pub harmonics: usize,
    pub shift: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            grid_size: 100,
            high_fraction: 0.02,
            low_fraction: 0.02,
            shift_fraction: 0.02,
            amplitude_spread: 0.35,
            high_factor: 2.0,
            low_factor: 0.25,
            wiggle: 0.06,
            harmonics: 8,
            shift: 0.25,
        }
    }
}

impl SynthSpec {
    /// No planted outliers.
    pub fn clean() -> Self {
        Self {
            high_fraction: 0.0,
            low_fraction: 0.0,
            shift_fraction: 0.0,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let fr = [self.high_fraction, self.low_fraction, self.shift_fraction];
        if fr.iter().any(|f| !(0.0..=1.0).contains(f)) || fr.iter().sum::<f64>() > 1.0 {
            return Err(Error::InvalidParameter(
                "outlier fractions must lie in [0, 1] and sum to at most 1".into(),
            ));
        }
        if self.grid_size < 2 || self.harmonics == 0 {
            return Err(Error::InvalidParameter(
                "grid_size >= 2 and harmonics >= 1 required".into(),
            ));
        }
        if !(self.high_factor > 0.0
            && self.low_factor > 0.0
            && self.amplitude_spread >= 0.0
            && self.wiggle >= 0.0)
        {
            return Err(Error::InvalidParameter(
                "amplitude factors must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Smoothed sawtooth: slow dimming over the cycle, then a quick
/// brightening; five Fourier terms.
fn template(phase: f64) -> f64 {
    -(1..=5)
        .map(|k| (TAU * k as f64 * phase).sin() / (std::f64::consts::PI * k as f64))
        .sum::<f64>()
}

/// One synthetic star as a continuous periodic function of phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthCurve {
    pub kind: CurveKind,
    pub amplitude: f64,
    /// `(cos, sin)` coefficients of harmonics `1..`.
    pub perturbation: Vec<(f64, f64)>,
}

impl SynthCurve {
    pub fn eval(&self, phase: f64) -> f64 {
        let wiggle: f64 = self
            .perturbation
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let w = TAU * (k + 1) as f64 * phase;
                a * w.cos() + b * w.sin()
            })
            .sum();
        self.amplitude * template(phase) + wiggle
    }
}

/// Synthetic aligned light curves with planted outliers.
#[derive(Debug, Clone)]
pub struct SynthLightCurves {
    pub curves: Vec<SynthCurve>,
    pub kinds: Vec<CurveKind>,
    pub dataset: FunctionalDataset,
    pub spec: SynthSpec,
    pub seed: u64,
}

impl SynthLightCurves {
    pub fn flags(&self) -> Vec<bool> {
        self.kinds.iter().map(|&k| k != CurveKind::Inlier).collect()
    }

    pub fn indices(&self, kind: CurveKind) -> Vec<usize> {
        (0..self.kinds.len())
            .filter(|&i| self.kinds[i] == kind)
            .collect()
    }

    /// Irregularly sampled raw observations of each star: `n_obs` times over
    /// 1000 days, a random period in `[1, 10)` days and mean magnitude 15,
    /// plus Gaussian photometric noise of sd `noise`.
    pub fn raw(&self, n_obs: usize, noise: f64, seed: u64) -> Result<Vec<RawLightCurve>> {
        self.curves
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut rng = stream(seed, i as u64);
                let period: f64 = rng.random_range(1.0..10.0);
                let obs = (0..n_obs)
                    .map(|_| {
                        let t: f64 = rng.random_range(0.0..1000.0);
                        let e: f64 = StandardNormal.sample(&mut rng);
                        (t, 15.0 + c.eval((t / period).fract()) + noise * e)
                    })
                    .collect();
                RawLightCurve::new(format!("star{:04}", i + 1), period, obs)
            })
            .collect()
    }
}

/// `n` curves on the phase grid, centred and aligned like pipeline output,
/// with outlier families planted at random positions.
pub fn synth_lightcurves(n: usize, spec: &SynthSpec, seed: u64) -> Result<SynthLightCurves> {
    spec.validate()?;
    if n < 10 {
        return Err(Error::InvalidParameter(format!("need n >= 10, got {n}")));
    }
    let count = |f: f64| (f * n as f64).round() as usize;
    let mut kinds = vec![CurveKind::Inlier; n];
    let mut pos: Vec<usize> = (0..n).collect();
    pos.shuffle(&mut stream(derive_seed(seed, tags::SHIFT, 0), 0));
    let mut it = pos.into_iter();
    for (kind, f) in [
        (CurveKind::HighAmplitude, spec.high_fraction),
        (CurveKind::LowAmplitude, spec.low_fraction),
        (CurveKind::PhaseShifted, spec.shift_fraction),
    ] {
        for i in it.by_ref().take(count(f)) {
            kinds[i] = kind;
        }
    }

    let grid = Grid::phase(spec.grid_size)?;
    let mut curves = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for (i, &kind) in kinds.iter().enumerate() {
        let mut rng = stream(seed, i as u64);
        let z: f64 = StandardNormal.sample(&mut rng);
        let mut amplitude = (spec.amplitude_spread * z).exp();
        let mut perturbation: Vec<(f64, f64)> = (1..=spec.harmonics)
            .map(|k| {
                let a: f64 = StandardNormal.sample(&mut rng);
                let b: f64 = StandardNormal.sample(&mut rng);
                let s = spec.wiggle / k as f64;
                (s * a, s * b)
            })
            .collect();
        match kind {
            CurveKind::HighAmplitude => amplitude *= spec.high_factor,
            CurveKind::LowAmplitude => {
                amplitude *= spec.low_factor;
                perturbation.iter_mut().for_each(|c| *c = (0.0, 0.0));
            }
            _ => {}
        }
        let curve = SynthCurve {
            kind,
            amplitude,
            perturbation,
        };
        let vals: Vec<f64> = grid.points().iter().map(|&x| curve.eval(x)).collect();
        let m = mean(&vals);
        let mut row = align_phase(&vals.iter().map(|v| v - m).collect::<Vec<_>>());
        if kind == CurveKind::PhaseShifted {
            let k = (spec.shift * spec.grid_size as f64).round() as usize % spec.grid_size;
            row.rotate_right(k);
        }
        rows.push(row);
        curves.push(curve);
    }
    let labels = (1..=n).map(|i| format!("star{i:04}")).collect();
    Ok(SynthLightCurves {
        dataset: FunctionalDataset::from_rows(grid, &rows)?.with_labels(labels)?,
        curves,
        kinds,
        spec: spec.clone(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::sup_dist;

    #[test]
    fn clean_spec_has_no_flags() {
        let s = synth_lightcurves(50, &SynthSpec::clean(), 1).unwrap();
        assert!(s.flags().iter().all(|f| !f));
    }

    #[test]
    fn reproducible() {
        let a = synth_lightcurves(40, &SynthSpec::default(), 9).unwrap();
        let b = synth_lightcurves(40, &SynthSpec::default(), 9).unwrap();
        assert_eq!(a.dataset, b.dataset);
        assert_eq!(a.kinds, b.kinds);
    }

    /// Each curve's template is its own unperturbed, amplitude-scaled
    /// shape, centred and aligned like the curve itself.
    fn own_template(s: &SynthLightCurves, i: usize) -> Vec<f64> {
        let g = s.dataset.grid();
        let tv: Vec<f64> = g
            .points()
            .iter()
            .map(|&x| s.curves[i].amplitude * template(x))
            .collect();
        let m = mean(&tv);
        align_phase(&tv.iter().map(|v| v - m).collect::<Vec<_>>())
    }

    #[test]
    fn shifted_curves_are_far_from_the_template() {
        for seed in 0..20 {
            let s = synth_lightcurves(200, &SynthSpec::default(), seed).unwrap();
            let mut inlier: Vec<f64> = s
                .indices(CurveKind::Inlier)
                .iter()
                .map(|&i| sup_dist(s.dataset.row(i), &own_template(&s, i)))
                .collect();
            inlier.sort_by(f64::total_cmp);
            let q95 = inlier[(0.95 * inlier.len() as f64) as usize];
            let shifted = s.indices(CurveKind::PhaseShifted);
            assert_eq!(shifted.len(), 4);
            for i in shifted {
                let d = sup_dist(s.dataset.row(i), &own_template(&s, i));
                assert!(d > q95, "seed {seed}: {d} vs {q95}");
            }
        }
    }

    #[test]
    fn aligned_and_centred() {
        let s = synth_lightcurves(30, &SynthSpec::clean(), 2).unwrap();
        for row in s.dataset.rows() {
            assert!(mean(row).abs() < 1e-10);
            assert!(row.iter().all(|&v| v >= row[0]));
        }
    }
}
