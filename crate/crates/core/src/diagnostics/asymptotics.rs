use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::sup_dist;
use crate::error::{Error, Result};
use crate::numeric::{exact_sum, mean, sample_sd};
use crate::rng::{derive_seed, tags};
use crate::sim::CurveSource;

fn distances(x: &[f64], source: &dyn CurveSource, seed: u64, n: usize) -> Vec<f64> {
    (0..n)
        .into_par_iter()
        .map(|i| sup_dist(x, &source.draw(seed, i)))
        .collect()
}

fn check_query(x: &[f64], source: &dyn CurveSource) -> Result<()> {
    if x.len() != source.grid().len() {
        return Err(Error::Dimension {
            expected: source.grid().len(),
            found: x.len(),
        });
    }
    Ok(())
}

/// L∞ depth of a fixed curve against growing nested samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SllnReport {
    pub seed: u64,
    pub schedule: Vec<usize>,
    pub depths: Vec<f64>,
    pub reference_n: usize,
    pub reference: f64,
    /// `|depth(n) − reference|` for each `n` of the schedule.
    pub deviations: Vec<f64>,
}

impl SllnReport {
    pub fn deviation_at(&self, n: usize) -> Option<f64> {
        self.schedule
            .iter()
            .position(|&m| m == n)
            .map(|k| self.deviations[k])
    }

    /// Largest deviation over schedule entries of size at least `n`.
    pub fn max_deviation_from(&self, n: usize) -> f64 {
        self.schedule
            .iter()
            .zip(&self.deviations)
            .filter(|(&m, _)| m >= n)
            .map(|(_, &d)| d)
            .fold(0.0, f64::max)
    }
}

/// `L∞D(x, P_n)` for each `n` in `schedule`, the samples being prefixes of
/// one sample of size `reference_n` whose depth serves as the limit.
pub fn slln_check(
    x: &[f64],
    source: &dyn CurveSource,
    schedule: &[usize],
    reference_n: usize,
    seed: u64,
) -> Result<SllnReport> {
    check_query(x, source)?;
    if schedule.is_empty() || schedule.iter().any(|&n| n == 0 || n > reference_n) {
        return Err(Error::InvalidParameter(format!(
            "schedule entries must lie in 1..={reference_n}"
        )));
    }
    let d = distances(x, source, seed, reference_n);
    let depth_of = |n: usize| 1.0 / (1.0 + exact_sum(d[..n].iter().copied()) / n as f64);
    let reference = depth_of(reference_n);
    let depths: Vec<f64> = schedule.iter().map(|&n| depth_of(n)).collect();
    Ok(SllnReport {
        seed,
        schedule: schedule.to_vec(),
        deviations: depths.iter().map(|v| (v - reference).abs()).collect(),
        depths,
        reference_n,
        reference,
    })
}

/// Monte Carlo check of the normal limit of `√n (L∞D(x,P_n) − L∞D(x,P))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    pub seed: u64,
    pub n: usize,
    pub n_reps: usize,
    pub n_plugin: usize,
    /// Plug-in mean and variance of `‖x − X‖∞`.
    pub mu: f64,
    pub sigma2: f64,
    pub population_depth: f64,
    /// `σ (1 + μ)⁻²`.
    pub asymptotic_sd: f64,
    pub empirical_sd: f64,
    /// Fraction of replicates inside `±1.96` asymptotic sd.
    pub coverage: f64,
}

impl CltReport {
    /// `|empirical / asymptotic − 1|`; zero when both vanish.
    pub fn sd_relative_error(&self) -> f64 {
        if self.asymptotic_sd == 0.0 {
            return if self.empirical_sd == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
        }
        (self.empirical_sd / self.asymptotic_sd - 1.0).abs()
    }
}

/// The population parameters `μ_x`, `σ_x²` are estimated from `n_plugin`
/// independent draws; each replicate then uses a fresh sample of size `n`.
pub fn clt_check(
    x: &[f64],
    source: &dyn CurveSource,
    n: usize,
    n_reps: usize,
    n_plugin: usize,
    seed: u64,
) -> Result<CltReport> {
    check_query(x, source)?;
    if n == 0 || n_reps < 2 || n_plugin < 2 {
        return Err(Error::InvalidParameter(
            "need n >= 1, n_reps >= 2 and n_plugin >= 2".into(),
        ));
    }
    let plug = distances(x, source, derive_seed(seed, tags::PLUGIN, 0), n_plugin);
    let mu = mean(&plug);
    let sigma = sample_sd(&plug);
    let population_depth = 1.0 / (1.0 + mu);
    let asymptotic_sd = sigma / (1.0 + mu).powi(2);
    let root_n = (n as f64).sqrt();
    let stats: Vec<f64> = (0..n_reps)
        .into_par_iter()
        .map(|r| {
            let d: Vec<f64> = (0..n)
                .map(|i| {
                    sup_dist(
                        x,
                        &source.draw(derive_seed(seed, tags::REPLICATE, r as u64), i),
                    )
                })
                .collect();
            root_n * (1.0 / (1.0 + mean(&d)) - population_depth)
        })
        .collect();
    let half_width = 1.96 * asymptotic_sd;
    let covered = stats.iter().filter(|s| s.abs() <= half_width).count();
    Ok(CltReport {
        seed,
        n,
        n_reps,
        n_plugin,
        mu,
        sigma2: sigma * sigma,
        population_depth,
        asymptotic_sd,
        empirical_sd: sample_sd(&stats),
        coverage: covered as f64 / n_reps as f64,
    })
}
