use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{pointwise_mean, pointwise_median, trimmed_mean, Estimator, IseScale, TrimSpec};
use crate::data::{DepthVector, FunctionalDataset};
use crate::depth::{compute_depth, DepthMethod};
use crate::error::{Error, Result};
use crate::numeric::{exact_sum, sample_sd};
use crate::rank::{count_ranks, rank_values};
use crate::rng::{derive_seed, tags};
use crate::sim::{ModelId, ModelSampler, ModelSpec};

/// How depth ties are resolved when ranking for detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// `r_i = #{j : D_j ≤ D_i}`; a tie group shares its highest rank.
    #[default]
    Count,
    /// Seeded random order within tie groups.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Mise,
    Detection,
}

/// One (row × model) cell of a report table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub row: String,
    pub model: ModelId,
    pub value: f64,
    pub se: f64,
    pub n_reps: usize,
}

/// Result of a Monte Carlo experiment with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: ReportKind,
    pub seed: u64,
    pub n_reps: usize,
    pub models: Vec<ModelSpec>,
    pub rows: Vec<String>,
    pub cells: Vec<ReportCell>,
    pub settings: BTreeMap<String, serde_json::Value>,
}

impl ExperimentReport {
    pub fn cell(&self, row: &str, model: ModelId) -> Option<&ReportCell> {
        self.cells.iter().find(|c| c.row == row && c.model == model)
    }

    /// Rows × model columns with `value (se)` cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("estimator");
        for m in &self.models {
            let _ = write!(out, ",{}", m.model);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            for m in &self.models {
                match self.cell(row, m.model) {
                    Some(c) => {
                        let _ = write!(out, ",{:.4} ({:.4})", c.value, c.se);
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiseConfig {
    pub estimators: Vec<Estimator>,
    pub n_reps: usize,
    pub seed: u64,
    pub trim: TrimSpec,
    pub ise_scale: IseScale,
}

impl MiseConfig {
    pub fn new(n_reps: usize, seed: u64) -> Self {
        Self {
            estimators: Estimator::standard_set(0),
            n_reps,
            seed,
            trim: TrimSpec::default(),
            ise_scale: IseScale::default(),
        }
    }
}

fn replicate_seed(seed: u64, model: ModelId, rep: usize) -> u64 {
    derive_seed(
        derive_seed(seed, tags::REPLICATE, model.index()),
        tags::REPLICATE,
        rep as u64,
    )
}

fn check_models(models: &[ModelSpec], n_reps: usize) -> Result<()> {
    if models.is_empty() {
        return Err(Error::InvalidParameter("no models given".into()));
    }
    if n_reps == 0 {
        return Err(Error::InvalidParameter("n_reps must be at least 1".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for m in models {
        if !seen.insert(m.model) {
            return Err(Error::InvalidParameter(format!(
                "model {} listed twice",
                m.model
            )));
        }
    }
    Ok(())
}

/// Depth vectors for every distinct trimming method on one replicate.
fn replicate_depths(
    ds: &FunctionalDataset,
    methods: &[DepthMethod],
    rtd_seed: u64,
) -> Result<Vec<DepthVector>> {
    methods
        .iter()
        .map(|m| compute_depth(ds, m.reseeded(rtd_seed)))
        .collect()
}

fn distinct_methods(estimators: &[Estimator]) -> Vec<DepthMethod> {
    let mut out: Vec<DepthMethod> = Vec::new();
    for e in estimators {
        if let Estimator::Trimmed { depth } = e {
            if !out.iter().any(|m| m.reseeded(0) == depth.reseeded(0)) {
                out.push(*depth);
            }
        }
    }
    out
}

/// MISE with standard error for every estimator on every model.
///
/// Within a replicate all estimators see the same sample. Replicate `r` of
/// model `Mk` draws its data, RTD directions and tie-breaking from seeds
/// derived from `(seed, k, r)`, so each cell is reproducible on its own.
pub fn mise_experiment(models: &[ModelSpec], config: &MiseConfig) -> Result<ExperimentReport> {
    check_models(models, config.n_reps)?;
    if config.estimators.is_empty() {
        return Err(Error::InvalidParameter("no estimators given".into()));
    }
    let methods = distinct_methods(&config.estimators);
    let mut cells = Vec::new();
    for spec in models {
        let sampler = ModelSampler::new(spec)?;
        let per_rep: Vec<Vec<f64>> = (0..config.n_reps)
            .into_par_iter()
            .map(|rep| -> Result<Vec<f64>> {
                let rs = replicate_seed(config.seed, spec.model, rep);
                let sim = sampler.generate(rs)?;
                let ds = &sim.dataset;
                let depths = replicate_depths(ds, &methods, derive_seed(rs, tags::RTD, 0))?;
                let tie_seed = derive_seed(rs, tags::TIES, 0);
                config
                    .estimators
                    .iter()
                    .map(|e| {
                        let est = match e {
                            Estimator::Mean => pointwise_mean(ds),
                            Estimator::Median => pointwise_median(ds),
                            Estimator::Trimmed { depth } => {
                                let k = methods
                                    .iter()
                                    .position(|m| m.reseeded(0) == depth.reseeded(0))
                                    .expect("method collected above");
                                trimmed_mean(ds, &depths[k], config.trim, tie_seed)?
                            }
                        };
                        config.ise_scale.apply(&est, &sim.truth)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (e_idx, e) in config.estimators.iter().enumerate() {
            let vals: Vec<f64> = per_rep.iter().map(|r| r[e_idx]).collect();
            cells.push(ReportCell {
                row: e.name().to_string(),
                model: spec.model,
                value: exact_sum(vals.iter().copied()) / vals.len() as f64,
                se: sample_sd(&vals) / (vals.len() as f64).sqrt(),
                n_reps: config.n_reps,
            });
        }
    }
    let mut settings = BTreeMap::new();
    settings.insert("trim".into(), serde_json::to_value(config.trim)?);
    settings.insert("ise_scale".into(), serde_json::to_value(config.ise_scale)?);
    settings.insert(
        "estimators".into(),
        serde_json::to_value(&config.estimators)?,
    );
    Ok(ExperimentReport {
        kind: ReportKind::Mise,
        seed: config.seed,
        n_reps: config.n_reps,
        models: models.to_vec(),
        rows: config
            .estimators
            .iter()
            .map(|e| e.name().to_string())
            .collect(),
        cells,
        settings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub methods: Vec<DepthMethod>,
    pub n_reps: usize,
    pub seed: u64,
    /// A curve counts as detected when its rank is at most `⌊n·fraction⌋`.
    pub fraction: f64,
    pub tie_rule: TieRule,
}

impl DetectionConfig {
    pub fn new(n_reps: usize, seed: u64) -> Self {
        Self {
            methods: DepthMethod::all(0).to_vec(),
            n_reps,
            seed,
            fraction: 0.2,
            tie_rule: TieRule::default(),
        }
    }
}

/// Whether curve `index` ranks among the least deep `fraction` of `ds`.
pub fn outlier_detected(
    depth: &[f64],
    index: usize,
    fraction: f64,
    tie_rule: TieRule,
    tie_seed: u64,
) -> Result<bool> {
    if index >= depth.len() {
        return Err(Error::InvalidParameter(format!(
            "curve {index} out of range for n = {}",
            depth.len()
        )));
    }
    let cut = TrimSpec { alpha: fraction }.trimmed_count(depth.len());
    let rank = match tie_rule {
        TieRule::Count => count_ranks(depth)[index],
        TieRule::Random => rank_values(depth, tie_seed)?.ranks[index],
    };
    Ok(rank <= cut)
}

/// Fraction of replicates in which a single planted outlier (the last of
/// `n` curves, the other `n − 1` from the base process) is ranked among the
/// least deep `fraction` of the sample.
pub fn detection_experiment(
    models: &[ModelSpec],
    config: &DetectionConfig,
) -> Result<ExperimentReport> {
    check_models(models, config.n_reps)?;
    if config.methods.is_empty() {
        return Err(Error::InvalidParameter("no depth methods given".into()));
    }
    if !(config.fraction > 0.0 && config.fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "detection fraction must lie in (0, 1), got {}",
            config.fraction
        )));
    }
    let mut cells = Vec::new();
    for spec in models {
        let sampler = ModelSampler::new(spec)?;
        let target = spec.n - 1;
        let hits: Vec<Vec<bool>> = (0..config.n_reps)
            .into_par_iter()
            .map(|rep| -> Result<Vec<bool>> {
                let rs = replicate_seed(config.seed, spec.model, rep);
                let sim = sampler.generate_planted(rs, &[target])?;
                let depths =
                    replicate_depths(&sim.dataset, &config.methods, derive_seed(rs, tags::RTD, 0))?;
                let tie_seed = derive_seed(rs, tags::TIES, 0);
                depths
                    .iter()
                    .map(|d| {
                        outlier_detected(
                            &d.values,
                            target,
                            config.fraction,
                            config.tie_rule,
                            tie_seed,
                        )
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (k, m) in config.methods.iter().enumerate() {
            let rate = hits.iter().filter(|h| h[k]).count() as f64 / config.n_reps as f64;
            cells.push(ReportCell {
                row: m.name().to_string(),
                model: spec.model,
                value: rate,
                se: (rate * (1.0 - rate) / config.n_reps as f64).sqrt(),
                n_reps: config.n_reps,
            });
        }
    }
    let mut settings = BTreeMap::new();
    settings.insert("fraction".into(), serde_json::to_value(config.fraction)?);
    settings.insert("tie_rule".into(), serde_json::to_value(config.tie_rule)?);
    settings.insert("methods".into(), serde_json::to_value(&config.methods)?);
    Ok(ExperimentReport {
        kind: ReportKind::Detection,
        seed: config.seed,
        n_reps: config.n_reps,
        models: models.to_vec(),
        rows: config
            .methods
            .iter()
            .map(|m| m.name().to_string())
            .collect(),
        cells,
        settings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_rule_counts_ties_against_the_curve() {
        let d = [0.1, 0.1, 0.1, 0.5, 0.6];
        assert!(!outlier_detected(&d, 0, 0.4, TieRule::Count, 0).unwrap());
        let hits = (0..20)
            .filter(|&s| outlier_detected(&d, 0, 0.4, TieRule::Random, s).unwrap())
            .count();
        assert!(hits > 0 && hits < 20);
    }

    #[test]
    fn report_is_reproducible_and_tabulates() {
        let models = [ModelSpec::new(ModelId::M0), ModelSpec::new(ModelId::M1)];
        let mut cfg = MiseConfig::new(4, 11);
        cfg.estimators = vec![
            Estimator::Mean,
            Estimator::Trimmed {
                depth: DepthMethod::Linf,
            },
        ];
        let a = mise_experiment(&models, &cfg).unwrap();
        let b = mise_experiment(&models, &cfg).unwrap();
        assert_eq!(a, b);
        let csv = a.to_csv();
        assert!(csv.starts_with("estimator,M0,M1\nMEAN,"));
        assert_eq!(csv.lines().count(), 3);
        assert!(a.cells.iter().all(|c| c.se >= 0.0 && c.n_reps == 4));
    }

    #[test]
    fn duplicate_models_are_rejected() {
        let models = [ModelSpec::new(ModelId::M0), ModelSpec::new(ModelId::M0)];
        assert!(mise_experiment(&models, &MiseConfig::new(2, 0)).is_err());
    }
}
