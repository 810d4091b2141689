//! Location estimators for samples of curves and the Monte Carlo
//! experiments that compare them.

mod experiment;

pub use experiment::{
    detection_experiment, mise_experiment, outlier_detected, DetectionConfig, ExperimentReport,
    MiseConfig, ReportCell, ReportKind, TieRule,
};

use serde::{Deserialize, Serialize};

use crate::data::{DepthVector, FunctionalDataset};
use crate::depth::DepthMethod;
use crate::error::{Error, Result};
use crate::numeric::{exact_sum, median};
use crate::rank::rank_curves;

/// Fraction of least-deep curves removed by a trimmed mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrimSpec {
    pub alpha: f64,
}

impl Default for TrimSpec {
    fn default() -> Self {
        Self { alpha: 0.2 }
    }
}

impl TrimSpec {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "trim fraction must lie in [0, 1), got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    /// `⌊nα⌋`: curves with rank at most this are trimmed. The small slack
    /// keeps products such as `50 × 0.2` from rounding down.
    pub fn trimmed_count(&self, n: usize) -> usize {
        ((n as f64 * self.alpha) + 1e-9).floor() as usize
    }
}

pub fn pointwise_mean(ds: &FunctionalDataset) -> Vec<f64> {
    let rows: Vec<usize> = (0..ds.n()).collect();
    mean_of_rows(ds, &rows)
}

/// Pointwise median; for even `n` the midpoint of the central pair.
pub fn pointwise_median(ds: &FunctionalDataset) -> Vec<f64> {
    (0..ds.p()).map(|t| median(&ds.column(t))).collect()
}

fn mean_of_rows(ds: &FunctionalDataset, rows: &[usize]) -> Vec<f64> {
    let m = rows.len() as f64;
    (0..ds.p())
        .map(|t| exact_sum(rows.iter().map(|&i| ds.row(i)[t])) / m)
        .collect()
}

/// Mean of the curves whose rank exceeds `⌊nα⌋`, ties in depth broken by
/// `tie_seed`. The number kept is `n − ⌊nα⌋ = ⌈n(1−α)⌉`.
pub fn trimmed_mean(
    ds: &FunctionalDataset,
    depth: &DepthVector,
    trim: TrimSpec,
    tie_seed: u64,
) -> Result<Vec<f64>> {
    if depth.len() != ds.n() {
        return Err(Error::Dimension {
            expected: ds.n(),
            found: depth.len(),
        });
    }
    let ranks = rank_curves(depth, tie_seed)?;
    let cut = trim.trimmed_count(ds.n());
    let kept: Vec<usize> = (0..ds.n()).filter(|&i| ranks.ranks[i] > cut).collect();
    Ok(mean_of_rows(ds, &kept))
}

/// Squared error summed over the grid, `Σ_k (f̂(t_k) − f(t_k))²`.
pub fn ise(estimate: &[f64], truth: &[f64]) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::Dimension {
            expected: truth.len(),
            found: estimate.len(),
        });
    }
    Ok(exact_sum(
        estimate.iter().zip(truth).map(|(a, b)| (a - b) * (a - b)),
    ))
}

/// How ISE values are scaled before averaging into a MISE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IseScale {
    /// [`ise`] divided by the number of grid points.
    #[default]
    PerPoint,
    /// [`ise`] as is.
    Sum,
}

impl IseScale {
    pub fn apply(self, estimate: &[f64], truth: &[f64]) -> Result<f64> {
        let s = ise(estimate, truth)?;
        Ok(match self {
            IseScale::PerPoint => s / truth.len() as f64,
            IseScale::Sum => s,
        })
    }
}

/// A curve-location estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "snake_case")]
pub enum Estimator {
    Mean,
    Median,
    Trimmed { depth: DepthMethod },
}

impl Estimator {
    /// `MEAN`, `MED`, then one trimmed mean per depth method.
    pub fn standard_set(rtd_seed: u64) -> Vec<Estimator> {
        let mut v = vec![Estimator::Mean, Estimator::Median];
        v.extend(
            DepthMethod::all(rtd_seed)
                .into_iter()
                .map(|depth| Estimator::Trimmed { depth }),
        );
        v
    }

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Mean => "MEAN",
            Estimator::Median => "MED",
            Estimator::Trimmed { depth } => depth.name(),
        }
    }
}

impl std::str::FromStr for Estimator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(Estimator::Mean),
            "med" | "median" => Ok(Estimator::Median),
            other => Ok(Estimator::Trimmed {
                depth: other.parse()?,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Grid;
    use crate::depth::compute_depth;
    use proptest::prelude::*;

    fn constants(levels: &[f64], p: usize) -> FunctionalDataset {
        let rows: Vec<Vec<f64>> = levels.iter().map(|&c| vec![c; p]).collect();
        FunctionalDataset::from_rows(Grid::unit_interval(p).unwrap(), &rows).unwrap()
    }

    fn depth_of(values: Vec<f64>) -> DepthVector {
        DepthVector {
            method: DepthMethod::Linf,
            values,
            seed: None,
        }
    }

    #[test]
    fn single_curve_is_its_own_mean_and_median() {
        let ds =
            FunctionalDataset::from_rows(Grid::unit_interval(3).unwrap(), &[vec![1.5, -2.0, 0.25]])
                .unwrap();
        assert_eq!(pointwise_mean(&ds), ds.row(0));
        assert_eq!(pointwise_median(&ds), ds.row(0));
    }

    #[test]
    fn constant_mean_and_median() {
        let ds = constants(&[0.0, 1.0, 5.0], 4);
        assert_eq!(pointwise_mean(&ds), vec![2.0; 4]);
        assert_eq!(pointwise_median(&ds), vec![1.0; 4]);
        assert_eq!(
            pointwise_median(&constants(&[0.0, 1.0, 5.0, 7.0], 2)),
            vec![3.0; 2]
        );
    }

    #[test]
    fn zero_trim_is_the_mean() {
        let ds = constants(&[0.1, 0.7, 0.3, 0.9], 3);
        let d = compute_depth(&ds, DepthMethod::Linf).unwrap();
        let tm = trimmed_mean(&ds, &d, TrimSpec::new(0.0).unwrap(), 5).unwrap();
        assert_eq!(tm, pointwise_mean(&ds));
    }

    #[test]
    fn trimmed_count_matches_ceiling_rule() {
        let t = TrimSpec::default();
        assert_eq!(50 - t.trimmed_count(50), 40);
        for n in 1..200 {
            for alpha in [0.0, 0.1, 0.2, 0.25, 0.3, 0.5, 0.9] {
                let kept = n - TrimSpec { alpha }.trimmed_count(n);
                assert_eq!(
                    kept,
                    (n as f64 * (1.0 - alpha) - 1e-9).ceil() as usize,
                    "n={n} α={alpha}"
                );
            }
        }
    }

    #[test]
    fn drops_least_deep_of_five() {
        let ds = constants(&[1.0, 2.0, 3.0, 4.0, 10.0], 2);
        let d = depth_of(vec![0.5, 0.6, 0.7, 0.8, 0.1]);
        let tm = trimmed_mean(&ds, &d, TrimSpec::default(), 0).unwrap();
        assert_eq!(tm, vec![2.5; 2]);
    }

    #[test]
    fn ise_examples() {
        let truth = vec![0.3; 30];
        assert_eq!(ise(&truth, &truth).unwrap(), 0.0);
        let est: Vec<f64> = truth.iter().map(|v| v + 0.5).collect();
        assert!((ise(&est, &truth).unwrap() - 30.0 * 0.25).abs() < 1e-12);
        assert!((IseScale::PerPoint.apply(&est, &truth).unwrap() - 0.25).abs() < 1e-12);
        assert!(ise(&est[..3], &truth).is_err());
    }

    #[test]
    fn estimator_tokens() {
        assert_eq!("MED".parse::<Estimator>().unwrap(), Estimator::Median);
        assert_eq!(
            "bd".parse::<Estimator>().unwrap(),
            Estimator::Trimmed {
                depth: DepthMethod::Bd3
            }
        );
        assert_eq!(Estimator::standard_set(0).len(), 9);
    }

    proptest! {
        #[test]
        fn median_matches_sorted_column(vals in prop::collection::vec(-5.0f64..5.0, 7 * 3)) {
            let ds = FunctionalDataset::new(Grid::unit_interval(3).unwrap(), vals).unwrap();
            let med = pointwise_median(&ds);
            for (t, m) in med.iter().enumerate() {
                let mut col: Vec<f64> = (0..7).map(|i| ds.row(i)[t]).collect();
                col.sort_by(|a, b| a.partial_cmp(b).unwrap());
                prop_assert_eq!(*m, col[3]);
            }
        }

        #[test]
        fn ise_matches_loop(a in prop::collection::vec(-3.0f64..3.0, 30), b in prop::collection::vec(-3.0f64..3.0, 30)) {
            let mut s = 0.0;
            for k in 0..30 {
                s += (a[k] - b[k]).powi(2);
            }
            prop_assert!((ise(&a, &b).unwrap() - s).abs() < 1e-12);
        }

        #[test]
        fn trimming_is_permutation_equivariant(
            vals in prop::collection::vec(-5.0f64..5.0, 12 * 4),
            shift in 0usize..12,
        ) {
            let ds = FunctionalDataset::new(Grid::unit_interval(4).unwrap(), vals).unwrap();
            let d = compute_depth(&ds, DepthMethod::Linf).unwrap();
            let perm: Vec<usize> = (0..12).map(|i| (i + shift) % 12).collect();
            let ds2 = ds.subset(&perm).unwrap();
            let d2 = depth_of(perm.iter().map(|&i| d.values[i]).collect());
            let a = trimmed_mean(&ds, &d, TrimSpec::default(), 1).unwrap();
            let b = trimmed_mean(&ds2, &d2, TrimSpec::default(), 1).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn trimmed_outlier_magnitude_is_irrelevant(
            vals in prop::collection::vec(-1.0f64..1.0, 10 * 3),
            bump in 10.0f64..1e6,
        ) {
            let ds = FunctionalDataset::new(Grid::unit_interval(3).unwrap(), vals).unwrap();
            let estimate = |b: f64| {
                let mut rows: Vec<Vec<f64>> = ds.rows().map(|r| r.to_vec()).collect();
                for v in rows[0].iter_mut() {
                    *v += b;
                }
                let moved = FunctionalDataset::from_rows(ds.grid().clone(), &rows).unwrap();
                let d = compute_depth(&moved, DepthMethod::Linf).unwrap();
                trimmed_mean(&moved, &d, TrimSpec::default(), 3).unwrap()
            };
            let near = estimate(bump);
            prop_assert!(near.iter().all(|v| v.abs() <= 1.0));
            prop_assert_eq!(near, estimate(1e7));
        }
    }
}
