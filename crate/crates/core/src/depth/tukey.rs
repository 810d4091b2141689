//! Random Tukey depth.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::data::{DepthVector, FunctionalDataset, Grid};
use crate::depth::DepthMethod;
use crate::error::{Error, Result};
use crate::numeric::exact_dot;
use crate::rng::stream;

/// A fixed set of projection directions in `ℝᵖ`, one per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Projections {
    p: usize,
    directions: Vec<f64>,
}

impl Projections {
    /// `n_proj` directions with i.i.d. standard normal coordinates, each
    /// multiplied by the trapezoidal quadrature weight of its grid point, so
    /// `⟨v, x⟩` approximates an integral of `x` against white noise.
    pub fn gaussian(grid: &Grid, n_proj: usize, seed: u64) -> Result<Self> {
        if n_proj == 0 {
            return Err(Error::InvalidParameter(
                "RTD needs at least one projection".into(),
            ));
        }
        let w = grid.trapezoid_weights();
        let mut rng = stream(seed, 0);
        let directions = (0..n_proj * grid.len())
            .map(|k| {
                let z: f64 = StandardNormal.sample(&mut rng);
                z * w[k % grid.len()]
            })
            .collect();
        Ok(Self {
            p: grid.len(),
            directions,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || p == 0 {
            return Err(Error::InvalidParameter(
                "RTD needs at least one projection".into(),
            ));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::Dimension {
                expected: p,
                found: bad.len(),
            });
        }
        Ok(Self {
            p,
            directions: rows.concat(),
        })
    }

    pub fn len(&self) -> usize {
        self.directions.len() / self.p
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn direction(&self, k: usize) -> &[f64] {
        &self.directions[k * self.p..(k + 1) * self.p]
    }

    /// Apply the same coordinate permutation to every direction.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.p {
            return Err(Error::Dimension {
                expected: self.p,
                found: perm.len(),
            });
        }
        let rows: Vec<Vec<f64>> = (0..self.len())
            .map(|k| perm.iter().map(|&c| self.direction(k)[c]).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

/// RTD with `n_proj` Gaussian directions drawn from `seed`.
pub fn rtd(ds: &FunctionalDataset, n_proj: usize, seed: u64) -> Result<DepthVector> {
    let proj = Projections::gaussian(ds.grid(), n_proj, seed)?;
    Ok(DepthVector {
        method: DepthMethod::Rtd { n_proj, seed },
        values: rtd_against(ds, ds, &proj)?,
        seed: Some(seed),
    })
}

/// RTD against explicit directions; the returned method records only the
/// number of directions.
pub fn rtd_with_projections(ds: &FunctionalDataset, proj: &Projections) -> Result<DepthVector> {
    Ok(DepthVector {
        method: DepthMethod::Rtd {
            n_proj: proj.len(),
            seed: 0,
        },
        values: rtd_against(ds, ds, proj)?,
        seed: None,
    })
}

/// Minimum over directions of the univariate halfspace depth
/// `min(#{y_j ≤ y}, #{y_j ≥ y}) / N` of the projected query.
pub fn rtd_against(
    queries: &FunctionalDataset,
    reference: &FunctionalDataset,
    proj: &Projections,
) -> Result<Vec<f64>> {
    if proj.dim() != reference.p() || proj.dim() != queries.p() {
        return Err(Error::Dimension {
            expected: reference.p(),
            found: proj.dim(),
        });
    }
    let n_ref = reference.n();
    // one sorted vector of reference projections per direction
    let sorted_ref: Vec<Vec<f64>> = (0..proj.len())
        .into_par_iter()
        .map(|k| {
            let v = proj.direction(k);
            let mut s: Vec<f64> = reference.rows().map(|y| exact_dot(v, y)).collect();
            s.sort_unstable_by(f64::total_cmp);
            s
        })
        .collect();
    Ok(queries
        .values()
        .par_chunks_exact(queries.p())
        .map(|x| {
            let mut depth = n_ref;
            for (k, s) in sorted_ref.iter().enumerate() {
                let y = exact_dot(proj.direction(k), x);
                let le = s.partition_point(|&c| c <= y);
                let ge = n_ref - s.partition_point(|&c| c < y);
                depth = depth.min(le.min(ge));
            }
            depth as f64 / n_ref as f64
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_curves_have_depth_one() {
        let g = Grid::unit_interval(5).unwrap();
        let ds = FunctionalDataset::from_rows(g, &vec![vec![0.5, 1.0, -2.0, 3.0, 0.0]; 4]).unwrap();
        assert_eq!(rtd(&ds, 20, 1).unwrap().values, vec![1.0; 4]);
    }

    #[test]
    fn one_direction_reduces_to_univariate_depth() {
        let g = Grid::unit_interval(2).unwrap();
        let ds = FunctionalDataset::from_rows(g, &[vec![0.0, 0.0], vec![2.0, 2.0], vec![1.0, 1.0]])
            .unwrap();
        let proj = Projections::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let d = rtd_with_projections(&ds, &proj).unwrap().values;
        // univariate Tukey depth of 0, 4, 2 in the sample {0, 4, 2}
        assert_eq!(d, vec![1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0]);
    }

    #[test]
    fn seeded_directions_are_reproducible() {
        let g = Grid::unit_interval(6).unwrap();
        assert_eq!(
            Projections::gaussian(&g, 10, 3).unwrap(),
            Projections::gaussian(&g, 10, 3).unwrap()
        );
        assert_ne!(
            Projections::gaussian(&g, 10, 3).unwrap(),
            Projections::gaussian(&g, 10, 4).unwrap()
        );
        assert!(Projections::gaussian(&g, 0, 3).is_err());
    }
}
