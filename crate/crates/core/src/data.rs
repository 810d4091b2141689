//! Core containers: the sampling grid, the `n × p` curve matrix, and the
//! depth/rank vectors produced from it.

use serde::{Deserialize, Serialize};

use crate::depth::DepthMethod;
use crate::error::{Error, Result};
use crate::numeric::trapezoid_weights;

/// Ordered domain points shared by every curve of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(k) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite point at index {k}")));
        }
        if let Some(k) = points.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(format!(
                "points must be strictly increasing (index {} -> {})",
                k,
                k + 1
            )));
        }
        Ok(Self { points })
    }

    /// `{k / l : k = 1..=l}`, the evaluation grid of the simulation models.
    pub fn unit_interval(l: usize) -> Result<Self> {
        Self::new((1..=l).map(|k| k as f64 / l as f64).collect())
    }

    /// `{k / m : k = 0..m}`, a circular grid over `[0, 1)`.
    pub fn phase(m: usize) -> Result<Self> {
        Self::new((0..m).map(|k| k as f64 / m as f64).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn trapezoid_weights(&self) -> Vec<f64> {
        trapezoid_weights(&self.points)
    }
}

impl TryFrom<Vec<f64>> for Grid {
    type Error = Error;
    fn try_from(points: Vec<f64>) -> Result<Self> {
        Grid::new(points)
    }
}

impl From<Grid> for Vec<f64> {
    fn from(g: Grid) -> Self {
        g.points
    }
}

/// `n` curves sampled on a common grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalDataset {
    grid: Grid,
    values: Vec<f64>,
    n: usize,
    labels: Option<Vec<String>>,
}

impl FunctionalDataset {
    /// Build from a row-major `n × p` buffer.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        let p = grid.len();
        if values.is_empty() {
            return Err(Error::InvalidDataset("dataset has no curves".into()));
        }
        if !values.len().is_multiple_of(p) {
            return Err(Error::Dimension {
                expected: p,
                found: values.len() % p,
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite value in curve {} at grid index {}",
                k / p,
                k % p
            )));
        }
        let n = values.len() / p;
        Ok(Self {
            grid,
            values,
            n,
            labels: None,
        })
    }

    pub fn from_rows(grid: Grid, rows: &[Vec<f64>]) -> Result<Self> {
        let p = grid.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::Dimension {
                expected: p,
                found: bad.len(),
            });
        }
        Self::new(grid, rows.concat())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.p();
        &self.values[i * p..(i + 1) * p]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.p())
    }

    pub fn column(&self, t: usize) -> Vec<f64> {
        self.rows().map(|r| r[t]).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of curve `i`, falling back to its 1-based position.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("curve{}", i + 1),
        }
    }

    /// Dataset made of the given rows, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.p());
        for &i in indices {
            if i >= self.n {
                return Err(Error::InvalidParameter(format!(
                    "row index {i} out of range for n = {}",
                    self.n
                )));
            }
            values.extend_from_slice(self.row(i));
        }
        let mut out = Self::new(self.grid.clone(), values)?;
        if let Some(l) = &self.labels {
            out.labels = Some(indices.iter().map(|&i| l[i].clone()).collect());
        }
        Ok(out)
    }

    /// Reorder the columns of the data matrix, keeping the grid untouched.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        let p = self.p();
        let mut seen = vec![false; p];
        if perm.len() != p
            || perm
                .iter()
                .any(|&k| k >= p || std::mem::replace(&mut seen[k], true))
        {
            return Err(Error::InvalidParameter(
                "column permutation is not a permutation of 0..p".into(),
            ));
        }
        let values = self
            .rows()
            .flat_map(|r| perm.iter().map(move |&k| r[k]))
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
            n: self.n,
            labels: self.labels.clone(),
        })
    }

    /// Apply `f` to every curve, producing a dataset on the same grid.
    pub fn map_rows<F: FnMut(&[f64]) -> Vec<f64>>(&self, mut f: F) -> Result<Self> {
        let rows: Vec<Vec<f64>> = self.rows().map(&mut f).collect();
        let mut out = Self::from_rows(self.grid.clone(), &rows)?;
        out.labels = self.labels.clone();
        Ok(out)
    }
}

/// Supremum distance between two sampled curves: `max_k |x_k - y_k|`.
pub fn sup_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(sup_dist(x, y))
}

#[inline]
pub(crate) fn sup_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Per-curve depth values together with how they were produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthVector {
    pub method: DepthMethod,
    pub values: Vec<f64>,
    pub seed: Option<u64>,
}

impl DepthVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Ranks `1..=n`, least deep first, after seeded tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankVector {
    pub ranks: Vec<usize>,
    pub tie_seed: u64,
}
