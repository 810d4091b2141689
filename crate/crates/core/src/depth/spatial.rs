use rayon::prelude::*;

use crate::data::{DepthVector, FunctionalDataset};
use crate::depth::DepthMethod;
use crate::numeric::exact_sum;

/// Quadrature rule defining the L² norm on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Trapezoid,
    /// Equal weight on every grid point; the plain Euclidean norm.
    Uniform,
}

impl Quadrature {
    fn weights(self, ds: &FunctionalDataset) -> Vec<f64> {
        match self {
            Quadrature::Trapezoid => ds.grid().trapezoid_weights(),
            Quadrature::Uniform => vec![1.0; ds.p()],
        }
    }
}

/// Spatial depth `1 − ‖n⁻¹ Σ_j (x − x_j)/‖x − x_j‖‖` with the trapezoidal L²
/// norm. Reference curves equal to the query contribute nothing but still
/// count in `n`.
pub fn spatial_depth(ds: &FunctionalDataset) -> DepthVector {
    spatial_depth_weighted(ds, Quadrature::Trapezoid)
}

pub fn spatial_depth_weighted(ds: &FunctionalDataset, quadrature: Quadrature) -> DepthVector {
    DepthVector {
        method: DepthMethod::Spatd,
        values: spatial_depth_against(ds, ds, quadrature),
        seed: None,
    }
}

/// Norms are accumulated with a correctly rounded sum, so the result does
/// not depend on the column order when the weights are uniform.
pub fn spatial_depth_against(
    queries: &FunctionalDataset,
    reference: &FunctionalDataset,
    quadrature: Quadrature,
) -> Vec<f64> {
    let w = quadrature.weights(reference);
    let p = reference.p();
    let n_ref = reference.n() as f64;
    queries
        .values()
        .par_chunks_exact(p)
        .map(|x| {
            let mut acc = vec![0.0; p];
            let mut diff = vec![0.0; p];
            for y in reference.rows() {
                for t in 0..p {
                    diff[t] = x[t] - y[t];
                }
                let norm = exact_sum(diff.iter().zip(&w).map(|(d, w)| w * d * d)).sqrt();
                if norm == 0.0 {
                    continue;
                }
                for t in 0..p {
                    acc[t] += diff[t] / norm;
                }
            }
            let len = exact_sum(acc.iter().zip(&w).map(|(a, w)| {
                let u = a / n_ref;
                w * u * u
            }))
            .sqrt();
            (1.0 - len).clamp(0.0, 1.0)
        })
        .collect()
}
