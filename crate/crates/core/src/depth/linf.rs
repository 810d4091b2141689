use rayon::prelude::*;

use crate::data::{sup_dist, DepthVector, FunctionalDataset};
use crate::depth::DepthMethod;

/// `(1 + n⁻¹ Σ_j ‖x_i − x_j‖_∞)⁻¹`, the `j = i` term included.
pub fn linf_depth(ds: &FunctionalDataset) -> DepthVector {
    DepthVector {
        method: DepthMethod::Linf,
        values: linf_depth_against(ds, ds),
        seed: None,
    }
}

pub fn linf_depth_against(queries: &FunctionalDataset, reference: &FunctionalDataset) -> Vec<f64> {
    let n_ref = reference.n() as f64;
    queries
        .values()
        .par_chunks_exact(queries.p())
        .map(|x| {
            let total: f64 = reference.rows().map(|y| sup_dist(x, y)).sum();
            1.0 / (1.0 + total / n_ref)
        })
        .collect()
}
