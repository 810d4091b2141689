//! Half-region depth and its modified (domain-averaged) version.
//!
//! Both use non-strict pointwise comparisons, so a curve that belongs to the
//! reference always counts itself on both sides and its sample depth is at
//! least `1/n`.

use rayon::prelude::*;

use crate::data::{DepthVector, FunctionalDataset};
use crate::depth::band::sorted_columns;
use crate::depth::DepthMethod;

/// `min(#{j: x_j ≤ x everywhere}, #{j: x_j ≥ x everywhere}) / n`.
pub fn hrd(ds: &FunctionalDataset) -> DepthVector {
    DepthVector {
        method: DepthMethod::Hrd,
        values: hrd_against(ds, ds),
        seed: None,
    }
}

pub fn hrd_against(queries: &FunctionalDataset, reference: &FunctionalDataset) -> Vec<f64> {
    let n_ref = reference.n() as f64;
    queries
        .values()
        .par_chunks_exact(queries.p())
        .map(|x| {
            let mut below = 0usize;
            let mut above = 0usize;
            for y in reference.rows() {
                if y.iter().zip(x).all(|(a, b)| a <= b) {
                    below += 1;
                }
                if y.iter().zip(x).all(|(a, b)| a >= b) {
                    above += 1;
                }
            }
            below.min(above) as f64 / n_ref
        })
        .collect()
}

/// `min(a, b)` where `a = (np)⁻¹ Σ_j Σ_t 1{x_j(t) ≤ x(t)}` and `b` is the
/// same with `≥`.
pub fn mhrd(ds: &FunctionalDataset) -> DepthVector {
    DepthVector {
        method: DepthMethod::Mhrd,
        values: mhrd_against(ds, ds),
        seed: None,
    }
}

pub fn mhrd_against(queries: &FunctionalDataset, reference: &FunctionalDataset) -> Vec<f64> {
    let n_ref = reference.n();
    let columns = sorted_columns(reference);
    let denom = (n_ref * reference.p()) as f64;
    queries
        .values()
        .par_chunks_exact(queries.p())
        .map(|x| {
            let mut le = 0usize;
            let mut ge = 0usize;
            for (&v, col) in x.iter().zip(&columns) {
                le += col.partition_point(|&c| c <= v);
                ge += n_ref - col.partition_point(|&c| c < v);
            }
            le.min(ge) as f64 / denom
        })
        .collect()
}
