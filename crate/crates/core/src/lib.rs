//! Functional data depth.
//!
//! Seven empirical depth notions for curves sampled on a shared grid
//! (L∞, band, modified band, half-region, modified half-region, random
//! Tukey and spatial), the Gaussian-process contamination models used to
//! benchmark depth-trimmed means, rank-stability diagnostics, and a
//! light-curve preprocessing pipeline.
//!
//! Every stochastic routine takes an explicit `u64` seed and is
//! reproducible regardless of the rayon thread count.

pub mod data;
pub mod depth;
pub mod diagnostics;
pub mod error;
pub mod io;
pub mod lightcurve;
pub mod numeric;
pub mod rank;
pub mod rng;
pub mod robust;
pub mod sim;

pub use data::{sup_distance, DepthVector, FunctionalDataset, Grid, RankVector};
pub use depth::{compute_depth, depth_against, DepthMethod};
pub use error::{Error, Result};
pub use rank::{count_ranks, rank_curves, rank_values};
