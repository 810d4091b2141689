//! Gaussian-process sampling and the contamination models M0–M9.

mod gp;
mod models;
mod source;

pub use gp::{sample_gp, GpSampler, KernelSpec, MAX_JITTER};
pub use models::{generate, MeanFn, ModelId, ModelSampler, ModelSpec, Simulated};
pub use source::{CurveSource, PointMass};
