//! Empirical depth functions.
//!
//! Every method is implemented as a query-versus-reference kernel: the depth
//! of each query curve with respect to the empirical distribution of a
//! reference sample. Sample depths are the special case where the dataset is
//! its own reference, so a curve always belongs to the sample it is scored
//! against.

mod band;
mod half_region;
mod linf;
mod spatial;
mod tukey;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{DepthVector, FunctionalDataset};
use crate::error::{Error, Result};

pub use band::{band_depth_j3, band_depth_j3_against, mbd_against, mbd_fast, mbd_naive};
pub use half_region::{hrd, hrd_against, mhrd, mhrd_against};
pub use linf::{linf_depth, linf_depth_against};
pub use spatial::{spatial_depth, spatial_depth_against, spatial_depth_weighted, Quadrature};
pub use tukey::{rtd, rtd_against, rtd_with_projections, Projections};

/// Number of random directions used by RTD unless stated otherwise.
pub const DEFAULT_RTD_PROJECTIONS: usize = 250;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DepthMethod {
    /// Reciprocal of one plus the mean sup-norm distance.
    Linf,
    /// Band depth with bands delimited by 2 and 3 curves (unnormalised sum).
    Bd3,
    /// Modified band depth with bands delimited by pairs.
    Mbd2,
    Hrd,
    Mhrd,
    /// Random Tukey depth.
    Rtd {
        n_proj: usize,
        seed: u64,
    },
    /// Spatial depth with the trapezoidal L² norm.
    Spatd,
}

impl DepthMethod {
    pub fn rtd(seed: u64) -> Self {
        DepthMethod::Rtd {
            n_proj: DEFAULT_RTD_PROJECTIONS,
            seed,
        }
    }

    /// The six deterministic methods plus RTD with default settings.
    pub fn all(rtd_seed: u64) -> [DepthMethod; 7] {
        [
            DepthMethod::Bd3,
            DepthMethod::Mbd2,
            DepthMethod::Hrd,
            DepthMethod::Mhrd,
            DepthMethod::rtd(rtd_seed),
            DepthMethod::Spatd,
            DepthMethod::Linf,
        ]
    }

    /// Short display name used in report tables.
    pub fn name(&self) -> &'static str {
        match self {
            DepthMethod::Linf => "LinfD",
            DepthMethod::Bd3 => "BD",
            DepthMethod::Mbd2 => "MBD",
            DepthMethod::Hrd => "HRD",
            DepthMethod::Mhrd => "MHRD",
            DepthMethod::Rtd { .. } => "RTD",
            DepthMethod::Spatd => "SPATD",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            DepthMethod::Rtd { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Same method with its RNG seed replaced (no-op for deterministic ones).
    pub fn reseeded(self, new_seed: u64) -> Self {
        match self {
            DepthMethod::Rtd { n_proj, .. } => DepthMethod::Rtd {
                n_proj,
                seed: new_seed,
            },
            other => other,
        }
    }

    /// Minimum reference-sample size the method is defined for.
    pub fn min_reference(&self) -> usize {
        match self {
            DepthMethod::Bd3 => 3,
            DepthMethod::Mbd2 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for DepthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DepthMethod {
    type Err = Error;

    /// Accepts case-insensitive tokens; `rtd` takes the default number of
    /// projections and seed 0.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linf" | "linfd" | "l_inf" => Ok(DepthMethod::Linf),
            "bd" | "bd3" => Ok(DepthMethod::Bd3),
            "mbd" | "mbd2" => Ok(DepthMethod::Mbd2),
            "hrd" => Ok(DepthMethod::Hrd),
            "mhrd" => Ok(DepthMethod::Mhrd),
            "rtd" => Ok(DepthMethod::rtd(0)),
            "spatd" | "spatial" => Ok(DepthMethod::Spatd),
            other => Err(Error::InvalidParameter(format!(
                "unknown depth method `{other}` (expected one of linf, bd3, mbd, hrd, mhrd, rtd, spatd)"
            ))),
        }
    }
}

/// Sample depths of every curve of `ds` under `method`.
pub fn compute_depth(ds: &FunctionalDataset, method: DepthMethod) -> Result<DepthVector> {
    Ok(DepthVector {
        method,
        values: depth_against(ds, ds, method)?,
        seed: method.seed(),
    })
}

/// Depth of each row of `queries` with respect to the sample `reference`.
pub fn depth_against(
    queries: &FunctionalDataset,
    reference: &FunctionalDataset,
    method: DepthMethod,
) -> Result<Vec<f64>> {
    check_compatible(queries, reference)?;
    match method {
        DepthMethod::Linf => Ok(linf_depth_against(queries, reference)),
        DepthMethod::Bd3 => band_depth_j3_against(queries, reference),
        DepthMethod::Mbd2 => mbd_against(queries, reference),
        DepthMethod::Hrd => Ok(hrd_against(queries, reference)),
        DepthMethod::Mhrd => Ok(mhrd_against(queries, reference)),
        DepthMethod::Rtd { n_proj, seed } => {
            let proj = Projections::gaussian(reference.grid(), n_proj, seed)?;
            rtd_against(queries, reference, &proj)
        }
        DepthMethod::Spatd => Ok(spatial_depth_against(
            queries,
            reference,
            Quadrature::Trapezoid,
        )),
    }
}

pub(crate) fn check_compatible(q: &FunctionalDataset, r: &FunctionalDataset) -> Result<()> {
    if q.p() != r.p() {
        return Err(Error::Dimension {
            expected: r.p(),
            found: q.p(),
        });
    }
    Ok(())
}
