//! Periodic light curves: folding, spline smoothing onto a shared phase
//! grid, phase alignment, and a synthetic generator.

mod spline;
mod synth;

pub use spline::NaturalSplineBasis;
pub use synth::{synth_lightcurves, CurveKind, SynthLightCurves, SynthSpec};

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{FunctionalDataset, Grid};
use crate::error::{Error, Result};
use crate::numeric::mean;

/// Photometric time series of one star with a known period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawLightCurve {
    pub star_id: String,
    /// Period in days.
    pub period: f64,
    /// `(time in days, magnitude)` pairs.
    pub observations: Vec<(f64, f64)>,
}

impl RawLightCurve {
    pub fn new(
        star_id: impl Into<String>,
        period: f64,
        observations: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let star_id = star_id.into();
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "star {star_id}: period must be positive, got {period}"
            )));
        }
        if observations.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "star {star_id}: need at least 2 observations, got {}",
                observations.len()
            )));
        }
        if observations
            .iter()
            .any(|(t, m)| !t.is_finite() || !m.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "star {star_id}: non-finite observation"
            )));
        }
        Ok(Self {
            star_id,
            period,
            observations,
        })
    }
}

/// Magnitudes against phase in `[0, 1)`, shifted to zero mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldedCurve {
    pub star_id: String,
    pub phases: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

pub fn fold(lc: &RawLightCurve) -> Result<FoldedCurve> {
    if !(lc.period > 0.0 && lc.period.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "star {}: period must be positive, got {}",
            lc.star_id, lc.period
        )));
    }
    let phases = lc
        .observations
        .iter()
        .map(|&(t, _)| {
            let ph = t.rem_euclid(lc.period) / lc.period;
            if ph >= 1.0 {
                0.0
            } else {
                ph
            }
        })
        .collect();
    let mags: Vec<f64> = lc.observations.iter().map(|o| o.1).collect();
    let m = mean(&mags);
    Ok(FoldedCurve {
        star_id: lc.star_id.clone(),
        phases,
        magnitudes: mags.iter().map(|v| v - m).collect(),
    })
}

/// Least-squares natural cubic spline through the folded points, evaluated
/// on `grid`.
pub fn smooth(fc: &FoldedCurve, basis: &NaturalSplineBasis, grid: &Grid) -> Result<Vec<f64>> {
    let fit_error = |reason: String| Error::Fit {
        star: fc.star_id.clone(),
        reason,
    };
    let mut distinct = fc.phases.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < basis.dim() {
        return Err(fit_error(format!(
            "{} distinct phases for {} knots",
            distinct.len(),
            basis.dim()
        )));
    }
    let coef = basis
        .fit(&fc.phases, &fc.magnitudes)
        .ok_or_else(|| fit_error("rank-deficient spline design".into()))?;
    Ok(grid
        .points()
        .iter()
        .map(|&x| basis.evaluate(&coef, x))
        .collect())
}

/// Rotate the samples of a curve on a circular grid so its (first) minimum
/// sits at index 0.
pub fn align_phase(c: &[f64]) -> Vec<f64> {
    let mut out = c.to_vec();
    if let Some(k) = (0..c.len()).min_by(|&a, &b| c[a].total_cmp(&c[b]).then(a.cmp(&b))) {
        out.rotate_left(k);
    }
    out
}

/// Preprocessing settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcConfig {
    pub knots: usize,
    pub grid_size: usize,
}

impl Default for LcConfig {
    fn default() -> Self {
        Self {
            knots: 15,
            grid_size: 100,
        }
    }
}

/// Fold, smooth onto the phase grid `{k/grid_size}`, recenter to zero mean
/// on the grid, and align the minimum to phase 0. Rows keep the input order
/// and carry the star identifiers as labels.
pub fn preprocess(curves: &[RawLightCurve], config: LcConfig) -> Result<FunctionalDataset> {
    if curves.is_empty() {
        return Err(Error::InvalidDataset("no light curves".into()));
    }
    let basis = NaturalSplineBasis::new(config.knots)?;
    let grid = Grid::phase(config.grid_size)?;
    let rows: Vec<Vec<f64>> = curves
        .par_iter()
        .map(|lc| {
            let s = smooth(&fold(lc)?, &basis, &grid)?;
            let m = mean(&s);
            Ok(align_phase(&s.iter().map(|v| v - m).collect::<Vec<_>>()))
        })
        .collect::<Result<_>>()?;
    FunctionalDataset::from_rows(grid, &rows)?
        .with_labels(curves.iter().map(|c| c.star_id.clone()).collect())
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    star_id: String,
    period: f64,
    path: PathBuf,
}

#[derive(Debug, Deserialize)]
struct ObservationRow {
    time: f64,
    mag: f64,
}

/// Read a manifest CSV (`star_id,period,path`) and the per-star CSVs
/// (`time,mag`) it lists. Relative paths resolve against the manifest's
/// directory.
pub fn read_manifest<P: AsRef<Path>>(path: P) -> Result<Vec<RawLightCurve>> {
    let path = path.as_ref();
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut out = Vec::new();
    for (k, row) in rdr.deserialize::<ManifestRow>().enumerate() {
        let row = row.map_err(|e| Error::Parse {
            row: k + 2,
            column: 0,
            message: e.to_string(),
        })?;
        let star_path = if row.path.is_absolute() {
            row.path.clone()
        } else {
            base.join(&row.path)
        };
        let mut star = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(&star_path)?;
        let obs = star
            .deserialize::<ObservationRow>()
            .enumerate()
            .map(|(j, r)| {
                r.map(|o| (o.time, o.mag)).map_err(|e| Error::Parse {
                    row: j + 2,
                    column: 0,
                    message: format!("{}: {e}", star_path.display()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(RawLightCurve::new(row.star_id, row.period, obs)?);
    }
    Ok(out)
}

/// Write light curves as a manifest plus one `time,mag` CSV per star in
/// `dir`; returns the manifest path.
pub fn write_manifest<P: AsRef<Path>>(curves: &[RawLightCurve], dir: P) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let manifest = dir.join("manifest.csv");
    let mut w = csv::Writer::from_path(&manifest)?;
    w.write_record(["star_id", "period", "path"])?;
    for lc in curves {
        let file = format!("{}.csv", lc.star_id);
        let mut sw = csv::Writer::from_path(dir.join(&file))?;
        sw.write_record(["time", "mag"])?;
        for &(t, m) in &lc.observations {
            sw.write_record([crate::io::format_value(t), crate::io::format_value(m)])?;
        }
        sw.flush()?;
        w.write_record([lc.star_id.clone(), crate::io::format_value(lc.period), file])?;
    }
    w.flush()?;
    Ok(manifest)
}
