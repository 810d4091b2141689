use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{FunctionalDataset, Grid};
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::sim::gp::{GpSampler, KernelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelId {
    M0,
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
    M7,
    M8,
    M9,
}

impl ModelId {
    pub const MAGNITUDE: [ModelId; 5] = [
        ModelId::M0,
        ModelId::M1,
        ModelId::M2,
        ModelId::M3,
        ModelId::M4,
    ];
    pub const SHAPE: [ModelId; 5] = [
        ModelId::M5,
        ModelId::M6,
        ModelId::M7,
        ModelId::M8,
        ModelId::M9,
    ];

    pub fn index(self) -> u64 {
        self as u64
    }

    pub fn is_shape(self) -> bool {
        self >= ModelId::M5
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.index())
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['M', 'm']);
        let k: usize = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("unknown model `{s}`")))?;
        [
            ModelId::M0,
            ModelId::M1,
            ModelId::M2,
            ModelId::M3,
            ModelId::M4,
            ModelId::M5,
            ModelId::M6,
            ModelId::M7,
            ModelId::M8,
            ModelId::M9,
        ]
        .get(k)
        .copied()
        .ok_or_else(|| Error::InvalidParameter(format!("unknown model `{s}`")))
    }
}

/// Mean function `4t`, `4t²` or `4t³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanFn {
    Linear,
    Quadratic,
    Cubic,
}

impl MeanFn {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            MeanFn::Linear => 4.0 * t,
            MeanFn::Quadratic => 4.0 * t * t,
            MeanFn::Cubic => 4.0 * t * t * t,
        }
    }
}

/// Complete parameterisation of one generative model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: ModelId,
    pub mean: MeanFn,
    /// Contamination magnitude `M` (M1–M4).
    pub magnitude: f64,
    /// Contamination probability `q`.
    pub q: f64,
    /// Peak width `l` (M4).
    pub peak_width: f64,
    /// Exponent `μ₂` of the rough outlier kernel (M5–M9).
    pub roughness: f64,
    pub grid: Grid,
    pub n: usize,
}

impl ModelSpec {
    /// Defaults: `n = 50` curves on `{k/30}`, `M = 5`, `q = 0.1`, `l = 2/30`
    /// for M0–M4; `q = 0.15` with `μ₂ = 0.2` (M5, M7) or `0.1` (M6, M8, M9)
    /// for the shape models.
    pub fn new(model: ModelId) -> Self {
        let mean = match model {
            ModelId::M7 | ModelId::M8 => MeanFn::Quadratic,
            ModelId::M9 => MeanFn::Cubic,
            _ => MeanFn::Linear,
        };
        let roughness = match model {
            ModelId::M5 | ModelId::M7 => 0.2,
            _ => 0.1,
        };
        Self {
            model,
            mean,
            magnitude: 5.0,
            q: if model.is_shape() { 0.15 } else { 0.1 },
            peak_width: 2.0 / 30.0,
            roughness,
            grid: Grid::unit_interval(30).expect("static grid"),
            n: 50,
        }
    }

    pub fn with_magnitude(mut self, m: f64) -> Self {
        self.magnitude = m;
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_roughness(mut self, mu: f64) -> Self {
        self.roughness = mu;
        self
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = grid;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.q) {
            return Err(Error::InvalidParameter(format!(
                "q must lie in [0, 1), got {}",
                self.q
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if matches!(
            self.model,
            ModelId::M1 | ModelId::M2 | ModelId::M3 | ModelId::M4
        ) && !(self.magnitude > 0.0 && self.magnitude.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "magnitude must be positive, got {}",
                self.magnitude
            )));
        }
        if !(self.peak_width > 0.0) {
            return Err(Error::InvalidParameter(
                "peak width must be positive".into(),
            ));
        }
        if self.model.is_shape() {
            KernelSpec::ExpPow { mu: self.roughness }.validate()?;
        }
        Ok(())
    }

    /// Kernel of the uncontaminated error process.
    pub fn base_kernel(&self) -> KernelSpec {
        if self.model.is_shape() {
            KernelSpec::ExpSq
        } else {
            KernelSpec::ExpAbs
        }
    }

    pub fn truth(&self) -> Vec<f64> {
        self.grid
            .points()
            .iter()
            .map(|&t| self.mean.eval(t))
            .collect()
    }
}

/// One simulated sample.
#[derive(Debug, Clone)]
pub struct Simulated {
    pub dataset: FunctionalDataset,
    /// The mean function on the grid.
    pub truth: Vec<f64>,
    /// `ε_i` for each curve.
    pub outliers: Vec<bool>,
}

/// Factorised covariances for a model, reusable across replicates.
#[derive(Debug, Clone)]
pub struct ModelSampler {
    spec: ModelSpec,
    base: GpSampler,
    rough: Option<GpSampler>,
    truth: Vec<f64>,
}

impl ModelSampler {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        spec.validate()?;
        let base = GpSampler::new(spec.base_kernel(), &spec.grid)?;
        let rough = if spec.model.is_shape() {
            Some(GpSampler::new(
                KernelSpec::ExpPow { mu: spec.roughness },
                &spec.grid,
            )?)
        } else {
            None
        };
        Ok(Self {
            spec: spec.clone(),
            base,
            rough,
            truth: spec.truth(),
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn truth(&self) -> &[f64] {
        &self.truth
    }

    /// Curve `i` of the sample keyed by `seed`. `force` overrides the
    /// Bernoulli contamination indicator.
    ///
    /// Every curve consumes the same draws in the same order (three
    /// uniforms, then two blocks of `p` normals) whatever the model, so
    /// models that differ only in contamination share their base curves.
    pub fn curve(&self, seed: u64, i: usize, force: Option<bool>) -> (Vec<f64>, bool) {
        let mut rng = stream(seed, i as u64);
        let u_eps: f64 = rng.random();
        let u_sign: f64 = rng.random();
        let onset: f64 = rng.random();
        let z_base = self.base.standard_normals(&mut rng);
        let z_rough = self.base.standard_normals(&mut rng);

        let spec = &self.spec;
        let eps = match spec.model {
            ModelId::M0 => false,
            _ => force.unwrap_or(u_eps < spec.q),
        };
        let sign = if u_sign < 0.5 { -1.0 } else { 1.0 };
        let t = spec.grid.points();

        if let (true, Some(rough)) = (eps, &self.rough) {
            let e = rough.correlate(&z_rough);
            return (
                self.truth.iter().zip(&e).map(|(f, e)| f + e).collect(),
                true,
            );
        }

        let e = self.base.correlate(&z_base);
        let mut y: Vec<f64> = self.truth.iter().zip(&e).map(|(f, e)| f + e).collect();
        if eps {
            let m = spec.magnitude;
            for (k, v) in y.iter_mut().enumerate() {
                *v += match spec.model {
                    ModelId::M1 => m,
                    ModelId::M2 => sign * m,
                    ModelId::M3 if t[k] >= onset => sign * m,
                    ModelId::M4 if t[k] >= onset && t[k] <= onset + spec.peak_width => sign * m,
                    _ => 0.0,
                };
            }
        }
        (y, eps)
    }

    fn assemble(
        &self,
        n: usize,
        seed: u64,
        force: impl Fn(usize) -> Option<bool> + Sync,
    ) -> Result<Simulated> {
        let curves: Vec<(Vec<f64>, bool)> = (0..n)
            .into_par_iter()
            .map(|i| self.curve(seed, i, force(i)))
            .collect();
        let outliers = curves.iter().map(|c| c.1).collect();
        let values = curves.into_iter().flat_map(|c| c.0).collect();
        Ok(Simulated {
            dataset: FunctionalDataset::new(self.spec.grid.clone(), values)?,
            truth: self.truth.clone(),
            outliers,
        })
    }

    /// A sample of the spec's size `n`.
    pub fn generate(&self, seed: u64) -> Result<Simulated> {
        self.generate_n(self.spec.n, seed)
    }

    /// A sample of size `n`; the first `m` curves equal those of any other
    /// size drawn with the same seed.
    pub fn generate_n(&self, n: usize, seed: u64) -> Result<Simulated> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        self.assemble(n, seed, |_| None)
    }

    /// A sample of size `n` where exactly the curves listed in `planted`
    /// come from the contamination model.
    pub fn generate_planted(&self, seed: u64, planted: &[usize]) -> Result<Simulated> {
        let n = self.spec.n;
        if let Some(&bad) = planted.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidParameter(format!(
                "planted index {bad} out of range for n = {n}"
            )));
        }
        self.assemble(n, seed, |i| Some(planted.contains(&i)))
    }
}

/// Draw one sample of `model` (see [`ModelSampler::generate`]).
pub fn generate(model: &ModelSpec, seed: u64) -> Result<Simulated> {
    ModelSampler::new(model)?.generate(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_model_ids() {
        assert_eq!("M3".parse::<ModelId>().unwrap(), ModelId::M3);
        assert_eq!("m9".parse::<ModelId>().unwrap(), ModelId::M9);
        assert!("M10".parse::<ModelId>().is_err());
        assert_eq!(ModelId::M7.to_string(), "M7");
    }

    #[test]
    fn defaults_follow_model_family() {
        let m7 = ModelSpec::new(ModelId::M7);
        assert_eq!(
            (m7.mean, m7.q, m7.roughness),
            (MeanFn::Quadratic, 0.15, 0.2)
        );
        let m9 = ModelSpec::new(ModelId::M9);
        assert_eq!((m9.mean, m9.roughness), (MeanFn::Cubic, 0.1));
        let m4 = ModelSpec::new(ModelId::M4);
        assert_eq!(
            (m4.n, m4.q, m4.magnitude, m4.grid.len()),
            (50, 0.1, 5.0, 30)
        );
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(ModelSpec::new(ModelId::M1).with_q(1.0).validate().is_err());
        assert!(ModelSpec::new(ModelId::M1)
            .with_magnitude(0.0)
            .validate()
            .is_err());
        assert!(ModelSpec::new(ModelId::M6)
            .with_roughness(2.5)
            .validate()
            .is_err());
    }

    #[test]
    fn m0_has_no_outliers() {
        let sim = generate(&ModelSpec::new(ModelId::M0).with_q(0.5), 4).unwrap();
        assert!(sim.outliers.iter().all(|&o| !o));
    }

    #[test]
    fn forced_asymmetric_shift() {
        let spec = ModelSpec::new(ModelId::M1).with_q(0.999_999).with_n(20);
        let base = generate(&ModelSpec::new(ModelId::M0).with_n(20), 8).unwrap();
        let sim = generate(&spec, 8).unwrap();
        assert!(sim.outliers.iter().all(|&o| o));
        for (a, b) in sim.dataset.values().iter().zip(base.dataset.values()) {
            assert!((a - b - 5.0).abs() < 1e-12);
        }
    }
}
