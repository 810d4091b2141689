use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::Grid;
use crate::error::{Error, Result};
use crate::rng::{stream, StreamRng};

/// Largest diagonal jitter tried before giving up on a factorisation.
pub const MAX_JITTER: f64 = 1e-6;
const START_JITTER: f64 = 1e-12;

/// Stationary covariance families `exp(−|t − s|^κ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `exp(−|t − s|)`
    ExpAbs,
    /// `exp(−|t − s|²)`
    ExpSq,
    /// `exp(−|t − s|^μ)` with `0 < μ < 2`.
    ExpPow { mu: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::ExpPow { mu } if !(mu > 0.0 && mu < 2.0) => Err(Error::InvalidParameter(
                format!("exp_pow exponent must lie in (0, 2), got {mu}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn cov(&self, s: f64, t: f64) -> f64 {
        let d = (t - s).abs();
        match *self {
            KernelSpec::ExpAbs => (-d).exp(),
            KernelSpec::ExpSq => (-d * d).exp(),
            KernelSpec::ExpPow { mu } => (-d.powf(mu)).exp(),
        }
    }
}

/// Lower-triangular factor of a kernel's covariance on a grid.
#[derive(Debug, Clone)]
pub struct GpSampler {
    kernel: KernelSpec,
    factor: DMatrix<f64>,
    jitter: f64,
}

impl GpSampler {
    /// Factorise `K + δI`, starting at `δ = 1e−12` and growing tenfold up to
    /// [`MAX_JITTER`].
    pub fn new(kernel: KernelSpec, grid: &Grid) -> Result<Self> {
        kernel.validate()?;
        let t = grid.points();
        let p = t.len();
        let cov = DMatrix::from_fn(p, p, |i, j| kernel.cov(t[i], t[j]));
        let mut jitter = START_JITTER;
        while jitter <= MAX_JITTER * (1.0 + 1e-9) {
            let shifted = &cov + DMatrix::identity(p, p) * jitter;
            if let Some(chol) = shifted.cholesky() {
                return Ok(Self {
                    kernel,
                    factor: chol.l(),
                    jitter,
                });
            }
            jitter *= 10.0;
        }
        Err(Error::Numerical(format!(
            "covariance of {kernel:?} is not positive definite even with jitter {MAX_JITTER}"
        )))
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    /// Diagonal jitter that made the factorisation succeed.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn dim(&self) -> usize {
        self.factor.nrows()
    }

    /// Draw `p` standard normals from `rng`.
    pub fn standard_normals(&self, rng: &mut StreamRng) -> Vec<f64> {
        (0..self.dim())
            .map(|_| StandardNormal.sample(rng))
            .collect()
    }

    /// Correlate a vector of standard normals: `out = L z`.
    pub fn correlate(&self, z: &[f64]) -> Vec<f64> {
        let p = self.dim();
        (0..p)
            .map(|i| (0..=i).map(|j| self.factor[(i, j)] * z[j]).sum())
            .collect()
    }

    pub fn draw(&self, rng: &mut StreamRng) -> Vec<f64> {
        let z = self.standard_normals(rng);
        self.correlate(&z)
    }
}

/// `n` independent zero-mean draws, row-major `n × p`. Row `i` comes from
/// stream `i` of `seed`, so it does not depend on `n`.
pub fn sample_gp(kernel: KernelSpec, grid: &Grid, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let sampler = GpSampler::new(kernel, grid)?;
    Ok((0..n)
        .flat_map(|i| sampler.draw(&mut stream(seed, i as u64)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_cov(draws: &[f64], p: usize) -> Vec<f64> {
        let n = draws.len() / p;
        let mut c = vec![0.0; p * p];
        for row in draws.chunks_exact(p) {
            for i in 0..p {
                for j in 0..p {
                    c[i * p + j] += row[i] * row[j];
                }
            }
        }
        c.iter().map(|v| v / n as f64).collect()
    }

    #[test]
    fn two_point_covariance_matches_kernel() {
        let grid = Grid::new(vec![0.0, 1.0]).unwrap();
        for kernel in [
            KernelSpec::ExpAbs,
            KernelSpec::ExpSq,
            KernelSpec::ExpPow { mu: 0.5 },
        ] {
            let draws = sample_gp(kernel, &grid, 50_000, 3).unwrap();
            let c = sample_cov(&draws, 2);
            let off = kernel.cov(0.0, 1.0);
            for (got, want) in c.iter().zip([1.0, off, off, 1.0]) {
                assert!((got - want).abs() < 0.02, "{kernel:?}: {got} vs {want}");
            }
        }
        assert!((KernelSpec::ExpAbs.cov(0.0, 1.0) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rough_kernel_factorises_with_small_jitter() {
        let grid = Grid::unit_interval(30).unwrap();
        let sampler = GpSampler::new(KernelSpec::ExpPow { mu: 0.1 }, &grid).unwrap();
        assert!(sampler.jitter() <= 1e-8);
        let draws = sample_gp(KernelSpec::ExpPow { mu: 0.1 }, &grid, 20_000, 5).unwrap();
        let c = sample_cov(&draws, 30);
        for k in 0..30 {
            assert!((c[k * 30 + k] - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn smooth_kernel_needs_jitter_but_factorises() {
        let grid = Grid::unit_interval(30).unwrap();
        let sampler = GpSampler::new(KernelSpec::ExpSq, &grid).unwrap();
        assert!(sampler.jitter() <= MAX_JITTER);
    }

    #[test]
    fn sampling_is_deterministic() {
        let grid = Grid::unit_interval(10).unwrap();
        let a = sample_gp(KernelSpec::ExpAbs, &grid, 5, 9).unwrap();
        let b = sample_gp(KernelSpec::ExpAbs, &grid, 5, 9).unwrap();
        assert_eq!(a, b);
        // rows do not depend on how many are drawn
        let c = sample_gp(KernelSpec::ExpAbs, &grid, 3, 9).unwrap();
        assert_eq!(&a[..30], &c[..]);
    }

    #[test]
    fn invalid_exponent() {
        let grid = Grid::unit_interval(3).unwrap();
        assert!(GpSampler::new(KernelSpec::ExpPow { mu: 2.0 }, &grid).is_err());
        assert!(GpSampler::new(KernelSpec::ExpPow { mu: 0.0 }, &grid).is_err());
    }
}
