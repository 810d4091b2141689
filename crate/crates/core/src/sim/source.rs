use crate::data::Grid;
use crate::error::{Error, Result};
use crate::sim::ModelSampler;

/// A distribution over curves on a fixed grid from which curve `i` of the
/// sample keyed by `seed` can be drawn independently of all others.
pub trait CurveSource: Sync {
    fn grid(&self) -> &Grid;
    fn draw(&self, seed: u64, i: usize) -> Vec<f64>;
}

impl CurveSource for ModelSampler {
    fn grid(&self) -> &Grid {
        &self.spec().grid
    }

    fn draw(&self, seed: u64, i: usize) -> Vec<f64> {
        self.curve(seed, i, None).0
    }
}

/// Degenerate distribution putting all mass on one curve.
#[derive(Debug, Clone)]
pub struct PointMass {
    grid: Grid,
    curve: Vec<f64>,
}

impl PointMass {
    pub fn new(grid: Grid, curve: Vec<f64>) -> Result<Self> {
        if curve.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                found: curve.len(),
            });
        }
        Ok(Self { grid, curve })
    }
}

impl CurveSource for PointMass {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn draw(&self, _seed: u64, _i: usize) -> Vec<f64> {
        self.curve.clone()
    }
}
