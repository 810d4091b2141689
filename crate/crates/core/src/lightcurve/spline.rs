use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Natural cubic spline basis with equally spaced knots on `[0, 1]`,
/// including the boundary knots, in truncated-power form.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalSplineBasis {
    knots: Vec<f64>,
}

impl NaturalSplineBasis {
    pub fn new(n_knots: usize) -> Result<Self> {
        if n_knots < 2 {
            return Err(Error::InvalidParameter(format!(
                "a natural spline needs at least 2 knots, got {n_knots}"
            )));
        }
        let last = (n_knots - 1) as f64;
        Ok(Self {
            knots: (0..n_knots).map(|k| k as f64 / last).collect(),
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of basis functions, equal to the number of knots.
    pub fn dim(&self) -> usize {
        self.knots.len()
    }

    fn d(&self, k: usize, x: f64) -> f64 {
        let cube = |v: f64| if v > 0.0 { v * v * v } else { 0.0 };
        let last = *self.knots.last().expect("at least two knots");
        (cube(x - self.knots[k]) - cube(x - last)) / (last - self.knots[k])
    }

    /// `[1, x, d_1(x) − d_{K−1}(x), …, d_{K−2}(x) − d_{K−1}(x)]`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let k = self.knots.len();
        let mut row = Vec::with_capacity(k);
        row.push(1.0);
        row.push(x);
        let tail = self.d(k - 2, x);
        for j in 0..k - 2 {
            row.push(self.d(j, x) - tail);
        }
        row
    }

    pub fn design(&self, xs: &[f64]) -> DMatrix<f64> {
        let k = self.dim();
        DMatrix::from_fn(xs.len(), k, |i, j| self.eval(xs[i])[j])
    }

    /// Least-squares coefficients; `None` when the design is numerically
    /// rank deficient.
    pub fn fit(&self, xs: &[f64], ys: &[f64]) -> Option<Vec<f64>> {
        let x = self.design(xs);
        let svd = x.svd(true, true);
        let s = &svd.singular_values;
        let smax = s.max();
        if s.len() < self.dim() || !(smax > 0.0) || s.min() < smax * 1e-10 {
            return None;
        }
        let y = DVector::from_column_slice(ys);
        svd.solve(&y, 0.0).ok().map(|c| c.iter().copied().collect())
    }

    pub fn evaluate(&self, coef: &[f64], x: f64) -> f64 {
        self.eval(x).iter().zip(coef).map(|(b, c)| b * c).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_linear_beyond_boundary_knots() {
        let b = NaturalSplineBasis::new(6).unwrap();
        let coef = [0.3, -1.0, 2.0, -0.5, 1.5, 0.7];
        let f = |x: f64| b.evaluate(&coef, x);
        let second = |x: f64| (f(x + 1e-3) - 2.0 * f(x) + f(x - 1e-3)) / 1e-6;
        assert!(second(1.2).abs() < 1e-6);
        assert!(second(-0.2).abs() < 1e-6);
    }

    #[test]
    fn too_few_points_is_rank_deficient() {
        let b = NaturalSplineBasis::new(15).unwrap();
        let xs: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        assert!(b.fit(&xs, &[0.0; 10]).is_none());
    }
}
