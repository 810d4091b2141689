//! Brute-force reference implementations and random data for tests.
#![allow(dead_code)]

use fdepth::{FunctionalDataset, Grid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random `n × p` dataset on `{k/p}`. With `ties`, values are drawn from a
/// small integer lattice and some columns are duplicated, so pointwise ties
/// are common.
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, p: usize, ties: bool) -> FunctionalDataset {
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..p)
                .map(|_| {
                    if ties {
                        rng.random_range(0..4) as f64
                    } else {
                        rng.random_range(-3.0..3.0)
                    }
                })
                .collect()
        })
        .collect();
    if ties && p > 1 {
        let src = rng.random_range(0..p);
        let dst = rng.random_range(0..p);
        for r in rows.iter_mut() {
            r[dst] = r[src];
        }
        if n > 1 {
            rows[n - 1] = rows[0].clone();
        }
    }
    FunctionalDataset::from_rows(Grid::unit_interval(p).unwrap(), &rows).unwrap()
}

fn rows(ds: &FunctionalDataset) -> Vec<Vec<f64>> {
    ds.rows().map(|r| r.to_vec()).collect()
}

pub fn linf_oracle(ds: &FunctionalDataset) -> Vec<f64> {
    let x = rows(ds);
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut total = 0.0;
            for j in 0..n {
                let mut m = 0.0f64;
                for t in 0..x[i].len() {
                    m = m.max((x[i][t] - x[j][t]).abs());
                }
                total += m;
            }
            1.0 / (1.0 + total / n as f64)
        })
        .collect()
}

fn inside(x: &[f64], band: &[&Vec<f64>]) -> bool {
    (0..x.len()).all(|t| {
        let lo = band.iter().map(|b| b[t]).fold(f64::INFINITY, f64::min);
        let hi = band.iter().map(|b| b[t]).fold(f64::NEG_INFINITY, f64::max);
        lo <= x[t] && x[t] <= hi
    })
}

/// Enumerates every 2- and 3-subset of curves.
pub fn bd3_oracle(ds: &FunctionalDataset) -> Vec<f64> {
    let x = rows(ds);
    let n = x.len();
    let (mut pairs, mut triples) = (vec![0u64; n], vec![0u64; n]);
    for a in 0..n {
        for b in a + 1..n {
            for (i, xi) in x.iter().enumerate() {
                if inside(xi, &[&x[a], &x[b]]) {
                    pairs[i] += 1;
                }
            }
            for c in b + 1..n {
                for (i, xi) in x.iter().enumerate() {
                    if inside(xi, &[&x[a], &x[b], &x[c]]) {
                        triples[i] += 1;
                    }
                }
            }
        }
    }
    let c2 = (n * (n - 1) / 2) as f64;
    let c3 = (n * (n - 1) * (n - 2) / 6) as f64;
    (0..n)
        .map(|i| pairs[i] as f64 / c2 + triples[i] as f64 / c3)
        .collect()
}

pub fn mbd_oracle(ds: &FunctionalDataset) -> Vec<f64> {
    let x = rows(ds);
    let (n, p) = (x.len(), ds.p());
    (0..n)
        .map(|i| {
            let mut total = 0.0;
            let mut count = 0.0;
            for a in 0..n {
                for b in a + 1..n {
                    let hits = (0..p)
                        .filter(|&t| {
                            x[a][t].min(x[b][t]) <= x[i][t] && x[i][t] <= x[a][t].max(x[b][t])
                        })
                        .count();
                    total += hits as f64 / p as f64;
                    count += 1.0;
                }
            }
            total / count
        })
        .collect()
}

pub fn hrd_oracle(ds: &FunctionalDataset) -> Vec<f64> {
    let x = rows(ds);
    let n = x.len();
    (0..n)
        .map(|i| {
            let below = (0..n)
                .filter(|&j| x[j].iter().zip(&x[i]).all(|(a, b)| a <= b))
                .count();
            let above = (0..n)
                .filter(|&j| x[j].iter().zip(&x[i]).all(|(a, b)| a >= b))
                .count();
            below.min(above) as f64 / n as f64
        })
        .collect()
}

pub fn mhrd_oracle(ds: &FunctionalDataset) -> Vec<f64> {
    let x = rows(ds);
    let (n, p) = (x.len(), ds.p());
    (0..n)
        .map(|i| {
            let mut below = 0usize;
            let mut above = 0usize;
            for xj in &x {
                for t in 0..p {
                    below += (xj[t] <= x[i][t]) as usize;
                    above += (xj[t] >= x[i][t]) as usize;
                }
            }
            below.min(above) as f64 / (n * p) as f64
        })
        .collect()
}

/// Direct summation with trapezoid weights `w`.
pub fn spatd_oracle(ds: &FunctionalDataset, w: &[f64]) -> Vec<f64> {
    let x = rows(ds);
    let (n, p) = (x.len(), ds.p());
    (0..n)
        .map(|i| {
            let mut s = vec![0.0; p];
            for xj in &x {
                let norm: f64 = (0..p)
                    .map(|t| w[t] * (x[i][t] - xj[t]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if norm > 0.0 {
                    for t in 0..p {
                        s[t] += (x[i][t] - xj[t]) / norm;
                    }
                }
            }
            let len: f64 = (0..p)
                .map(|t| w[t] * (s[t] / n as f64).powi(2))
                .sum::<f64>()
                .sqrt();
            (1.0 - len).clamp(0.0, 1.0)
        })
        .collect()
}

/// Trapezoid weights computed independently of the library.
pub fn trapezoid(points: &[f64]) -> Vec<f64> {
    let p = points.len();
    let mut w = vec![0.0; p];
    for k in 0..p - 1 {
        let h = points[k + 1] - points[k];
        w[k] += h / 2.0;
        w[k + 1] += h / 2.0;
    }
    w
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
