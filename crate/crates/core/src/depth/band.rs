//! Band depth (J = 3) and modified band depth (J = 2).

use rayon::prelude::*;

use crate::data::{DepthVector, FunctionalDataset};
use crate::depth::DepthMethod;
use crate::error::{Error, Result};
use crate::numeric::{choose2, choose3};

#[inline]
fn inside(x: &[f64], lo: &[f64], hi: &[f64]) -> bool {
    // no short-circuit: keeps the cost of every containment test at O(p)
    x.iter()
        .zip(lo)
        .zip(hi)
        .fold(true, |acc, ((&v, &l), &h)| acc & (l <= v) & (v <= h))
}

/// Band depth with bands delimited by 2 and 3 sample curves.
///
/// Reports `Σ_{j=2,3} C(n, j)⁻¹ #{j-subsets whose band contains the curve on
/// the whole grid}` without dividing by `J − 1`, so values lie in `[0, 2]`.
/// Tuples are drawn from the whole sample, including the scored curve.
pub fn band_depth_j3(ds: &FunctionalDataset) -> Result<DepthVector> {
    Ok(DepthVector {
        method: DepthMethod::Bd3,
        values: band_depth_j3_against(ds, ds)?,
        seed: None,
    })
}

/// BD3 of each query with bands formed from reference curves only.
///
/// Exhaustive over all pairs and triples: `O(N³ · n · p)`.
pub fn band_depth_j3_against(
    queries: &FunctionalDataset,
    reference: &FunctionalDataset,
) -> Result<Vec<f64>> {
    let n_ref = reference.n();
    if n_ref < 3 {
        return Err(Error::InsufficientSample {
            method: "BD3",
            required: 3,
            found: n_ref,
        });
    }
    let p = reference.p();
    let nq = queries.n();

    let (pairs, triples) = (0..n_ref)
        .into_par_iter()
        .fold(
            || (vec![0u64; nq], vec![0u64; nq]),
            |(mut pairs, mut triples), j| {
                let (mut lo2, mut hi2) = (vec![0.0; p], vec![0.0; p]);
                let (mut lo3, mut hi3) = (vec![0.0; p], vec![0.0; p]);
                let xj = reference.row(j);
                for k in (j + 1)..n_ref {
                    let xk = reference.row(k);
                    for t in 0..p {
                        lo2[t] = xj[t].min(xk[t]);
                        hi2[t] = xj[t].max(xk[t]);
                    }
                    for (q, x) in queries.rows().enumerate() {
                        pairs[q] += inside(x, &lo2, &hi2) as u64;
                    }
                    for l in (k + 1)..n_ref {
                        let xl = reference.row(l);
                        for t in 0..p {
                            lo3[t] = lo2[t].min(xl[t]);
                            hi3[t] = hi2[t].max(xl[t]);
                        }
                        for (q, x) in queries.rows().enumerate() {
                            triples[q] += inside(x, &lo3, &hi3) as u64;
                        }
                    }
                }
                (pairs, triples)
            },
        )
        .reduce(
            || (vec![0u64; nq], vec![0u64; nq]),
            |(mut a2, mut a3), (b2, b3)| {
                a2.iter_mut().zip(&b2).for_each(|(a, b)| *a += b);
                a3.iter_mut().zip(&b3).for_each(|(a, b)| *a += b);
                (a2, a3)
            },
        );

    let c2 = choose2(n_ref as u64) as f64;
    let c3 = choose3(n_ref as u64) as f64;
    Ok(pairs
        .iter()
        .zip(&triples)
        .map(|(&a, &b)| a as f64 / c2 + b as f64 / c3)
        .collect())
}

/// Modified band depth by direct enumeration of all `C(n, 2)` pairs.
///
/// `O(n³ p)`; kept as the reference implementation for [`mbd_fast`].
pub fn mbd_naive(ds: &FunctionalDataset) -> Result<DepthVector> {
    let n = ds.n();
    if n < 2 {
        return Err(Error::InsufficientSample {
            method: "MBD",
            required: 2,
            found: n,
        });
    }
    let denom = (choose2(n as u64) * ds.p() as u64) as f64;
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = ds.row(i);
            let mut hits = 0u64;
            for j in 0..n {
                let a = ds.row(j);
                for k in (j + 1)..n {
                    let b = ds.row(k);
                    hits += x
                        .iter()
                        .zip(a.iter().zip(b))
                        .filter(|(&v, (&u, &w))| u.min(w) <= v && v <= u.max(w))
                        .count() as u64;
                }
            }
            hits as f64 / denom
        })
        .collect();
    Ok(DepthVector {
        method: DepthMethod::Mbd2,
        values,
        seed: None,
    })
}

/// Modified band depth from per-grid-point order statistics.
///
/// At grid point `t`, a pair's band contains `x(t)` unless both delimiters
/// lie strictly below or both strictly above it, so the number of covering
/// pairs is `C(N,2) − C(b,2) − C(a,2)` with `b`/`a` the counts strictly
/// below/above. Exact under ties; `O(n p log n)` overall.
pub fn mbd_fast(ds: &FunctionalDataset) -> Result<DepthVector> {
    Ok(DepthVector {
        method: DepthMethod::Mbd2,
        values: mbd_against(ds, ds)?,
        seed: None,
    })
}

pub fn mbd_against(queries: &FunctionalDataset, reference: &FunctionalDataset) -> Result<Vec<f64>> {
    let n_ref = reference.n();
    if n_ref < 2 {
        return Err(Error::InsufficientSample {
            method: "MBD",
            required: 2,
            found: n_ref,
        });
    }
    let columns = sorted_columns(reference);
    let c2n = choose2(n_ref as u64);
    let denom = (c2n * reference.p() as u64) as f64;
    Ok(queries
        .values()
        .par_chunks_exact(queries.p())
        .map(|x| {
            let covered: u64 = x
                .iter()
                .zip(&columns)
                .map(|(&v, col)| {
                    let below = col.partition_point(|&c| c < v) as u64;
                    let above = n_ref as u64 - col.partition_point(|&c| c <= v) as u64;
                    c2n - choose2(below) - choose2(above)
                })
                .sum();
            covered as f64 / denom
        })
        .collect())
}

/// Reference values at each grid point, sorted ascending.
pub(crate) fn sorted_columns(reference: &FunctionalDataset) -> Vec<Vec<f64>> {
    (0..reference.p())
        .into_par_iter()
        .map(|t| {
            let mut col = reference.column(t);
            col.sort_unstable_by(f64::total_cmp);
            col
        })
        .collect()
}
