use std::time::Instant;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{FunctionalDataset, Grid};
use crate::depth::{compute_depth, mbd_naive, DepthMethod};
use crate::error::{Error, Result};
use crate::numeric::{median, ols_slope};
use crate::rng::stream;

/// A timed computation of all sample depths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchMethod {
    Depth(DepthMethod),
    /// Pair enumeration for modified band depth.
    MbdNaive,
}

impl BenchMethod {
    pub fn name(&self) -> String {
        match self {
            BenchMethod::Depth(m) => m.name().to_string(),
            BenchMethod::MbdNaive => "MBD-naive".to_string(),
        }
    }

    fn run(&self, ds: &FunctionalDataset) -> Result<()> {
        match self {
            BenchMethod::Depth(m) => compute_depth(ds, *m).map(|_| ()),
            BenchMethod::MbdNaive => mbd_naive(ds).map(|_| ()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingEntry {
    pub method: String,
    pub n: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub p: usize,
    pub seed: u64,
    pub entries: Vec<TimingEntry>,
    /// Least-squares slope of `ln seconds` on `ln n`, per method.
    pub slopes: Vec<(String, f64)>,
}

impl TimingReport {
    pub fn slope(&self, method: &str) -> Option<f64> {
        self.slopes.iter().find(|s| s.0 == method).map(|s| s.1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,n,seconds\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{:.6e}\n", e.method, e.n, e.seconds));
        }
        out
    }
}

fn gaussian_dataset(n: usize, p: usize, seed: u64) -> Result<FunctionalDataset> {
    let mut rng = stream(seed, n as u64);
    let values = (0..n * p)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    FunctionalDataset::new(Grid::unit_interval(p)?, values)
}

/// Median of three single-threaded wall-clock timings (after one discarded
/// warm-up run) of each method at each sample size, on i.i.d. Gaussian data
/// with `p` grid points.
pub fn timing_bench(
    plan: &[(BenchMethod, Vec<usize>)],
    p: usize,
    seed: u64,
) -> Result<TimingReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let mut entries = Vec::new();
    let mut slopes = Vec::new();
    for (method, schedule) in plan {
        if schedule.is_empty() {
            continue;
        }
        let mut secs = Vec::with_capacity(schedule.len());
        for &n in schedule {
            let ds = gaussian_dataset(n, p, seed)?;
            let t = pool.install(|| -> Result<f64> {
                method.run(&ds)?;
                let mut runs = [0.0; 3];
                for r in runs.iter_mut() {
                    let start = Instant::now();
                    method.run(&ds)?;
                    *r = start.elapsed().as_secs_f64();
                }
                Ok(median(&runs))
            })?;
            entries.push(TimingEntry {
                method: method.name(),
                n,
                seconds: t,
            });
            secs.push(t);
        }
        if schedule.len() >= 2 {
            let ln_n: Vec<f64> = schedule.iter().map(|&n| (n as f64).ln()).collect();
            let ln_t: Vec<f64> = secs.iter().map(|t| t.max(1e-9).ln()).collect();
            slopes.push((method.name(), ols_slope(&ln_n, &ln_t)));
        }
    }
    Ok(TimingReport {
        p,
        seed,
        entries,
        slopes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench_reports_every_point() {
        let plan = vec![
            (BenchMethod::Depth(DepthMethod::Linf), vec![10, 20]),
            (BenchMethod::MbdNaive, vec![10]),
        ];
        let r = timing_bench(&plan, 5, 1).unwrap();
        assert_eq!(r.entries.len(), 3);
        assert!(r.entries.iter().all(|e| e.seconds > 0.0));
        assert!(r.slope("LinfD").is_some());
        assert!(r.slope("MBD-naive").is_none());
        assert_eq!(r.to_csv().lines().count(), 4);
    }
}
