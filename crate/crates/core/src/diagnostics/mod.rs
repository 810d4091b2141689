//! Rank stability, empirical asymptotics of L∞ depth, and timing.

mod asymptotics;
mod timing;

pub use asymptotics::{clt_check, slln_check, CltReport, SllnReport};
pub use timing::{timing_bench, BenchMethod, TimingEntry, TimingReport};

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::FunctionalDataset;
use crate::depth::{depth_against, DepthMethod};
use crate::error::{Error, Result};
use crate::rank::rank_values;
use crate::rng::{derive_seed, stream, tags};

/// Spearman rank correlation.
///
/// For two permutations of `1..=m` this is `1 − 6Σd²/(m(m²−1))` computed in
/// integers; otherwise the Pearson correlation of the inputs.
pub fn spearman(r: &[usize], s: &[usize]) -> Result<f64> {
    if r.len() != s.len() {
        return Err(Error::Dimension {
            expected: r.len(),
            found: s.len(),
        });
    }
    let m = r.len();
    if m < 2 {
        return Err(Error::InvalidParameter(
            "Spearman needs at least 2 pairs".into(),
        ));
    }
    if is_permutation(r) && is_permutation(s) {
        let d2: u128 = r
            .iter()
            .zip(s)
            .map(|(&a, &b)| (a.abs_diff(b) as u128).pow(2))
            .sum();
        let m = m as u128;
        let denom = m * (m * m - 1);
        return Ok(1.0 - (6 * d2) as f64 / denom as f64);
    }
    let x: Vec<f64> = r.iter().map(|&v| v as f64).collect();
    let y: Vec<f64> = s.iter().map(|&v| v as f64).collect();
    Ok(pearson(&x, &y))
}

fn is_permutation(r: &[usize]) -> bool {
    let mut seen = vec![false; r.len()];
    r.iter()
        .all(|&v| (1..=r.len()).contains(&v) && !std::mem::replace(&mut seen[v - 1], true))
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let mx = crate::numeric::mean(x);
    let my = crate::numeric::mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Ranks of the first half-sample under its own depth and under the depth
/// induced by the second half.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRankReport {
    pub method: DepthMethod,
    pub split_seed: Option<u64>,
    pub tie_seed: u64,
    /// Row indices (into the input dataset) of the first half.
    pub first_half: Vec<usize>,
    /// `(r_i, r_i′)`: rank within the first half, rank against the second.
    pub pairs: Vec<(usize, usize)>,
    pub spearman: f64,
}

impl RankRankReport {
    /// Cross-sample ranks of the `k` curves deepest under the first half,
    /// divided by the half size and sorted ascending.
    pub fn deepest(&self, k: usize) -> Result<Vec<f64>> {
        let m = self.pairs.len();
        if k > m {
            return Err(Error::InvalidParameter(format!(
                "k = {k} exceeds the half-sample size {m}"
            )));
        }
        let mut top: Vec<&(usize, usize)> = self.pairs.iter().collect();
        top.sort_by_key(|p| std::cmp::Reverse(p.0));
        let mut out: Vec<f64> = top[..k].iter().map(|p| p.1 as f64 / m as f64).collect();
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// CSV of the rank pairs, one row per first-half curve.
    pub fn to_csv(&self, ds: &FunctionalDataset) -> String {
        let mut out = String::from("label,rank_own,rank_cross\n");
        for (&i, &(a, b)) in self.first_half.iter().zip(&self.pairs) {
            let _ = writeln!(out, "{},{a},{b}", ds.label(i));
        }
        out
    }

    /// Scatter plot of the rank pairs with the identity line.
    pub fn to_svg(&self) -> String {
        let size = 400.0;
        let pad = 40.0;
        let m = self.pairs.len().max(1) as f64;
        let scale = |r: usize| pad + (r as f64 - 1.0) / (m - 1.0).max(1.0) * (size - 2.0 * pad);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<line x1="{pad}" y1="{}" x2="{}" y2="{pad}" stroke="gray" stroke-dasharray="4 3"/>"#,
            size - pad,
            size - pad
        );
        for &(a, b) in &self.pairs {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="black" fill-opacity="0.6"/>"#,
                scale(a),
                size - scale(b)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">rank within half 1</text>"#,
            size / 2.0,
            size - 10.0
        );
        let _ = writeln!(
            s,
            r#"<text x="12" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 12 {})">rank against half 2</text>"#,
            size / 2.0,
            size / 2.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{pad}" y="20" font-size="12">{} (Spearman {:.3})</text>"#,
            self.method, self.spearman
        );
        s.push_str("</svg>\n");
        s
    }
}

/// Rank-rank comparison on a random half split.
///
/// A uniformly random subset of `⌊n/2⌋` curves forms the first half; the
/// rest is the second. Depth ties are broken at random, independently in
/// the two rankings, from `tie_seed`.
pub fn rank_rank(
    ds: &FunctionalDataset,
    method: DepthMethod,
    split_seed: u64,
    tie_seed: u64,
) -> Result<RankRankReport> {
    if ds.n() < 4 {
        return Err(Error::InsufficientSample {
            method: "rank-rank",
            required: 4,
            found: ds.n(),
        });
    }
    let mut idx: Vec<usize> = (0..ds.n()).collect();
    idx.shuffle(&mut stream(split_seed, 0));
    let m = ds.n() / 2;
    let (first, second) = idx.split_at(m);
    let mut report = rank_rank_halves(&ds.subset(first)?, &ds.subset(second)?, method, tie_seed)?;
    report.first_half = first.to_vec();
    report.split_seed = Some(split_seed);
    Ok(report)
}

/// Rank-rank comparison for explicitly given halves.
pub fn rank_rank_halves(
    first: &FunctionalDataset,
    second: &FunctionalDataset,
    method: DepthMethod,
    tie_seed: u64,
) -> Result<RankRankReport> {
    let own = depth_against(first, first, method)?;
    let cross = depth_against(first, second, method)?;
    let r1 = rank_values(&own, tie_seed)?.ranks;
    let r2 = rank_values(&cross, derive_seed(tie_seed, tags::TIES, 1))?.ranks;
    Ok(RankRankReport {
        method,
        split_seed: None,
        tie_seed,
        first_half: (0..first.n()).collect(),
        spearman: spearman(&r1, &r2)?,
        pairs: r1.into_iter().zip(r2).collect(),
    })
}

/// Normalised cross-sample ranks of the `k` deepest first-half curves.
pub fn deepest_stability(
    ds: &FunctionalDataset,
    method: DepthMethod,
    k: usize,
    split_seed: u64,
    tie_seed: u64,
) -> Result<Vec<f64>> {
    rank_rank(ds, method, split_seed, tie_seed)?.deepest(k)
}
