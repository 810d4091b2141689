//! Depth ranking.

use rand::Rng;

use crate::data::{DepthVector, RankVector};
use crate::error::{Error, Result};
use crate::rng::stream;

/// Rank curves from least deep (1) to deepest (n).
///
/// Tied depths occupy consecutive rank positions in an order fixed by a
/// uniform shuffle drawn from `tie_seed`.
pub fn rank_curves(depth: &DepthVector, tie_seed: u64) -> Result<RankVector> {
    rank_values(&depth.values, tie_seed)
}

pub fn rank_values(values: &[f64], tie_seed: u64) -> Result<RankVector> {
    if values.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot rank an empty depth vector".into(),
        ));
    }
    let mut rng = stream(tie_seed, 0);
    let keys: Vec<u64> = (0..values.len()).map(|_| rng.random()).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .total_cmp(&values[b])
            .then(keys[a].cmp(&keys[b]))
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0; values.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    Ok(RankVector { ranks, tie_seed })
}

/// `r_i = #{j : d_j <= d_i}`: every member of a tie group receives the
/// group's highest position.
pub fn count_ranks(values: &[f64]) -> Vec<usize> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    values
        .iter()
        .map(|v| sorted.partition_point(|s| s.total_cmp(v).is_le()))
        .collect()
}
