//! Size control: drop the weakest nodes until the backbone fits `floor(s * N)`.

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};
use crate::structure::articulation_points;

/// `floor(s * n)`, validating `s` and rejecting an empty target.
pub fn size_target(s: f64, n: usize) -> Result<usize> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::param(format!("s must lie in (0,1], got {s}")));
    }
    let target = (s * n as f64).floor() as usize;
    if target == 0 {
        return Err(Error::param(format!(
            "size target floor({s} * {n}) is zero"
        )));
    }
    Ok(target)
}

/// Removes lowest-weighted-degree nodes (degree within the current
/// sub-network, larger index first on ties) until at most `floor(s * n_source)`
/// remain. A node whose removal would split its component is passed over;
/// when only such nodes are left the loop stops early.
pub fn enforce_size(sub: &WeightedGraph, s: f64, n_source: usize) -> Result<WeightedGraph> {
    let target = size_target(s, n_source)?;
    Ok(shrink(sub, target, None).0)
}

/// Core of [`enforce_size`]. `fixed_rank` replaces the live weighted degree
/// with a fixed score per node. Returns the reduced graph and the `sub`
/// indices it kept.
pub(super) fn shrink(
    sub: &WeightedGraph,
    target: usize,
    fixed_rank: Option<&[f64]>,
) -> (WeightedGraph, Vec<NodeId>) {
    let mut alive = vec![true; sub.node_count()];
    let mut current = sub.clone();
    // current index -> sub index
    let mut kept: Vec<NodeId> = sub.nodes().collect();

    while current.node_count() > target {
        let cut = articulation_points(&current);
        let score: Vec<f64> = match fixed_rank {
            Some(rank) => kept.iter().map(|v| rank[v.0]).collect(),
            None => current.strengths(),
        };
        let victim = current
            .nodes()
            .filter(|v| !cut[v.0])
            .min_by(|a, b| score[a.0].total_cmp(&score[b.0]).then(b.cmp(a)));
        let Some(victim) = victim else {
            break;
        };
        alive[kept[victim.0].0] = false;
        current = sub.filtered(&alive, |_| true);
        kept.remove(victim.0);
    }
    (current, kept)
}
