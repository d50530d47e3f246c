//! Similarity and effectiveness measures for comparing backbones.
//!
//! Node rankings are always built from weighted degrees in the original
//! network, so two backbones of the same network rank shared nodes the same
//! way. The effectiveness summary, by contrast, describes a backbone's own
//! graph.

use std::collections::HashSet;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::backbone::Backbone;
use crate::betweenness::betweenness;
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};

/// The persistence values reported for rank-biased overlap.
pub const RBO_P_GRID: [f64; 5] = [0.5, 0.7, 0.8, 0.9, 0.98];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankedNode {
    pub node: NodeId,
    pub weighted_degree: f64,
    /// Dense rank, starting at 1.
    pub rank: usize,
}

/// Nodes by weighted degree, descending, ties by ascending index. Equal
/// degrees share a rank and ranks grow by one per distinct degree.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RankedNodeList {
    pub entries: Vec<RankedNode>,
}

impl RankedNodeList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        self.entries.iter().map(|e| e.node).collect()
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.weighted_degree).collect()
    }

    pub fn ranks(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.rank as f64).collect()
    }

    pub fn truncated(&self, len: usize) -> RankedNodeList {
        RankedNodeList {
            entries: self.entries.iter().take(len).copied().collect(),
        }
    }
}

pub fn rank_nodes(g: &WeightedGraph, nodes: &[NodeId]) -> Result<RankedNodeList> {
    let mut scored: Vec<(NodeId, f64)> = Vec::with_capacity(nodes.len());
    for &v in nodes {
        scored.push((v, g.weighted_degree(v)?));
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut entries = Vec::with_capacity(scored.len());
    let mut rank = 0;
    let mut last: Option<f64> = None;
    for (node, weighted_degree) in scored {
        if last != Some(weighted_degree) {
            rank += 1;
            last = Some(weighted_degree);
        }
        entries.push(RankedNode {
            node,
            weighted_degree,
            rank,
        });
    }
    Ok(RankedNodeList { entries })
}

/// `|X ∩ Y| / n` with `n = max(|X|, |Y|)`.
pub fn common_nodes_fraction<T: Eq + Hash>(x: &[T], y: &[T]) -> Result<f64> {
    let n = x.len().max(y.len());
    if n == 0 {
        return Err(Error::Undefined("common nodes of two empty sets".into()));
    }
    let xs: HashSet<&T> = x.iter().collect();
    let common = y.iter().collect::<HashSet<&T>>().intersection(&xs).count();
    Ok(common as f64 / n as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopPreservation {
    pub value: f64,
    pub t: usize,
    /// Set when the backbone has fewer than `t` nodes.
    pub short: bool,
}

/// Share of the network's `t = round(fraction * N)` strongest nodes that are
/// also among the backbone's `t` strongest. Both rankings use weighted degree
/// in `source`.
pub fn top_preservation(source: &WeightedGraph, backbone: &Backbone, fraction: f64) -> Result<TopPreservation> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::param(format!("fraction must lie in (0,1], got {fraction}")));
    }
    let t = (fraction * source.node_count() as f64).round() as usize;
    if t == 0 {
        return Err(Error::param(format!(
            "round({fraction} * {}) selects no nodes",
            source.node_count()
        )));
    }
    let all: Vec<NodeId> = source.nodes().collect();
    let top_source = rank_nodes(source, &all)?.truncated(t).nodes();
    let top_backbone = rank_nodes(source, &backbone.source_nodes)?.truncated(t).nodes();
    let set: HashSet<NodeId> = top_source.into_iter().collect();
    let hit = top_backbone.iter().filter(|v| set.contains(v)).count();
    Ok(TopPreservation {
        value: hit as f64 / t as f64,
        t,
        short: backbone.node_count() < t,
    })
}

/// Rank-biased overlap over the common depth `D = min(|X|, |Y|)`:
/// `sum_d (1-p) p^(d-1) |X[..d] ∩ Y[..d]| / d`, divided by the weight mass of
/// the first `D` depths so that identical lists score exactly 1.
pub fn rank_biased_overlap<T: Eq + Hash + Copy>(x: &[T], y: &[T], p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!("RBO persistence p must lie in (0,1), got {p}")));
    }
    let depth = x.len().min(y.len());
    if depth == 0 {
        return Err(Error::Undefined("rank-biased overlap of an empty list".into()));
    }
    let mut seen_x: HashSet<T> = HashSet::with_capacity(depth);
    let mut seen_y: HashSet<T> = HashSet::with_capacity(depth);
    let mut overlap = 0usize;
    let mut weight = 1.0 - p;
    let (mut sum, mut mass) = (0.0, 0.0);
    for d in 0..depth {
        let (a, b) = (x[d], y[d]);
        if a == b {
            overlap += 1;
        } else {
            overlap += usize::from(seen_y.contains(&a)) + usize::from(seen_x.contains(&b));
        }
        seen_x.insert(a);
        seen_y.insert(b);
        sum += weight * overlap as f64 / (d + 1) as f64;
        mass += weight;
        weight *= p;
    }
    Ok(sum / mass)
}

/// Pearson correlation, accumulated in one pass with running co-moments.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::param(format!(
            "pearson needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Undefined("pearson needs at least two values".into()));
    }
    let (mut mx, mut my) = (0.0, 0.0);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        let k = (i + 1) as f64;
        let dx = a - mx;
        let dy = b - my;
        mx += dx / k;
        my += dy / k;
        sxx += dx * (a - mx);
        syy += dy * (b - my);
        sxy += dx * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("pearson of a constant sequence".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Kendall tau as `(n_c - n_d) / (n (n-1) / 2)`; pairs tied in either
/// sequence count as neither concordant nor discordant. `O(n log n)`: sort by
/// `(x, y)` and count inversions of `y` with a merge sort.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::param(format!(
            "kendall tau needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::Undefined("kendall tau needs at least two values".into()));
    }
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let tied_x = tied_pairs(&pairs, |a, b| a.0 == b.0);
    let tied_xy = tied_pairs(&pairs, |a, b| a.0 == b.0 && a.1 == b.1);
    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut scratch = vec![0.0; n];
    let discordant = count_inversions(&mut ys, &mut scratch);
    // ys is now sorted
    let tied_y = tied_pairs(&ys, |a, b| a == b);

    let total = (n as u64) * (n as u64 - 1) / 2;
    let untied = total + tied_xy - tied_x - tied_y;
    let diff = untied as f64 - 2.0 * discordant as f64;
    Ok(diff / total as f64)
}

// Pairs within runs of equal neighbors in a sorted slice.
fn tied_pairs<T>(sorted: &[T], eq: impl Fn(&T, &T) -> bool) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if eq(&w[0], &w[1]) {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

// Sorts `v` ascending and returns the number of pairs i < j with v[i] > v[j].
fn count_inversions(v: &mut [f64], scratch: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = v.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        count_inversions(left, sl) + count_inversions(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            scratch[k] = v[j];
            inv += (mid - i) as u64;
            j += 1;
        } else {
            scratch[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&scratch[..n]);
    inv
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectivenessSummary {
    pub avg_betweenness: f64,
    pub avg_weighted_degree: f64,
    pub avg_link_weight: f64,
}

/// Mean betweenness and mean weighted degree over the backbone's nodes, and
/// mean weight over its edges, all measured inside the backbone graph.
pub fn effectiveness_summary(g: &WeightedGraph) -> Result<EffectivenessSummary> {
    if g.is_empty() {
        return Err(Error::Undefined("effectiveness of an empty backbone".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::Undefined("average link weight of an edgeless backbone".into()));
    }
    let n = g.node_count() as f64;
    Ok(EffectivenessSummary {
        avg_betweenness: betweenness(g).iter().sum::<f64>() / n,
        avg_weighted_degree: g.strengths().iter().sum::<f64>() / n,
        avg_link_weight: g.total_weight() / g.edge_count() as f64,
    })
}

/// All pairwise measures between two backbones of the same network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairMetrics {
    pub common_nodes: f64,
    /// RBO at each persistence of [`RBO_P_GRID`].
    pub rbo: Vec<f64>,
    pub pearson: Option<f64>,
    pub kendall: Option<f64>,
    pub sizes: (usize, usize),
}

/// Compares two backbones. Rankings use source weighted degrees and the
/// longer ranking is truncated to the shorter one; Pearson sees the degree
/// values, Kendall the dense ranks. Correlations that are undefined (constant
/// sequences, fewer than two nodes) come back as `None`.
pub fn compare_backbones(source: &WeightedGraph, a: &Backbone, b: &Backbone) -> Result<PairMetrics> {
    let common_nodes = common_nodes_fraction(&a.source_nodes, &b.source_nodes)?;
    let ra = rank_nodes(source, &a.source_nodes)?;
    let rb = rank_nodes(source, &b.source_nodes)?;
    let (xa, xb) = (ra.nodes(), rb.nodes());
    let rbo = RBO_P_GRID
        .iter()
        .map(|&p| rank_biased_overlap(&xa, &xb, p))
        .collect::<Result<Vec<f64>>>()?;
    let len = ra.len().min(rb.len());
    let (ta, tb) = (ra.truncated(len), rb.truncated(len));
    Ok(PairMetrics {
        common_nodes,
        rbo,
        pearson: pearson(&ta.degrees(), &tb.degrees()).ok(),
        kendall: kendall_tau(&ta.ranks(), &tb.ranks()).ok(),
        sizes: (a.node_count(), b.node_count()),
    })
}
