//! Disparity filter baseline and size-matched alpha tuning.
//!
//! Under the null model a node of degree `k` spreads its strength uniformly
//! at random over its `k` links. The probability that a link carries a
//! normalized weight at least `p = w / s` is then `(1 - p)^(k - 1)`; a link is
//! significant from a node's side when that probability is below `alpha`.
//! Degree-1 nodes cannot make their only link significant.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};

use super::{Backbone, BackboneParams, Method};

/// Significance of one edge seen from each endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Significance {
    pub from_src: f64,
    pub from_dst: f64,
}

impl Significance {
    /// The edge survives a threshold `alpha` iff this is below it.
    pub fn best(&self) -> f64 {
        self.from_src.min(self.from_dst)
    }
}

fn side(weight: f64, strength: f64, degree: usize) -> f64 {
    if degree < 2 {
        1.0
    } else {
        (1.0 - weight / strength).powi(degree as i32 - 1)
    }
}

/// Per-edge significance, indexed by edge id.
pub fn disparity_significance(g: &WeightedGraph) -> Vec<Significance> {
    let strengths = g.strengths();
    g.edges()
        .iter()
        .map(|e| Significance {
            from_src: side(e.weight, strengths[e.src.0], g.degree(e.src)),
            from_dst: side(e.weight, strengths[e.dst.0], g.degree(e.dst)),
        })
        .collect()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("alpha must lie in (0,1], got {alpha}")))
    }
}

/// Keeps every edge significant at level `alpha` from at least one side,
/// together with its endpoints.
pub fn disparity_filter(g: &WeightedGraph, alpha: f64) -> Result<Backbone> {
    check_alpha(alpha)?;
    let sig = disparity_significance(g);
    Ok(build(g, &sig, alpha))
}

fn build(g: &WeightedGraph, sig: &[Significance], alpha: f64) -> Backbone {
    let keep_edge: Vec<bool> = sig.iter().map(|s| s.best() < alpha).collect();
    let mut keep_node = vec![false; g.node_count()];
    for (e, &k) in g.edges().iter().zip(&keep_edge) {
        if k {
            keep_node[e.src.0] = true;
            keep_node[e.dst.0] = true;
        }
    }
    let graph = g.filtered(&keep_node, |e: EdgeId| keep_edge[e.0]);
    Backbone {
        graph,
        method: Method::Disparity,
        params: BackboneParams {
            alpha: Some(alpha),
            ..Default::default()
        },
        source_nodes: g.nodes().filter(|v| keep_node[v.0]).collect(),
        pre_prune_components: None,
    }
}

fn nodes_below(g: &WeightedGraph, scores: &[f64], threshold: f64, touched: &mut [bool]) -> usize {
    touched.iter_mut().for_each(|t| *t = false);
    let mut count = 0;
    for (e, &score) in g.edges().iter().zip(scores) {
        if score <= threshold {
            for v in [e.src, e.dst] {
                if !touched[v.0] {
                    touched[v.0] = true;
                    count += 1;
                }
            }
        }
    }
    count
}

/// Result of [`tune_alpha`].
#[derive(Clone, Debug)]
pub struct AlphaTuning {
    pub alpha: f64,
    pub backbone: Backbone,
    pub target: usize,
    /// `backbone.node_count() - target`; positive when the node count jumps
    /// past the target.
    pub gap: usize,
}

/// Lowering the returned alpha by this much drops below the target.
pub const ALPHA_RESOLUTION: f64 = 1e-6;

/// Finds the smallest disparity backbone with at least `target` nodes.
///
/// The node count only changes when alpha crosses one of the edges'
/// significance values, so the search bisects over those sorted values and
/// then places alpha just above the critical one: within half the resolution,
/// and below the next distinct value.
pub fn tune_alpha(g: &WeightedGraph, target: usize) -> Result<AlphaTuning> {
    if target == 0 || target > g.node_count() {
        return Err(Error::param(format!(
            "target {target} must lie in 1..={}",
            g.node_count()
        )));
    }
    let sig = disparity_significance(g);
    let scores: Vec<f64> = sig.iter().map(Significance::best).collect();
    let mut levels: Vec<f64> = scores.iter().copied().filter(|&x| x < 1.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut touched = vec![false; g.node_count()];
    let reach = |i: usize, touched: &mut [bool]| nodes_below(g, &scores, levels[i], touched);
    let max_reachable = match levels.len() {
        0 => 0,
        n => reach(n - 1, &mut touched),
    };
    if max_reachable < target {
        return Err(Error::Tuning {
            target,
            max_reachable,
        });
    }
    // smallest level index whose count reaches the target
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if reach(mid, &mut touched) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let critical = levels[lo];
    let next = levels.get(lo + 1).copied().unwrap_or(1.0);
    let alpha = (critical + ALPHA_RESOLUTION / 2.0).min((critical + next) / 2.0);
    let backbone = build(g, &sig, alpha);
    let gap = backbone.node_count() - target;
    Ok(AlphaTuning {
        alpha,
        backbone,
        target,
        gap,
    })
}
