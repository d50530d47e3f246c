//! Connectivity-preserving removal of light edges.

use std::collections::VecDeque;

use crate::graph::{EdgeId, NodeId, WeightedGraph};

use super::PrunePolicy;

/// Removes edges from lightest to heaviest (ties by canonical `(src, dst)`)
/// while no removal splits a component. See [`PrunePolicy`] for what happens
/// at the first edge that would.
pub fn prune_low_weight_edges(sub: &WeightedGraph, policy: PrunePolicy) -> WeightedGraph {
    let mut order: Vec<EdgeId> = (0..sub.edge_count()).map(EdgeId).collect();
    // edges are already in (src, dst) order, the stable sort keeps it for ties
    order.sort_by(|a, b| sub.edge(*a).weight.total_cmp(&sub.edge(*b).weight));

    let mut alive = vec![true; sub.edge_count()];
    let mut search = PathSearch::new(sub.node_count());
    for e in order {
        let edge = sub.edge(e);
        alive[e.0] = false;
        if !search.connected(sub, &alive, edge.src, edge.dst) {
            alive[e.0] = true;
            if policy == PrunePolicy::HaltOnBridge {
                break;
            }
        }
    }
    let all_nodes = vec![true; sub.node_count()];
    sub.filtered(&all_nodes, |e| alive[e.0])
}

/// Bidirectional breadth-first search over the live edges, always growing
/// the smaller frontier. When the edge under test is a bridge, the search
/// exhausts the smaller side first, so cost follows the smaller side.
struct PathSearch {
    mark: Vec<u32>,
    stamp: u32,
    fwd: VecDeque<NodeId>,
    bwd: VecDeque<NodeId>,
}

impl PathSearch {
    fn new(n: usize) -> Self {
        PathSearch {
            mark: vec![0; n],
            stamp: 0,
            fwd: VecDeque::new(),
            bwd: VecDeque::new(),
        }
    }

    fn connected(&mut self, g: &WeightedGraph, alive: &[bool], u: NodeId, v: NodeId) -> bool {
        // two marks per query: stamp for u's side, stamp + 1 for v's side
        if self.stamp >= u32::MAX - 2 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 0;
        }
        self.stamp += 2;
        let (from_u, from_v) = (self.stamp - 1, self.stamp);
        self.fwd.clear();
        self.bwd.clear();
        self.mark[u.0] = from_u;
        self.mark[v.0] = from_v;
        self.fwd.push_back(u);
        self.bwd.push_back(v);

        while !self.fwd.is_empty() && !self.bwd.is_empty() {
            let forward = self.fwd.len() <= self.bwd.len();
            let (queue, own, other) = if forward {
                (&mut self.fwd, from_u, from_v)
            } else {
                (&mut self.bwd, from_v, from_u)
            };
            // expand one full layer
            for _ in 0..queue.len() {
                let x = queue.pop_front().expect("layer size checked");
                for &(y, e) in g.neighbors(x) {
                    if !alive[e.0] {
                        continue;
                    }
                    let m = self.mark[y.0];
                    if m == other {
                        return true;
                    }
                    if m != own {
                        self.mark[y.0] = own;
                        queue.push_back(y);
                    }
                }
            }
        }
        false
    }
}
