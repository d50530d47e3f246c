//! Connectivity primitives: components, bridges, articulation points.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, WeightedGraph};

/// Component id per node plus the number of components. Components are
/// numbered in order of their smallest node index.
pub fn component_labels(g: &WeightedGraph) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &(w, _) in g.neighbors(NodeId(v)) {
                if comp[w.0] == usize::MAX {
                    comp[w.0] = count;
                    stack.push(w.0);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

pub fn component_count(g: &WeightedGraph) -> usize {
    component_labels(g).1
}

/// Partition of the nodes into connected components, each sorted ascending.
pub fn connected_components(g: &WeightedGraph) -> Vec<Vec<NodeId>> {
    let (comp, count) = component_labels(g);
    let mut out = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        out[c].push(NodeId(v));
    }
    out
}

/// Low-link data from one iterative DFS over the whole graph.
struct LowLink {
    bridge: Vec<bool>,
    articulation: Vec<bool>,
}

fn low_link(g: &WeightedGraph) -> LowLink {
    let n = g.node_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut bridge = vec![false; g.edge_count()];
    let mut articulation = vec![false; n];
    let mut timer = 0;
    // (node, edge used to enter it, next neighbor position)
    let mut stack: Vec<(usize, Option<EdgeId>, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        stack.push((root, None, 0));
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, parent_edge, pos) = stack[top];
            let nbrs = g.neighbors(NodeId(v));
            if pos < nbrs.len() {
                let (w, e) = nbrs[pos];
                stack[top].2 += 1;
                if Some(e) == parent_edge {
                    continue;
                }
                if disc[w.0] == usize::MAX {
                    disc[w.0] = timer;
                    low[w.0] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w.0, Some(e), 0));
                } else {
                    low[v] = low[v].min(disc[w.0]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridge[parent_edge.expect("non-root has a parent edge").0] = true;
                    }
                    if p != root && low[v] >= disc[p] {
                        articulation[p] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            articulation[root] = true;
        }
    }
    LowLink {
        bridge,
        articulation,
    }
}

/// Bridge flag per edge id.
pub fn bridges(g: &WeightedGraph) -> Vec<bool> {
    low_link(g).bridge
}

/// Articulation flag per node: removing the node increases the component
/// count.
pub fn articulation_points(g: &WeightedGraph) -> Vec<bool> {
    low_link(g).articulation
}

/// Whether removing the edge between `u` and `v` increases the number of
/// connected components.
pub fn is_bridge(g: &WeightedGraph, u: NodeId, v: NodeId) -> Result<bool> {
    let e = g
        .find_edge(u, v)
        .ok_or_else(|| Error::UnknownEdge(u.to_string(), v.to_string()))?;
    Ok(bridges(g)[e.0])
}
