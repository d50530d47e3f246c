//! Node betweenness on hop-count shortest paths (Brandes accumulation).

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::graph::{NodeId, WeightedGraph};

// Sources are processed in fixed-size chunks and the chunk partials summed in
// chunk order, so the floating-point result does not depend on scheduling.
const SOURCE_CHUNK: usize = 64;

/// Normalized betweenness per node, in `[0, 1]`.
///
/// Every unordered pair `{s, t}` contributes the fraction of its shortest
/// paths passing through `v`; the sum is divided by `(n-1)(n-2)/2` with `n`
/// the node count of the whole graph. Graphs with fewer than 3 nodes get all
/// zeros.
pub fn betweenness(g: &WeightedGraph) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut ws = Workspace::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                ws.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();

    let mut total = vec![0.0; n];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    // each unordered pair was counted from both ends
    let scale = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
    total.iter_mut().for_each(|b| *b *= scale);
    total
}

struct Workspace {
    dist: Vec<usize>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            dist: vec![usize::MAX; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, g: &WeightedGraph, s: usize, acc: &mut [f64]) {
        for &v in &self.order {
            self.dist[v] = usize::MAX;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
        }
        self.order.clear();

        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let dv = self.dist[v];
            for &(w, _) in g.neighbors(NodeId(v)) {
                let w = w.0;
                if self.dist[w] == usize::MAX {
                    self.dist[w] = dv + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == dv + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }

        for &w in self.order.iter().rev() {
            let dw = self.dist[w];
            for &(v, _) in g.neighbors(NodeId(w)) {
                let v = v.0;
                if self.dist[v] != usize::MAX && self.dist[v] + 1 == dw {
                    self.delta[v] += self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}
