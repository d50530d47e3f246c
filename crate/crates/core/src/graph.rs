//! Weighted undirected graph with dense node indices.
//!
//! Node indices are fixed when the graph is built: the loader assigns them in
//! order of first appearance, and every subgraph keeps its nodes in ascending
//! source-index order. All tie-breaks in the crate use these indices, which is
//! what makes the extractors deterministic for a given input file.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense index of a node inside one [`WeightedGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

/// Dense index of an edge inside one [`WeightedGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An undirected edge stored in canonical orientation (`src < dst`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: f64,
}

impl Edge {
    /// The endpoint that is not `v`.
    #[inline]
    pub fn other(&self, v: NodeId) -> NodeId {
        if self.src == v {
            self.dst
        } else {
            self.src
        }
    }
}

/// Undirected graph with strictly positive edge weights, no self-loops and no
/// parallel edges. Immutable once built.
#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    // sorted by (src, dst), so edge ids follow the canonical pair order
    edges: Vec<Edge>,
    // per node, sorted by neighbor index
    adj: Vec<Vec<(NodeId, EdgeId)>>,
}

impl WeightedGraph {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Looks a node up by its input label.
    pub fn node(&self, label: &str) -> Result<NodeId> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.labels.len()
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v.to_string()))
        }
    }

    /// Neighbors of `v` with the connecting edge, ascending by neighbor index.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adj[v.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v.0].len()
    }

    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        if !self.contains(u) || !self.contains(v) {
            return None;
        }
        let list = &self.adj[u.0];
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    /// Sum of the weights of the edges incident to `v`.
    pub fn weighted_degree(&self, v: NodeId) -> Result<f64> {
        self.check(v)?;
        Ok(self.strength(v))
    }

    #[inline]
    pub(crate) fn strength(&self, v: NodeId) -> f64 {
        self.adj[v.0]
            .iter()
            .map(|&(_, e)| self.edges[e.0].weight)
            .sum()
    }

    /// Weighted degree of every node, indexed by node.
    pub fn strengths(&self) -> Vec<f64> {
        self.nodes().map(|v| self.strength(v)).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// The subgraph induced by `keep`. Nodes keep their relative order, so the
    /// result's indices are monotone in the source indices.
    pub fn induced_subgraph(&self, keep: &[NodeId]) -> Result<WeightedGraph> {
        let mut mask = vec![false; self.node_count()];
        for &v in keep {
            self.check(v)?;
            mask[v.0] = true;
        }
        Ok(self.filtered(&mask, |_| true))
    }

    /// Nodes with `node_mask` set plus the edges between them accepted by
    /// `keep_edge`.
    pub(crate) fn filtered(
        &self,
        node_mask: &[bool],
        mut keep_edge: impl FnMut(EdgeId) -> bool,
    ) -> WeightedGraph {
        let mut b = GraphBuilder::with_capacity(node_mask.iter().filter(|&&m| m).count());
        let mut remap = vec![usize::MAX; self.node_count()];
        for v in self.nodes() {
            if node_mask[v.0] {
                remap[v.0] = b.add_node(self.label(v)).0;
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if node_mask[e.src.0] && node_mask[e.dst.0] && keep_edge(EdgeId(i)) {
                b.push_edge_unchecked(NodeId(remap[e.src.0]), NodeId(remap[e.dst.0]), e.weight);
            }
        }
        b.build_unchecked()
    }

    /// Same nodes, weights multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<WeightedGraph> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::param(format!("scale factor must be positive, got {factor}")));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight *= factor;
        }
        Ok(g)
    }
}

/// Incremental construction of a [`WeightedGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    pairs: HashMap<(usize, usize), usize>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(nodes: usize) -> Self {
        GraphBuilder {
            labels: Vec::with_capacity(nodes),
            index: HashMap::with_capacity(nodes),
            ..Default::default()
        }
    }

    /// Returns the id of `label`, creating the node on first sight.
    pub fn add_node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len());
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.pairs.contains_key(&(u.0.min(v.0), u.0.max(v.0)))
    }

    /// Adds an undirected edge; duplicates, self-loops and non-positive
    /// weights are rejected.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, weight: f64) -> Result<()> {
        if u.0 >= self.labels.len() || v.0 >= self.labels.len() {
            return Err(Error::UnknownNode(format!("{u} or {v}")));
        }
        if u == v {
            return Err(Error::param(format!("self-loop on {}", self.labels[u.0])));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::param(format!("non-positive weight {weight}")));
        }
        let key = (u.0.min(v.0), u.0.max(v.0));
        if self.pairs.contains_key(&key) {
            return Err(Error::param(format!(
                "duplicate edge {} -- {}",
                self.labels[u.0], self.labels[v.0]
            )));
        }
        self.pairs.insert(key, self.edges.len());
        self.push_edge_unchecked(u, v, weight);
        Ok(())
    }

    fn push_edge_unchecked(&mut self, u: NodeId, v: NodeId, weight: f64) {
        let (src, dst) = if u < v { (u, v) } else { (v, u) };
        self.edges.push(Edge { src, dst, weight });
    }

    pub fn build(self) -> WeightedGraph {
        self.build_unchecked()
    }

    fn build_unchecked(self) -> WeightedGraph {
        let GraphBuilder {
            labels,
            index,
            mut edges,
            ..
        } = self;
        edges.sort_by_key(|e| (e.src, e.dst));
        let mut adj: Vec<Vec<(NodeId, EdgeId)>> = vec![Vec::new(); labels.len()];
        for (i, e) in edges.iter().enumerate() {
            adj[e.src.0].push((e.dst, EdgeId(i)));
            adj[e.dst.0].push((e.src, EdgeId(i)));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(n, _)| n);
        }
        WeightedGraph {
            labels,
            index,
            edges,
            adj,
        }
    }
}

/// Builds a graph from `(src, dst, weight)` triples over string labels.
/// Convenient for tests and small fixtures.
pub fn from_edges<'a, I>(edges: I) -> Result<WeightedGraph>
where
    I: IntoIterator<Item = (&'a str, &'a str, f64)>,
{
    let mut b = GraphBuilder::new();
    for (s, d, w) in edges {
        let u = b.add_node(s);
        let v = b.add_node(d);
        b.add_edge(u, v, w)?;
    }
    Ok(b.build())
}
