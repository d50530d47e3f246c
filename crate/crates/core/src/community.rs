//! Overlapping community detection by speaker-listener label propagation,
//! and the overlapping-node sets derived from a cover.
//!
//! Every node starts with a memory holding its own label. In each of `T`
//! iterations all nodes act once as listener, in a freshly shuffled order:
//! each neighbor speaks one label drawn from its memory with probability
//! proportional to the label's count there, and the listener stores the label
//! it heard most (ties go to the smallest label). With [`Listening::Weighted`]
//! a label heard over an edge counts with that edge's weight. Afterwards a node
//! keeps every label whose share of its memory reaches the threshold `r`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};

pub const DEFAULT_ITERATIONS: usize = 100;
pub const DEFAULT_THRESHOLD: f64 = 0.3;

/// How a listener tallies the labels spoken by its neighbors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Listening {
    /// Each received label counts with the weight of the edge it came over.
    #[default]
    Weighted,
    /// Each received label counts once.
    Unweighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlpaParams {
    pub iterations: usize,
    pub threshold: f64,
    pub seed: u64,
    pub listening: Listening,
}

impl Default for SlpaParams {
    fn default() -> Self {
        SlpaParams {
            iterations: DEFAULT_ITERATIONS,
            threshold: DEFAULT_THRESHOLD,
            seed: 0,
            listening: Listening::default(),
        }
    }
}

impl SlpaParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::param("SLPA iterations must be at least 1"));
        }
        check_threshold(self.threshold)
    }
}

fn check_threshold(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("SLPA threshold must lie in (0,1), got {r}")))
    }
}

/// Label memories after propagation, before thresholding. Raw labels are the
/// node indices the labels originated from.
#[derive(Clone, Debug)]
pub struct SlpaTrace {
    memories: Vec<Vec<u32>>,
    params: SlpaParams,
}

impl SlpaTrace {
    pub fn run(g: &WeightedGraph, params: SlpaParams) -> Result<Self> {
        params.validate()?;
        if g.is_empty() {
            return Err(Error::param("cannot detect communities on an empty graph"));
        }
        let n = g.node_count();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut memories: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                let mut m = Vec::with_capacity(params.iterations + 1);
                m.push(v as u32);
                m
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        let mut heard: Vec<(u32, f64)> = Vec::new();

        for _ in 0..params.iterations {
            order.shuffle(&mut rng);
            for &listener in &order {
                let nbrs = g.neighbors(NodeId(listener));
                if nbrs.is_empty() {
                    continue;
                }
                heard.clear();
                for &(speaker, e) in nbrs {
                    let memory = &memories[speaker.0];
                    let label = memory[rng.random_range(0..memory.len())];
                    let vote = match params.listening {
                        Listening::Weighted => g.edge(e).weight,
                        Listening::Unweighted => 1.0,
                    };
                    heard.push((label, vote));
                }
                let chosen = loudest(&mut heard);
                memories[listener].push(chosen);
            }
        }
        Ok(SlpaTrace { memories, params })
    }

    pub fn params(&self) -> &SlpaParams {
        &self.params
    }

    /// Raw labels of `v` whose memory share is at least `r`; the single most
    /// frequent label when none qualifies. Ascending.
    pub fn kept_labels(&self, v: NodeId, r: f64) -> Vec<u32> {
        let memory = &self.memories[v.0];
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &l in memory {
            *counts.entry(l).or_default() += 1;
        }
        let len = memory.len() as f64;
        let kept: Vec<u32> = counts
            .iter()
            .filter(|&(_, &c)| c as f64 / len >= r)
            .map(|(&l, _)| l)
            .collect();
        if !kept.is_empty() {
            return kept;
        }
        let mut best = (0u32, 0usize);
        for (&l, &c) in &counts {
            if c > best.1 {
                best = (l, c);
            }
        }
        vec![best.0]
    }

    /// Thresholds the memories at `r` into a cover with dense labels. A
    /// community whose members all belong to another community is dropped;
    /// of two equal communities the one with the smaller label stays.
    pub fn cover(&self, r: f64) -> Result<CommunityCover> {
        check_threshold(r)?;
        let raw: Vec<Vec<u32>> = (0..self.memories.len())
            .map(|v| self.kept_labels(NodeId(v), r))
            .collect();
        let mut cover = CommunityCover::from_raw(drop_nested(raw));
        cover.params = CoverParams {
            iterations: Some(self.params.iterations),
            threshold: Some(r),
            seed: Some(self.params.seed),
        };
        Ok(cover)
    }
}

fn drop_nested(mut raw: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let mut members: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, labels) in raw.iter().enumerate() {
        for &l in labels {
            members.entry(l).or_default().push(v);
        }
    }
    let is_subset = |a: &[usize], b: &[usize]| {
        let mut j = 0;
        a.iter().all(|x| {
            while j < b.len() && b[j] < *x {
                j += 1;
            }
            j < b.len() && b[j] == *x
        })
    };
    let mut nested = BTreeSet::new();
    for (&a, ma) in &members {
        // any superset of `a` contains its first member
        let covered = raw[ma[0]].iter().any(|&b| {
            let mb = &members[&b];
            b != a && !nested.contains(&b) && mb.len() >= ma.len() && (mb.len() > ma.len() || b < a) && is_subset(ma, mb)
        });
        if covered {
            nested.insert(a);
        }
    }
    if !nested.is_empty() {
        for labels in &mut raw {
            labels.retain(|l| !nested.contains(l));
        }
    }
    raw
}

// Label with the largest tally; smallest label on ties.
fn loudest(heard: &mut [(u32, f64)]) -> u32 {
    heard.sort_unstable_by_key(|&(l, _)| l);
    let mut best = heard[0].0;
    let mut best_score = f64::NEG_INFINITY;
    let mut i = 0;
    while i < heard.len() {
        let label = heard[i].0;
        let mut score = 0.0;
        while i < heard.len() && heard[i].0 == label {
            score += heard[i].1;
            i += 1;
        }
        if score > best_score {
            best = label;
            best_score = score;
        }
    }
    best
}

/// Runs label propagation and thresholds the result at `params.threshold`.
pub fn detect_communities(g: &WeightedGraph, params: SlpaParams) -> Result<CommunityCover> {
    SlpaTrace::run(g, params)?.cover(params.threshold)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoverParams {
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(rename = "r", default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Community memberships per node. Labels are dense, `0..community_count()`,
/// numbered by their smallest originating label.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityCover {
    memberships: Vec<Vec<u32>>,
    communities: usize,
    pub params: CoverParams,
}

impl CommunityCover {
    fn from_raw(raw: Vec<Vec<u32>>) -> Self {
        let distinct: BTreeSet<u32> = raw.iter().flatten().copied().collect();
        let dense: BTreeMap<u32, u32> = distinct
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as u32))
            .collect();
        let memberships = raw
            .into_iter()
            .map(|labels| {
                let mut m: Vec<u32> = labels.iter().map(|l| dense[l]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        CommunityCover {
            memberships,
            communities: distinct.len(),
            params: CoverParams::default(),
        }
    }

    /// Builds a cover from explicit per-node label sets. Every node needs at
    /// least one label.
    pub fn from_memberships(memberships: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(v) = memberships.iter().position(|m| m.is_empty()) {
            return Err(Error::Cover(format!("node {v} has no community")));
        }
        Ok(Self::from_raw(memberships))
    }

    pub fn node_count(&self) -> usize {
        self.memberships.len()
    }

    pub fn community_count(&self) -> usize {
        self.communities
    }

    pub fn memberships(&self, v: NodeId) -> &[u32] {
        &self.memberships[v.0]
    }

    /// Members of every community, ascending.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.communities];
        for (v, labels) in self.memberships.iter().enumerate() {
            for &l in labels {
                out[l as usize].push(NodeId(v));
            }
        }
        out
    }

    pub fn to_file(&self, g: &WeightedGraph) -> CoverFile {
        let communities = self
            .communities()
            .into_iter()
            .enumerate()
            .map(|(l, members)| {
                (
                    l.to_string(),
                    members.iter().map(|&v| g.label(v).to_string()).collect(),
                )
            })
            .collect();
        CoverFile {
            params: self.params,
            communities,
        }
    }

    /// Reads a cover for `g`. Every node of `g` must belong to a community and
    /// every listed node must exist in `g`.
    pub fn from_file(g: &WeightedGraph, file: &CoverFile) -> Result<Self> {
        let mut raw: Vec<Vec<u32>> = vec![Vec::new(); g.node_count()];
        for (i, (_, members)) in file.ordered_communities().into_iter().enumerate() {
            for label in members {
                let v = g
                    .node(label)
                    .map_err(|_| Error::Cover(format!("unknown node {label:?}")))?;
                if !raw[v.0].contains(&(i as u32)) {
                    raw[v.0].push(i as u32);
                }
            }
        }
        if let Some(v) = raw.iter().position(|m| m.is_empty()) {
            return Err(Error::Cover(format!(
                "node {:?} belongs to no community",
                g.label(NodeId(v))
            )));
        }
        let mut cover = Self::from_raw(raw);
        cover.params = file.params;
        Ok(cover)
    }
}

/// On-disk cover: `{"params": {"T", "r", "seed"}, "communities": {label: [nodes]}}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoverFile {
    #[serde(default)]
    pub params: CoverParams,
    pub communities: serde_json::Map<String, serde_json::Value>,
}

impl CoverFile {
    /// Communities in canonical order: numerically when every key is an
    /// integer, lexicographically otherwise.
    pub fn ordered_communities(&self) -> Vec<(&str, Vec<&str>)> {
        let mut entries: Vec<(&str, Vec<&str>)> = self
            .communities
            .iter()
            .map(|(k, v)| {
                let members = v
                    .as_array()
                    .map(|a| a.iter().filter_map(|x| x.as_str()).collect())
                    .unwrap_or_default();
                (k.as_str(), members)
            })
            .collect();
        let numeric: Option<Vec<i64>> = entries.iter().map(|(k, _)| k.parse().ok()).collect();
        match numeric {
            Some(_) => entries.sort_by_key(|(k, _)| k.parse::<i64>().unwrap_or_default()),
            None => entries.sort_by(|a, b| a.0.cmp(b.0)),
        }
        entries
    }

    /// Community keys per node label.
    pub fn memberships_by_label(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (k, members) in self.ordered_communities() {
            for m in members {
                let entry = out.entry(m).or_default();
                if !entry.contains(&k) {
                    entry.push(k);
                }
            }
        }
        out
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let file: CoverFile = serde_json::from_str(&text)?;
        for (k, v) in &file.communities {
            let ok = v
                .as_array()
                .map(|a| a.iter().all(|x| x.is_string()))
                .unwrap_or(false);
            if !ok {
                return Err(Error::Cover(format!(
                    "community {k:?} must be an array of node labels"
                )));
            }
        }
        Ok(file)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

/// Nodes holding two or more labels, ascending.
pub fn overlapping_nodes(cover: &CommunityCover) -> Vec<NodeId> {
    (0..cover.node_count())
        .map(NodeId)
        .filter(|&v| cover.memberships(v).len() >= 2)
        .collect()
}

/// Overlapping nodes and their non-overlapping one-step neighbors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OverlapSets {
    pub overlapping: Vec<NodeId>,
    pub neighbors: Vec<NodeId>,
}

impl OverlapSets {
    /// Size of the neighborhood.
    pub fn k(&self) -> usize {
        self.neighbors.len()
    }

    pub fn union(&self) -> Vec<NodeId> {
        let mut all: Vec<NodeId> = self
            .overlapping
            .iter()
            .chain(&self.neighbors)
            .copied()
            .collect();
        all.sort_unstable();
        all
    }
}

pub fn overlap_neighborhood(g: &WeightedGraph, overlapping: &[NodeId]) -> Result<OverlapSets> {
    let mut is_overlap = vec![false; g.node_count()];
    for &v in overlapping {
        if !g.contains(v) {
            return Err(Error::UnknownNode(v.to_string()));
        }
        is_overlap[v.0] = true;
    }
    let mut is_neighbor = vec![false; g.node_count()];
    for &v in overlapping {
        for &(w, _) in g.neighbors(v) {
            if !is_overlap[w.0] {
                is_neighbor[w.0] = true;
            }
        }
    }
    let collect = |mask: &[bool]| -> Vec<NodeId> {
        mask.iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| NodeId(i))
            .collect()
    };
    Ok(OverlapSets {
        overlapping: collect(&is_overlap),
        neighbors: collect(&is_neighbor),
    })
}
