//! Backbone extractors.
//!
//! [`ego_backbone`] and [`hubs_backbone`] share one pipeline: take the
//! subgraph induced by a node selection, drop low-weight edges without
//! disconnecting anything ([`prune_low_weight_edges`]), then remove weak nodes
//! until at most `floor(s * N)` remain ([`enforce_size`]). The disparity filter
//! lives in [`disparity`].

mod disparity;
mod prune;
mod size;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::community::{overlap_neighborhood, overlapping_nodes, CommunityCover, OverlapSets};
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};
use crate::structure::component_count;

pub use disparity::{
    disparity_filter, disparity_significance, tune_alpha, AlphaTuning, Significance, ALPHA_RESOLUTION,
};
pub use prune::prune_low_weight_edges;
pub use size::{enforce_size, size_target};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Ego,
    Hubs,
    Disparity,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ego, Method::Hubs, Method::Disparity];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ego => "ego",
            Method::Hubs => "hubs",
            Method::Disparity => "disparity",
        }
    }

    /// Short column tag used in report tables.
    pub fn tag(self) -> &'static str {
        match self {
            Method::Ego => "OE",
            Method::Hubs => "OH",
            Method::Disparity => "DF",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ego" | "oe" | "OE" => Ok(Method::Ego),
            "hubs" | "oh" | "OH" => Ok(Method::Hubs),
            "disparity" | "df" | "DF" => Ok(Method::Disparity),
            other => Err(Error::param(format!("unknown method {other:?}"))),
        }
    }
}

/// How low-weight edges are removed from the selected sub-network.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrunePolicy {
    /// Visit every edge from lightest to heaviest and remove it unless it is a
    /// bridge at that moment. Leaves a maximum-weight spanning forest.
    SkipBridges,
    /// Remove edges from lightest upwards and stop at the first bridge.
    #[default]
    HaltOnBridge,
}

impl PrunePolicy {
    pub fn name(self) -> &'static str {
        match self {
            PrunePolicy::SkipBridges => "skip-bridges",
            PrunePolicy::HaltOnBridge => "halt-on-bridge",
        }
    }
}

impl std::str::FromStr for PrunePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skip-bridges" => Ok(PrunePolicy::SkipBridges),
            "halt-on-bridge" => Ok(PrunePolicy::HaltOnBridge),
            other => Err(Error::param(format!("unknown prune policy {other:?}"))),
        }
    }
}

/// Which weighted degree ranks nodes during size control.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeSource {
    /// Degree inside the pruned sub-network, updated after every removal.
    #[default]
    Backbone,
    /// Degree in the original network.
    Source,
}

impl std::str::FromStr for DegreeSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backbone" => Ok(DegreeSource::Backbone),
            "source" => Ok(DegreeSource::Source),
            other => Err(Error::param(format!("unknown degree source {other:?}"))),
        }
    }
}

/// Settings shared by the two community-based extractors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtractOptions {
    pub s: f64,
    pub policy: PrunePolicy,
    pub degree_source: DegreeSource,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            s: 0.3,
            policy: PrunePolicy::default(),
            degree_source: DegreeSource::default(),
        }
    }
}

impl ExtractOptions {
    pub fn with_s(mut self, s: f64) -> Self {
        self.s = s;
        self
    }

    pub fn with_policy(mut self, policy: PrunePolicy) -> Self {
        self.policy = policy;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BackboneParams {
    pub s: Option<f64>,
    pub alpha: Option<f64>,
    pub policy: Option<PrunePolicy>,
    pub seed: Option<u64>,
}

/// An extracted sub-network and how it was obtained.
#[derive(Clone, Debug)]
pub struct Backbone {
    pub graph: WeightedGraph,
    pub method: Method,
    pub params: BackboneParams,
    /// Source-graph id of every backbone node, by backbone index.
    pub source_nodes: Vec<NodeId>,
    /// Components of the selected sub-network before pruning (ego/hubs only).
    pub pre_prune_components: Option<usize>,
}

impl Backbone {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn component_count(&self) -> usize {
        component_count(&self.graph)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.params.seed = Some(seed);
        self
    }

    pub fn provenance(&self, source: &str) -> Provenance {
        Provenance {
            method: self.method,
            s: self.params.s,
            alpha: self.params.alpha,
            policy: self.params.policy,
            seed: self.params.seed,
            nodes: self.node_count(),
            edges: self.edge_count(),
            components: self.component_count(),
            source: source.to_string(),
        }
    }
}

/// JSON sidecar written next to every exported backbone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: Method,
    pub s: Option<f64>,
    pub alpha: Option<f64>,
    pub policy: Option<PrunePolicy>,
    pub seed: Option<u64>,
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub source: String,
}

impl Provenance {
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// The `t` strongest nodes of `g` outside `exclude`, ranked by weighted degree
/// with ties going to the smaller index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HubSet {
    pub hubs: Vec<NodeId>,
    pub t: usize,
}

impl HubSet {
    pub fn top(g: &WeightedGraph, t: usize, exclude: &[NodeId]) -> HubSet {
        let strengths = g.strengths();
        let mut skip = vec![false; g.node_count()];
        for &v in exclude {
            skip[v.0] = true;
        }
        let mut order: Vec<NodeId> = g.nodes().filter(|v| !skip[v.0]).collect();
        order.sort_by(|a, b| strengths[b.0].total_cmp(&strengths[a.0]).then(a.cmp(b)));
        order.truncate(t);
        order.sort_unstable();
        HubSet { hubs: order, t }
    }
}

fn overlap_sets(g: &WeightedGraph, cover: &CommunityCover) -> Result<OverlapSets> {
    if cover.node_count() != g.node_count() {
        return Err(Error::Cover(format!(
            "cover has {} nodes, graph has {}",
            cover.node_count(),
            g.node_count()
        )));
    }
    let overlapping = overlapping_nodes(cover);
    if overlapping.is_empty() {
        return Err(Error::EmptyOverlap);
    }
    overlap_neighborhood(g, &overlapping)
}

/// Overlapping nodes plus their neighbors, pruned and cut to size.
pub fn ego_backbone(g: &WeightedGraph, cover: &CommunityCover, opts: ExtractOptions) -> Result<Backbone> {
    let sets = overlap_sets(g, cover)?;
    extract(g, &sets.union(), Method::Ego, opts)
}

/// Overlapping nodes plus as many hubs as the overlap neighborhood has nodes,
/// pruned and cut to size.
pub fn hubs_backbone(g: &WeightedGraph, cover: &CommunityCover, opts: ExtractOptions) -> Result<Backbone> {
    let sets = overlap_sets(g, cover)?;
    let hubs = HubSet::top(g, sets.k(), &sets.overlapping);
    let mut keep = sets.overlapping.clone();
    keep.extend(&hubs.hubs);
    keep.sort_unstable();
    keep.dedup();
    extract(g, &keep, Method::Hubs, opts)
}

fn extract(g: &WeightedGraph, keep: &[NodeId], method: Method, opts: ExtractOptions) -> Result<Backbone> {
    let target = size_target(opts.s, g.node_count())?;
    let sub = g.induced_subgraph(keep)?;
    let pre_prune_components = component_count(&sub);
    let pruned = prune_low_weight_edges(&sub, opts.policy);
    let fixed_rank: Option<Vec<f64>> = match opts.degree_source {
        DegreeSource::Backbone => None,
        DegreeSource::Source => Some(keep.iter().map(|&v| g.strength(v)).collect()),
    };
    let (graph, retained) = size::shrink(&pruned, target, fixed_rank.as_deref());
    Ok(Backbone {
        graph,
        method,
        params: BackboneParams {
            s: Some(opts.s),
            alpha: None,
            policy: Some(opts.policy),
            seed: None,
        },
        source_nodes: retained.iter().map(|&i| keep[i.0]).collect(),
        pre_prune_components: Some(pre_prune_components),
    })
}
