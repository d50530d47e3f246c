//! Backbone extraction for weighted networks.
//!
//! Two extractors build on overlapping community structure: the
//! overlapping-nodes ego backbone keeps the overlapping nodes and their
//! neighbors, the overlapping-nodes-and-hubs backbone keeps the overlapping
//! nodes and the strongest nodes of the network. Both prune their lowest-weight
//! links without disconnecting anything and then cut the node count down to a
//! fraction `s` of the original network. The disparity filter is provided as a
//! baseline, and [`metrics`] holds the measures used to compare backbones.

pub mod backbone;
pub mod betweenness;
pub mod community;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod structure;

pub use backbone::{Backbone, Method, PrunePolicy};
pub use community::{CommunityCover, SlpaParams};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, GraphBuilder, NodeId, WeightedGraph};
