//! Serve relations: the trip-level serve digraph and the source-grouped meta graph.

mod digraph;
mod meta;
mod reduce;

pub use digraph::{build_compatibility_digraph, build_serve_digraph, check_transitive, ServeDigraph};
pub use meta::{build_meta_graph, label_nodes, meta_queries, MetaGraph, MetaNode, MetaQueries, NodeId};
pub use reduce::{remove_shortcuts, transitive_closure};

use crate::model::{ModelError, TripId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("condition {0} violated")]
    ConditionViolated(u8),
    #[error("serve relation is not transitive: {0} -> {1} -> {2} without {0} -> {2}")]
    Intransitive(TripId, TripId, TripId),
    #[error("meta graph has a cycle")]
    Cyclic,
    #[error("not an inverse tree: {0}")]
    NotInverseTree(String),
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("meta graph is not labeled")]
    Unlabeled,
    #[error("trips {0} and {1} share a source but not a preferred path")]
    NonUniformNode(TripId, TripId),
}
