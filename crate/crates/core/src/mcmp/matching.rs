use std::collections::{BTreeMap, BTreeSet};

use super::{SolverError, Star};
use crate::model::{Instance, TripId, VertexId};
use crate::relation::ServeDigraph;

/// Per-vertex seat, stop and source data the star search needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarConstraints {
    capacity: Vec<u32>,
    stop_limit: Vec<u32>,
    source: Vec<VertexId>,
}

impl StarConstraints {
    /// Tables indexed by trip index; all three must have equal length.
    pub fn new(capacity: Vec<u32>, stop_limit: Vec<u32>, source: Vec<VertexId>) -> Result<Self, SolverError> {
        for len in [stop_limit.len(), source.len()] {
            if len != capacity.len() {
                return Err(SolverError::SizeMismatch {
                    expected: capacity.len(),
                    found: len,
                });
            }
        }
        Ok(Self {
            capacity,
            stop_limit,
            source,
        })
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let trips = inst.trips();
        Self {
            capacity: trips.iter().map(|t| t.capacity).collect(),
            stop_limit: trips.iter().map(|t| t.stop_limit).collect(),
            source: trips.iter().map(|t| t.source).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.capacity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.capacity.is_empty()
    }

    pub fn capacity(&self, v: TripId) -> u32 {
        self.capacity[v.index()]
    }

    pub fn stop_limit(&self, v: TripId) -> u32 {
        self.stop_limit[v.index()]
    }

    pub fn source(&self, v: TripId) -> VertexId {
        self.source[v.index()]
    }

    /// Distinct leaf sources other than the root's own.
    pub fn stops_for(&self, root: TripId, leaves: impl IntoIterator<Item = TripId>) -> u32 {
        let own = self.source(root);
        leaves
            .into_iter()
            .map(|u| self.source(u))
            .filter(|&s| s != own)
            .collect::<BTreeSet<_>>()
            .len() as u32
    }

    /// Whether `root` may carry exactly `leaves`.
    pub fn admits(&self, root: TripId, leaves: &BTreeSet<TripId>) -> bool {
        leaves.len() <= self.capacity(root) as usize
            && self.stops_for(root, leaves.iter().copied()) <= self.stop_limit(root)
    }

    pub(crate) fn check_len(&self, dg: &ServeDigraph) -> Result<(), SolverError> {
        if self.len() != dg.vertex_count() {
            return Err(SolverError::SizeMismatch {
                expected: dg.vertex_count(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Vertex-disjoint stars over the serve digraph. Each vertex is a leaf, a
/// center with leaves, or unmatched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    root_of: Vec<Option<TripId>>,
    leaves: Vec<BTreeSet<TripId>>,
}

impl Matching {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            root_of: vec![None; vertex_count],
            leaves: vec![BTreeSet::new(); vertex_count],
        }
    }

    /// Builds a matching from `(leaf, root)` arcs, checking disjointness only.
    pub fn from_edges(vertex_count: usize, edges: &[(TripId, TripId)]) -> Result<Self, String> {
        let mut m = Self::new(vertex_count);
        for &(u, v) in edges {
            for t in [u, v] {
                if t.0 == 0 || t.index() >= vertex_count {
                    return Err(format!("unknown vertex {t}"));
                }
            }
            if m.is_matched(u) {
                return Err(format!("leaf {u} already matched"));
            }
            if m.root_of(v).is_some() {
                return Err(format!("root {v} is a leaf"));
            }
            m.add_edge(u, v);
        }
        Ok(m)
    }

    pub fn vertex_count(&self) -> usize {
        self.root_of.len()
    }

    /// The center `u` is attached to, if `u` is a leaf.
    pub fn root_of(&self, u: TripId) -> Option<TripId> {
        self.root_of[u.index()]
    }

    pub fn leaves(&self, v: TripId) -> &BTreeSet<TripId> {
        &self.leaves[v.index()]
    }

    /// `|M(v)|`: matched arcs incident to `v`.
    pub fn incident(&self, v: TripId) -> usize {
        self.leaves[v.index()].len() + usize::from(self.root_of[v.index()].is_some())
    }

    /// Whether `v` touches any matched arc.
    pub fn is_matched(&self, v: TripId) -> bool {
        self.incident(v) > 0
    }

    pub fn edge_count(&self) -> usize {
        self.root_of.iter().filter(|r| r.is_some()).count()
    }

    /// Matched `(leaf, root)` arcs, sorted.
    pub fn edges(&self) -> Vec<(TripId, TripId)> {
        self.root_of
            .iter()
            .enumerate()
            .filter_map(|(k, r)| r.map(|r| (TripId::from_index(k), r)))
            .collect()
    }

    pub fn contains_edge(&self, u: TripId, v: TripId) -> bool {
        self.root_of[u.index()] == Some(v)
    }

    pub(crate) fn add_edge(&mut self, u: TripId, v: TripId) {
        self.root_of[u.index()] = Some(v);
        self.leaves[v.index()].insert(u);
    }

    pub(crate) fn remove_edge(&mut self, u: TripId, v: TripId) {
        if self.root_of[u.index()] == Some(v) {
            self.root_of[u.index()] = None;
            self.leaves[v.index()].remove(&u);
        }
    }

    fn clear_vertex(&mut self, v: TripId) {
        if let Some(r) = self.root_of[v.index()] {
            self.remove_edge(v, r);
        }
        for u in std::mem::take(&mut self.leaves[v.index()]) {
            self.root_of[u.index()] = None;
        }
    }

    /// Replaces `M(V(S_v))` with the arcs of `st`.
    pub fn apply_star(&mut self, st: &Star) {
        self.clear_vertex(st.root);
        for &u in &st.leaves {
            self.clear_vertex(u);
        }
        for &u in &st.leaves {
            self.add_edge(u, st.root);
        }
    }

    /// Star centers with their leaves.
    pub fn stars(&self) -> BTreeMap<TripId, &BTreeSet<TripId>> {
        self.leaves
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(k, l)| (TripId::from_index(k), l))
            .collect()
    }

    /// Checks the structural invariants against the digraph and limits;
    /// returns the first problem found.
    pub fn check(&self, dg: &ServeDigraph, sc: &StarConstraints) -> Result<(), String> {
        if self.vertex_count() != dg.vertex_count() {
            return Err("vertex count mismatch".into());
        }
        for v in dg.vertices() {
            let leaves = self.leaves(v);
            if !leaves.is_empty() && self.root_of(v).is_some() {
                return Err(format!("{v} is both a center and a leaf"));
            }
            for &u in leaves {
                if self.root_of(u) != Some(v) {
                    return Err(format!("index out of sync at ({u}, {v})"));
                }
                if !dg.has_arc(u, v) {
                    return Err(format!("({u}, {v}) is not an arc"));
                }
            }
            if !sc.admits(v, leaves) {
                return Err(format!("star at {v} breaks seat or stop limit"));
            }
            if let Some(r) = self.root_of(v) {
                if !self.leaves(r).contains(&v) {
                    return Err(format!("index out of sync at ({v}, {r})"));
                }
            }
        }
        Ok(())
    }
}
