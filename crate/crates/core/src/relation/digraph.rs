use std::collections::HashSet;

use crate::model::{can_serve, compatible, Instance, ModelError, TripId};

/// Serve relation over trips in carpool-matching orientation: an arc `(u, v)`
/// means `v` can serve `u`, so the in-neighbors of `v` are its potential
/// passengers. Self-service is implicit and never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServeDigraph {
    in_neighbors: Vec<Vec<TripId>>,
    out_neighbors: Vec<Vec<TripId>>,
    arcs: HashSet<(TripId, TripId)>,
}

impl ServeDigraph {
    /// Digraph over trips `1..=vertex_count` with the given `(u, v)` arcs.
    pub fn from_arcs(
        vertex_count: usize,
        arcs: impl IntoIterator<Item = (TripId, TripId)>,
    ) -> Result<Self, ModelError> {
        let mut g = ServeDigraph {
            in_neighbors: vec![Vec::new(); vertex_count],
            out_neighbors: vec![Vec::new(); vertex_count],
            arcs: HashSet::new(),
        };
        for (u, v) in arcs {
            for t in [u, v] {
                if t.0 == 0 || t.index() >= vertex_count {
                    return Err(ModelError::UnknownTrip(t));
                }
            }
            if u != v && g.arcs.insert((u, v)) {
                g.out_neighbors[u.index()].push(v);
                g.in_neighbors[v.index()].push(u);
            }
        }
        for list in g.in_neighbors.iter_mut().chain(g.out_neighbors.iter_mut()) {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.in_neighbors.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = TripId> {
        (0..self.vertex_count()).map(TripId::from_index)
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs `(u, v)` in lexicographic order.
    pub fn arcs(&self) -> Vec<(TripId, TripId)> {
        let mut arcs: Vec<_> = self.arcs.iter().copied().collect();
        arcs.sort_unstable();
        arcs
    }

    pub fn has_arc(&self, u: TripId, v: TripId) -> bool {
        self.arcs.contains(&(u, v))
    }

    /// Trips `v` can serve.
    pub fn in_neighbors(&self, v: TripId) -> &[TripId] {
        &self.in_neighbors[v.index()]
    }

    /// Trips that can serve `u`.
    pub fn out_neighbors(&self, u: TripId) -> &[TripId] {
        &self.out_neighbors[u.index()]
    }

    pub fn contains(&self, v: TripId) -> bool {
        v.0 >= 1 && v.index() < self.vertex_count()
    }
}

fn build_with(
    inst: &Instance,
    serves: impl Fn(&Instance, TripId, TripId) -> Result<bool, ModelError>,
) -> Result<ServeDigraph, ModelError> {
    let mut arcs = Vec::new();
    for i in inst.trip_ids() {
        for j in inst.trip_ids() {
            if i != j && serves(inst, i, j)? {
                arcs.push((j, i));
            }
        }
    }
    ServeDigraph::from_arcs(inst.len(), arcs)
}

/// Full serve relation, honoring capacity, stop, detour and time limits.
pub fn build_serve_digraph(inst: &Instance) -> Result<ServeDigraph, ModelError> {
    build_with(inst, can_serve)
}

/// Route/time compatibility only (seat and stop limits ignored). This is the
/// relation the meta graph is built from: whether a node can serve another
/// depends on where trips start and drive, not on how many seats are left.
pub fn build_compatibility_digraph(inst: &Instance) -> Result<ServeDigraph, ModelError> {
    build_with(inst, compatible)
}

/// Returns a triple `(k, j, i)` with arcs `(k, j)` and `(j, i)` but no `(k, i)`.
pub fn check_transitive(dg: &ServeDigraph) -> Option<(TripId, TripId, TripId)> {
    for (k, j) in dg.arcs() {
        for &i in dg.out_neighbors(j) {
            if i != k && !dg.has_arc(k, i) {
                return Some((k, j, i));
            }
        }
    }
    None
}
