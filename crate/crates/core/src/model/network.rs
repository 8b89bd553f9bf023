use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::{Distance, ModelError, VertexId};

/// Undirected road segment with a non-negative length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: Distance,
}

/// Weighted undirected road network over vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoadNetwork {
    vertex_count: u32,
    /// Canonical edges: `u < v`, sorted.
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(VertexId, Distance)>>,
    lengths: HashMap<(VertexId, VertexId), Distance>,
}

impl RoadNetwork {
    pub fn new(
        vertex_count: u32,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Distance)>,
    ) -> Result<Self, ModelError> {
        let mut canonical = Vec::new();
        let mut lengths = HashMap::new();
        for (a, b, length) in edges {
            for x in [a, b] {
                if x >= vertex_count {
                    return Err(ModelError::UnknownVertex(x));
                }
            }
            if a == b {
                return Err(ModelError::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if lengths.insert((u, v), length).is_some() {
                return Err(ModelError::DuplicateEdge(u, v));
            }
            canonical.push(Edge { u, v, length });
        }
        canonical.sort_by_key(|e| (e.u, e.v));
        let mut adjacency = vec![Vec::new(); vertex_count as usize];
        for e in &canonical {
            adjacency[e.u as usize].push((e.v, e.length));
            adjacency[e.v as usize].push((e.u, e.length));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            vertex_count,
            edges: canonical,
            adjacency,
            lengths,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.vertex_count
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, Distance)] {
        &self.adjacency[v as usize]
    }

    pub fn edge_length(&self, a: VertexId, b: VertexId) -> Option<Distance> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.lengths.get(&key).copied()
    }

    /// Length of a vertex walk, or `None` if two consecutive vertices are not adjacent.
    pub fn walk_length(&self, walk: &[VertexId]) -> Option<Distance> {
        walk.windows(2)
            .map(|w| self.edge_length(w[0], w[1]))
            .sum::<Option<Distance>>()
    }

    fn check(&self, v: VertexId) -> Result<(), ModelError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(ModelError::UnknownVertex(v))
        }
    }

    /// Dijkstra from `from`; returns (distance, predecessor) tables.
    fn dijkstra(&self, from: VertexId) -> (Vec<Option<Distance>>, Vec<Option<VertexId>>) {
        let n = self.vertex_count as usize;
        let mut dist: Vec<Option<Distance>> = vec![None; n];
        let mut pred = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[from as usize] = Some(0);
        heap.push(Reverse((0, from)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v as usize].is_some_and(|best| d > best) {
                continue;
            }
            for &(w, len) in &self.adjacency[v as usize] {
                let nd = d + len;
                let better = match dist[w as usize] {
                    None => true,
                    Some(old) => nd < old,
                };
                if better {
                    dist[w as usize] = Some(nd);
                    pred[w as usize] = Some(v);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        (dist, pred)
    }

    /// Shortest `u`–`v` distance; `None` when the vertices are disconnected.
    pub fn shortest_distance(&self, u: VertexId, v: VertexId) -> Result<Option<Distance>, ModelError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Ok(Some(0));
        }
        Ok(self.dijkstra(u).0[v as usize])
    }

    /// A deterministic shortest `u`–`v` path as a vertex sequence.
    pub fn shortest_path(&self, u: VertexId, v: VertexId) -> Result<Option<Vec<VertexId>>, ModelError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Ok(Some(vec![u]));
        }
        let (dist, pred) = self.dijkstra(u);
        if dist[v as usize].is_none() {
            return Ok(None);
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = pred[cur as usize] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Ok(Some(path))
    }
}

/// Free-function form of [`RoadNetwork::shortest_distance`].
pub fn shortest_distance(
    net: &RoadNetwork,
    u: VertexId,
    v: VertexId,
) -> Result<Option<Distance>, ModelError> {
    net.shortest_distance(u, v)
}
