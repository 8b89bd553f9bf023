use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SpecError;
use crate::model::{Instance, RoadNetwork, Trip, TripId, VertexId};

/// Parameters for a random instance on a tree-shaped road network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomTreeSpec {
    /// Number of trips `l`.
    pub trips: usize,
    /// Number of source vertices `p`, each holding at least one trip.
    pub nodes: usize,
    /// Capacities are drawn from `0..=max_capacity`.
    pub max_capacity: u32,
    /// Stop limits are drawn from this inclusive range.
    pub stop_limit: (u32, u32),
    pub seed: u64,
}

impl RandomTreeSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.nodes == 0 {
            return Err(SpecError::Invalid("need at least one node".into()));
        }
        if self.trips < self.nodes {
            return Err(SpecError::Invalid(format!(
                "{} trips cannot cover {} nodes",
                self.trips, self.nodes
            )));
        }
        if self.stop_limit.0 > self.stop_limit.1 {
            return Err(SpecError::Invalid("empty stop-limit range".into()));
        }
        if u32::try_from(self.trips).is_err() || u32::try_from(self.nodes + 1).is_err() {
            return Err(SpecError::Invalid("too many trips or nodes".into()));
        }
        Ok(())
    }
}

/// Random instance on a tree rooted at destination vertex `0`.
///
/// Vertex `1` hangs off the destination and every later vertex `k` off a
/// uniformly chosen earlier vertex, with edge lengths in `1..=3`. Each trip
/// follows the unique tree path to the destination, so paths are closed under
/// suffixes and the serve relation is transitive. All trips share the window
/// `[0, L + 1]` where `L` is the longest path. Output depends only on the spec.
pub fn gen_random_tree(spec: &RandomTreeSpec) -> Result<Instance, SpecError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let p = spec.nodes;
    let mut parent = vec![0usize; p + 1];
    let mut depth = vec![0u64; p + 1];
    let mut edges = Vec::with_capacity(p);
    for k in 1..=p {
        let up = if k == 1 { 0 } else { rng.gen_range(1..k) };
        let len: u64 = rng.gen_range(1..=3);
        parent[k] = up;
        depth[k] = depth[up] + len;
        edges.push((up as VertexId, k as VertexId, len));
    }
    let path_of = |mut k: usize| {
        let mut path = vec![k as VertexId];
        while k != 0 {
            k = parent[k];
            path.push(k as VertexId);
        }
        path
    };
    let horizon = depth.iter().copied().max().unwrap_or(0) + 1;

    let mut sources: Vec<usize> = (1..=p).collect();
    sources.extend((p..spec.trips).map(|_| rng.gen_range(1..=p)));
    sources.shuffle(&mut rng);

    let mut trips = Vec::with_capacity(spec.trips);
    for (k, &s) in sources.iter().enumerate() {
        trips.push(Trip {
            id: TripId::from_index(k),
            source: s as VertexId,
            destination: 0,
            capacity: rng.gen_range(0..=spec.max_capacity),
            detour_limit: 0,
            preferred_paths: vec![path_of(s)],
            stop_limit: rng.gen_range(spec.stop_limit.0..=spec.stop_limit.1),
            depart_earliest: 0,
            arrive_latest: horizon,
        });
    }
    let net = RoadNetwork::new(p as u32 + 1, edges)?;
    Ok(Instance::new(net, trips)?)
}
