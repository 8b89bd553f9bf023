use std::collections::HashMap;

use super::{Distance, ModelError, RoadNetwork, Trip, TripId, VertexId};

/// Which of the five structural conditions an instance satisfies.
///
/// 1. all trips share a destination, or all share a source;
/// 2. every detour limit is zero;
/// 3. every trip has exactly one preferred path;
/// 4. every stop limit is at least the trip's capacity;
/// 5. all trips share the same departure and arrival times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Conditions {
    pub same_endpoint: bool,
    pub zero_detour: bool,
    pub fixed_path: bool,
    pub stops_cover_capacity: bool,
    pub common_window: bool,
}

impl Conditions {
    pub fn as_array(&self) -> [bool; 5] {
        [
            self.same_endpoint,
            self.zero_detour,
            self.fixed_path,
            self.stops_cover_capacity,
            self.common_window,
        ]
    }

    /// 1-based index of condition `k` (1..=5).
    pub fn holds(&self, k: usize) -> bool {
        self.as_array()[k - 1]
    }
}

/// Precomputed geometry of one preferred path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PathInfo {
    /// `prefix[k]` is the distance from the path start to its `k`-th vertex.
    pub prefix: Vec<Distance>,
    pub position: HashMap<VertexId, usize>,
}

impl PathInfo {
    pub fn length(&self) -> Distance {
        *self.prefix.last().unwrap_or(&0)
    }
}

/// A road network together with trips `1..=l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    network: RoadNetwork,
    trips: Vec<Trip>,
    conditions: Conditions,
    common_destination: Option<VertexId>,
    paths: Vec<Vec<PathInfo>>,
}

impl Instance {
    /// Builds an instance; trips must be listed with ids `1, 2, ..., l`.
    pub fn new(network: RoadNetwork, trips: Vec<Trip>) -> Result<Self, ModelError> {
        let mut paths = Vec::with_capacity(trips.len());
        for (index, trip) in trips.iter().enumerate() {
            let expected = TripId::from_index(index);
            if trip.id != expected {
                return Err(ModelError::NonContiguousIds {
                    expected,
                    found: trip.id,
                });
            }
            trip.validate(&network)?;
            paths.push(
                trip.preferred_paths
                    .iter()
                    .map(|p| path_info(&network, p))
                    .collect(),
            );
        }
        let conditions = compute_conditions(&trips);
        let common_destination = match trips.first() {
            Some(first) if trips.iter().all(|t| t.destination == first.destination) => {
                Some(first.destination)
            }
            _ => None,
        };
        Ok(Self {
            network,
            trips,
            conditions,
            common_destination,
            paths,
        })
    }

    pub fn network(&self) -> &RoadNetwork {
        &self.network
    }

    pub fn trips(&self) -> &[Trip] {
        &self.trips
    }

    pub fn len(&self) -> usize {
        self.trips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trips.is_empty()
    }

    pub fn trip_ids(&self) -> impl Iterator<Item = TripId> + '_ {
        (0..self.trips.len()).map(TripId::from_index)
    }

    pub fn trip(&self, id: TripId) -> Result<&Trip, ModelError> {
        if id.0 == 0 {
            return Err(ModelError::UnknownTrip(id));
        }
        self.trips.get(id.index()).ok_or(ModelError::UnknownTrip(id))
    }

    pub fn conditions(&self) -> Conditions {
        self.conditions
    }

    /// The shared destination when every trip ends at the same vertex.
    pub fn common_destination(&self) -> Option<VertexId> {
        self.common_destination
    }

    /// Largest vehicle capacity `K`.
    pub fn max_capacity(&self) -> u32 {
        self.trips.iter().map(|t| t.capacity).max().unwrap_or(0)
    }

    pub(crate) fn path_info(&self, id: TripId, path: usize) -> &PathInfo {
        &self.paths[id.index()][path]
    }

    /// Length of the given preferred path of trip `id`.
    pub fn path_length(&self, id: TripId, path: usize) -> Result<Distance, ModelError> {
        let trip = self.trip(id)?;
        if path >= trip.preferred_paths.len() {
            return Err(ModelError::InvalidTrip {
                trip: id,
                reason: format!("no preferred path {path}"),
            });
        }
        Ok(self.path_info(id, path).length())
    }
}

fn path_info(net: &RoadNetwork, path: &[VertexId]) -> PathInfo {
    let mut prefix = Vec::with_capacity(path.len());
    let mut acc = 0;
    prefix.push(0);
    for w in path.windows(2) {
        acc += net.edge_length(w[0], w[1]).unwrap_or(0);
        prefix.push(acc);
    }
    let position = path.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    PathInfo { prefix, position }
}

fn compute_conditions(trips: &[Trip]) -> Conditions {
    let Some(first) = trips.first() else {
        return Conditions {
            same_endpoint: true,
            zero_detour: true,
            fixed_path: true,
            stops_cover_capacity: true,
            common_window: true,
        };
    };
    Conditions {
        same_endpoint: trips.iter().all(|t| t.destination == first.destination)
            || trips.iter().all(|t| t.source == first.source),
        zero_detour: trips.iter().all(|t| t.detour_limit == 0),
        fixed_path: trips.iter().all(|t| t.preferred_paths.len() == 1),
        stops_cover_capacity: trips.iter().all(|t| t.stop_limit >= t.capacity),
        common_window: trips.iter().all(|t| {
            t.depart_earliest == first.depart_earliest && t.arrive_latest == first.arrive_latest
        }),
    }
}

/// Evaluates Conditions (1)–(5) for `inst`.
pub fn check_conditions(inst: &Instance) -> Conditions {
    inst.conditions
}
