use std::collections::HashSet;

use super::{Distance, ModelError, RoadNetwork, Time, TripId, VertexId};

/// One ridesharing request.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Trip {
    pub id: TripId,
    pub source: VertexId,
    pub destination: VertexId,
    /// Seats available for passengers.
    pub capacity: u32,
    pub detour_limit: Distance,
    /// Preferred source-to-destination paths as vertex sequences.
    pub preferred_paths: Vec<Vec<VertexId>>,
    /// Maximum number of pickup stops.
    pub stop_limit: u32,
    pub depart_earliest: Time,
    pub arrive_latest: Time,
}

impl Trip {
    pub(crate) fn validate(&self, net: &RoadNetwork) -> Result<(), ModelError> {
        let bad = |reason: String| ModelError::InvalidTrip {
            trip: self.id,
            reason,
        };
        for v in [self.source, self.destination] {
            if !net.contains(v) {
                return Err(ModelError::UnknownVertex(v));
            }
        }
        if self.depart_earliest >= self.arrive_latest {
            return Err(bad(format!(
                "earliest departure {} is not before latest arrival {}",
                self.depart_earliest, self.arrive_latest
            )));
        }
        if self.preferred_paths.is_empty() {
            return Err(bad("no preferred path".into()));
        }
        for (k, path) in self.preferred_paths.iter().enumerate() {
            if path.first() != Some(&self.source) || path.last() != Some(&self.destination) {
                return Err(bad(format!("preferred path {k} does not run source to destination")));
            }
            let mut seen = HashSet::with_capacity(path.len());
            if !path.iter().all(|v| seen.insert(*v)) {
                return Err(bad(format!("preferred path {k} is not simple")));
            }
            if net.walk_length(path).is_none() {
                return Err(bad(format!("preferred path {k} uses a missing edge")));
            }
        }
        Ok(())
    }
}
