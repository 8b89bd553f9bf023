//! Trips, road networks, schedules and solutions.

mod instance;
mod network;
mod schedule;
mod solution;
mod trip;
mod validate;

pub use instance::{check_conditions, Conditions, Instance};
pub use network::{shortest_distance, Edge, RoadNetwork};
pub use schedule::{
    can_serve, compatible, count_stops, feasible_schedule, Pickup, PickupPlan,
    MAX_DETOUR_PASSENGERS, MAX_DETOUR_WAYPOINTS,
};
pub use solution::{Assignment, MaterializeError, Solution};
pub use trip::Trip;
pub use validate::{
    solution_metrics, validate_solution, SolutionMetrics, ValidationReport, Violation,
    ViolationKind,
};

use std::fmt;

/// Road network vertex identifier.
pub type VertexId = u32;
/// Non-negative distance in integral units.
pub type Distance = u64;
/// Time in integral units; vehicles travel one distance unit per time unit.
pub type Time = u64;

/// 1-based trip label.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripId(pub u32);

impl TripId {
    /// Dense 0-based index of this trip inside an [`Instance`].
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        TripId(index as u32 + 1)
    }
}

impl fmt::Display for TripId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown trip {0}")]
    UnknownTrip(TripId),
    #[error("self-loop edge at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("trip ids must be contiguous from 1: expected {expected}, found {found}")]
    NonContiguousIds { expected: TripId, found: TripId },
    #[error("trip {trip}: {reason}")]
    InvalidTrip { trip: TripId, reason: String },
    #[error("driver {0} listed among its own passengers")]
    DriverInPassengers(TripId),
    #[error("passenger {0} listed twice")]
    DuplicatePassenger(TripId),
    #[error("solution is invalid: {0}")]
    InvalidSolution(String),
}
