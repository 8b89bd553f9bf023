//! Driver-minimizing ridesharing.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: road networks, trips, instances, pickup schedules and
//!   solution validation.
//! - [`relation`]: the serve digraph and the source-grouped meta graph with
//!   shortcut removal and inverse-tree labeling.
//! - [`mcmp`]: carpool-matching solvers (greedy stars, StarImprove,
//!   EdgeSwap).
//! - [`phase`]: the three-phase solver for inverse-tree instances.
//! - [`oracle`]: brute-force exact solvers used as ground truth.
//! - [`factory`]: 3-partition gadgets, random inverse-tree instances and the
//!   text codec.

pub mod factory;
pub mod mcmp;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod relation;

pub use model::{
    can_serve, check_conditions, count_stops, feasible_schedule, shortest_distance,
    solution_metrics, validate_solution, Assignment, Conditions, Distance, Instance,
    ModelError, Pickup, PickupPlan, RoadNetwork, Solution, SolutionMetrics, Time, Trip, TripId,
    ValidationReport, VertexId, Violation, ViolationKind,
};
pub use factory::{
    gen_3partition_stop, gen_3partition_stop_scaled, gen_3partition_time, gen_random_tree, read_instance,
    read_solution, write_instance, write_solution, CodecError, RandomTreeSpec, SpecError, ThreePartitionSpec,
};
pub use mcmp::{edge_swap, star_improve, Matching, SolverError, StarConstraints};
pub use oracle::{exact_max_matching, exact_min_distance, exact_min_drivers, OracleBudget, OracleError};
pub use phase::{solve_phases, solve_phases_traced, PhaseError, PhaseTrace};
pub use relation::{
    build_meta_graph, build_serve_digraph, check_transitive, label_nodes, MetaGraph, NodeId, RelationError,
    ServeDigraph,
};
