//! Carpool-matching solvers.
//!
//! A ridesharing instance maps to a maximum carpool matching instance over the
//! serve digraph: every trip is a vertex, an arc `(u, v)` means `v` can carry
//! `u`, and a solution is a set of vertex-disjoint stars whose centers drive.
//! Each matched arc saves one driver, so maximizing the matching minimizes the
//! driver count.

mod edge_swap;
mod matching;
mod star;
mod star_improve;

pub use edge_swap::{edge_swap, edge_swap_from, edge_swap_matching, greedy_maximal_matching, DEFAULT_MAX_K};
pub use matching::{Matching, StarConstraints};
pub use star::{greedy_star, is_improvement, Star};
pub use star_improve::{star_improve, star_improve_run, McmpRun, StarImprover};

use std::collections::BTreeSet;

use crate::model::{Instance, MaterializeError, ModelError, Solution, TripId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown vertex {0}")]
    UnknownVertex(TripId),
    #[error("constraint table covers {found} trips, digraph has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("swap depth {k} outside 1..={max}")]
    InvalidDepth { k: usize, max: usize },
    #[error("driver {driver} cannot schedule star {passengers:?}")]
    InfeasibleStar {
        driver: TripId,
        passengers: Vec<TripId>,
    },
}

impl From<MaterializeError> for SolverError {
    fn from(e: MaterializeError) -> Self {
        match e {
            MaterializeError::Model(m) => SolverError::Model(m),
            MaterializeError::Infeasible { driver, passengers } => {
                SolverError::InfeasibleStar { driver, passengers }
            }
        }
    }
}

/// Turns a matching into a solution: star centers drive their leaves and
/// unmatched trips drive alone.
pub fn matching_to_solution(inst: &Instance, m: &Matching) -> Result<Solution, SolverError> {
    let groups = inst.trip_ids().filter(|&v| m.root_of(v).is_none()).map(|v| {
        let served: BTreeSet<TripId> = m.leaves(v).iter().copied().collect();
        (v, served)
    });
    Ok(Solution::materialize(inst, groups)?)
}
