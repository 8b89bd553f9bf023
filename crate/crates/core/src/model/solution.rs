use std::collections::{BTreeMap, BTreeSet};

use super::{feasible_schedule, Instance, ModelError, PickupPlan, TripId};

/// The trips a driver serves (including itself) and how it picks them up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub served: BTreeSet<TripId>,
    pub plan: PickupPlan,
}

impl Assignment {
    pub fn passengers(&self, driver: TripId) -> Vec<TripId> {
        self.served.iter().copied().filter(|&t| t != driver).collect()
    }
}

/// Driver set `S` with per-driver served sets `σ(i)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Solution {
    assignments: BTreeMap<TripId, Assignment>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaterializeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("driver {driver} cannot serve {passengers:?}")]
    Infeasible {
        driver: TripId,
        passengers: Vec<TripId>,
    },
}

impl Solution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a solution from driver → served-set groups, scheduling every driver.
    ///
    /// The driver is added to its own served set if missing.
    pub fn materialize(
        inst: &Instance,
        groups: impl IntoIterator<Item = (TripId, BTreeSet<TripId>)>,
    ) -> Result<Self, MaterializeError> {
        let mut sol = Solution::new();
        for (driver, mut served) in groups {
            served.insert(driver);
            let passengers: Vec<TripId> = served.iter().copied().filter(|&t| t != driver).collect();
            let plan = feasible_schedule(inst, driver, &passengers)?
                .ok_or(MaterializeError::Infeasible { driver, passengers })?;
            sol.insert(driver, Assignment { served, plan });
        }
        Ok(sol)
    }

    pub fn insert(&mut self, driver: TripId, assignment: Assignment) -> Option<Assignment> {
        self.assignments.insert(driver, assignment)
    }

    pub fn get(&self, driver: TripId) -> Option<&Assignment> {
        self.assignments.get(&driver)
    }

    pub fn get_mut(&mut self, driver: TripId) -> Option<&mut Assignment> {
        self.assignments.get_mut(&driver)
    }

    pub fn drivers(&self) -> impl Iterator<Item = TripId> + '_ {
        self.assignments.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TripId, &Assignment)> {
        self.assignments.iter().map(|(k, v)| (*k, v))
    }

    pub fn driver_count(&self) -> usize {
        self.assignments.len()
    }

    /// Number of trips served by someone other than themselves.
    pub fn passenger_count(&self) -> usize {
        self.assignments
            .iter()
            .map(|(d, a)| a.served.iter().filter(|t| *t != d).count())
            .sum()
    }

    /// Driver → served set view, dropping schedules.
    pub fn groups(&self) -> BTreeMap<TripId, BTreeSet<TripId>> {
        self.assignments
            .iter()
            .map(|(d, a)| (*d, a.served.clone()))
            .collect()
    }
}
