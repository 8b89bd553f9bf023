use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{count_stops, Distance, Instance, ModelError, PickupPlan, Time, TripId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    Capacity,
    Stops,
    Detour,
    Coverage,
    Overlap,
    Time,
    Path,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Capacity => "capacity",
            ViolationKind::Stops => "stops",
            ViolationKind::Detour => "detour",
            ViolationKind::Coverage => "coverage",
            ViolationKind::Overlap => "overlap",
            ViolationKind::Time => "time",
            ViolationKind::Path => "path",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub driver: Option<TripId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.driver {
            Some(d) => write!(f, "{} (driver {d}): {}", self.kind, self.detail),
            None => write!(f, "{}: {}", self.kind, self.detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionMetrics {
    pub drivers: usize,
    pub distance: Distance,
}

/// Checks every driver's load, stops and timetable, disjointness of the
/// served sets, and that every trip is served.
pub fn validate_solution(inst: &Instance, sol: &crate::model::Solution) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |kind, driver: Option<TripId>, detail: String| {
        out.push(Violation {
            kind,
            driver,
            detail,
        })
    };
    let mut owner: BTreeMap<TripId, TripId> = BTreeMap::new();

    for (driver, assignment) in sol.iter() {
        let Ok(trip) = inst.trip(driver) else {
            push(ViolationKind::Coverage, Some(driver), "unknown driver id".into());
            continue;
        };
        if !assignment.served.contains(&driver) {
            push(
                ViolationKind::Coverage,
                Some(driver),
                "driver missing from its own served set".into(),
            );
        }
        let mut known = true;
        for &t in &assignment.served {
            if inst.trip(t).is_err() {
                push(ViolationKind::Coverage, Some(driver), format!("unknown trip {t}"));
                known = false;
                continue;
            }
            if let Some(prev) = owner.insert(t, driver) {
                push(
                    ViolationKind::Overlap,
                    Some(driver),
                    format!("trip {t} also served by driver {prev}"),
                );
            }
        }
        if !known {
            continue;
        }
        let passengers = assignment.passengers(driver);
        if passengers.len() > trip.capacity as usize {
            push(
                ViolationKind::Capacity,
                Some(driver),
                format!("{} passengers exceed capacity {}", passengers.len(), trip.capacity),
            );
        }
        let stops = count_stops(inst, driver, &passengers).unwrap_or(u32::MAX);
        if stops > trip.stop_limit {
            push(
                ViolationKind::Stops,
                Some(driver),
                format!("{stops} stops exceed limit {}", trip.stop_limit),
            );
        }
        for (kind, detail) in check_plan(inst, driver, &passengers, &assignment.plan) {
            push(kind, Some(driver), detail);
        }
    }

    let missing: Vec<String> = inst
        .trip_ids()
        .filter(|t| !owner.contains_key(t))
        .map(|t| t.to_string())
        .collect();
    if !missing.is_empty() {
        push(
            ViolationKind::Coverage,
            None,
            format!("unserved trips: {}", missing.join(" ")),
        );
    }
    ValidationReport::from_violations(out)
}

/// Replays a pickup plan against the network and trip parameters.
fn check_plan(
    inst: &Instance,
    driver: TripId,
    passengers: &[TripId],
    plan: &PickupPlan,
) -> Vec<(ViolationKind, String)> {
    let mut bad = Vec::new();
    let trip = inst.trip(driver).expect("validated driver");
    let net = inst.network();

    let Some(path) = trip.preferred_paths.get(plan.path_index) else {
        bad.push((ViolationKind::Path, format!("no preferred path {}", plan.path_index)));
        return bad;
    };
    let route = &plan.route;
    if route.first() != Some(&trip.source) || route.last() != Some(&trip.destination) {
        bad.push((ViolationKind::Path, "route does not run source to destination".into()));
        return bad;
    }
    let Some(route_len) = net.walk_length(route) else {
        bad.push((ViolationKind::Path, "route uses a missing edge".into()));
        return bad;
    };
    if route != path {
        if trip.detour_limit == 0 {
            bad.push((ViolationKind::Path, "route leaves the preferred path".into()));
        } else {
            let base = inst.path_length(driver, plan.path_index).unwrap_or(0);
            let detour = route_len.saturating_sub(base);
            if detour > trip.detour_limit {
                bad.push((
                    ViolationKind::Detour,
                    format!("detour {detour} exceeds limit {}", trip.detour_limit),
                ));
            }
        }
    }

    let mut prefix = Vec::with_capacity(route.len());
    prefix.push(0);
    for w in route.windows(2) {
        prefix.push(prefix.last().unwrap() + net.edge_length(w[0], w[1]).unwrap_or(0));
    }

    // Locate pickups along the route.
    let mut cursor = 0usize;
    let mut events: Vec<(usize, Time)> = Vec::new();
    let mut boarded: BTreeMap<TripId, usize> = BTreeMap::new();
    let mut time = plan.departure;
    if plan.departure < trip.depart_earliest {
        bad.push((ViolationKind::Time, "departs before earliest departure".into()));
    }
    let mut at = 0usize;
    for pickup in &plan.pickups {
        let Some(idx) = (cursor..route.len()).find(|&i| route[i] == pickup.vertex) else {
            bad.push((
                ViolationKind::Path,
                format!("pickup vertex {} not on route after previous pickup", pickup.vertex),
            ));
            return bad;
        };
        let reach = time + (prefix[idx] - prefix[at]);
        if pickup.time < reach {
            bad.push((
                ViolationKind::Time,
                format!("pickup at {} at time {} before reachable time {reach}", pickup.vertex, pickup.time),
            ));
        }
        for &p in &pickup.passengers {
            let Ok(rider) = inst.trip(p) else {
                bad.push((ViolationKind::Path, format!("unknown passenger {p}")));
                continue;
            };
            if rider.source != pickup.vertex {
                bad.push((
                    ViolationKind::Path,
                    format!("passenger {p} boards away from its source"),
                ));
            }
            if pickup.time < rider.depart_earliest {
                bad.push((
                    ViolationKind::Time,
                    format!("passenger {p} picked up before its earliest departure"),
                ));
            }
            if boarded.insert(p, idx).is_some() {
                bad.push((ViolationKind::Path, format!("passenger {p} boards twice")));
            }
        }
        time = pickup.time.max(reach);
        events.push((idx, time));
        at = idx;
        cursor = idx;
    }
    let expected: BTreeSet<TripId> = passengers.iter().copied().collect();
    let listed: BTreeSet<TripId> = boarded.keys().copied().collect();
    if expected != listed {
        bad.push((
            ViolationKind::Path,
            "pickup plan does not match the served set".into(),
        ));
    }
    let end = route.len() - 1;
    let earliest_arrival = time + (prefix[end] - prefix[at]);
    if plan.arrival < earliest_arrival {
        bad.push((ViolationKind::Time, "arrival earlier than travel allows".into()));
    }
    if plan.arrival.max(earliest_arrival) > trip.arrive_latest {
        bad.push((
            ViolationKind::Time,
            format!("arrives at {} after latest arrival {}", plan.arrival, trip.arrive_latest),
        ));
    }
    for (&p, &pick) in &boarded {
        let Ok(rider) = inst.trip(p) else { continue };
        let Some(drop) = (pick..route.len()).find(|&i| route[i] == rider.destination) else {
            bad.push((
                ViolationKind::Path,
                format!("passenger {p} destination not on route after pickup"),
            ));
            continue;
        };
        let (idx, t) = events
            .iter()
            .rev()
            .find(|(idx, _)| *idx < drop || (*idx == drop && drop == pick))
            .copied()
            .unwrap_or((0, plan.departure));
        let delivered = t + (prefix[drop] - prefix[idx]);
        if delivered > rider.arrive_latest {
            bad.push((
                ViolationKind::Time,
                format!("passenger {p} delivered at {delivered} after {}", rider.arrive_latest),
            ));
        }
    }
    bad
}

/// Driver count and total driven distance of a valid solution.
pub fn solution_metrics(
    inst: &Instance,
    sol: &crate::model::Solution,
) -> Result<SolutionMetrics, ModelError> {
    let report = validate_solution(inst, sol);
    if !report.valid {
        return Err(ModelError::InvalidSolution(report.violations[0].to_string()));
    }
    let distance = sol
        .iter()
        .map(|(_, a)| inst.network().walk_length(&a.plan.route).unwrap_or(0))
        .sum();
    Ok(SolutionMetrics {
        drivers: sol.driver_count(),
        distance,
    })
}
