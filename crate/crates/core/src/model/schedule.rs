//! Pickup scheduling for one driver and a set of passengers.
//!
//! A driver leaves its source no earlier than its own earliest departure and
//! follows a route to its destination, waiting at pickup vertices whenever a
//! passenger is not yet available. Without detour the route is one of the
//! driver's preferred paths and pickups happen in path order. With a positive
//! detour limit, off-path routes are tried over every visiting order of the
//! pickup and drop-off vertices (bounded by [`MAX_DETOUR_PASSENGERS`] and
//! [`MAX_DETOUR_WAYPOINTS`]), each leg following a shortest path and each
//! vertex visited once as a waypoint. Every passenger is dropped at the first
//! visit of its destination after its pickup.
//!
//! Schedules are computed earliest-first: since every constraint is either a
//! release time (earliest departures) or a deadline (latest arrivals), the
//! earliest schedule along a fixed route is feasible iff any schedule is.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Distance, Instance, ModelError, Time, Trip, TripId, VertexId};

/// Largest passenger set for which off-path visiting orders are enumerated.
pub const MAX_DETOUR_PASSENGERS: usize = 8;
/// Largest number of distinct off-route pickup and drop-off vertices.
pub const MAX_DETOUR_WAYPOINTS: usize = 8;

/// Passengers boarding at one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pickup {
    pub vertex: VertexId,
    pub time: Time,
    pub passengers: Vec<TripId>,
}

/// A concrete route and timetable for one driver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PickupPlan {
    /// Index of the preferred path the route is measured against.
    pub path_index: usize,
    /// Vertices driven, source to destination.
    pub route: Vec<VertexId>,
    pub departure: Time,
    /// Pickups in route order; a pickup at the driver's source costs no stop.
    pub pickups: Vec<Pickup>,
    pub arrival: Time,
}

impl PickupPlan {
    /// Number of pickups away from the driver's own source.
    pub fn stop_count(&self) -> usize {
        let source = self.route.first().copied();
        self.pickups
            .iter()
            .filter(|p| Some(p.vertex) != source)
            .count()
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Limits {
    pub capacity: bool,
    pub stops: bool,
}

impl Limits {
    pub const ALL: Limits = Limits {
        capacity: true,
        stops: true,
    };
    pub const ROUTE_ONLY: Limits = Limits {
        capacity: false,
        stops: false,
    };
}

/// Finds a feasible pickup plan for `driver` carrying `passengers`, or `None`.
///
/// When several routes are feasible the shortest one wins, ties going to the
/// lowest preferred-path index.
pub fn feasible_schedule(
    inst: &Instance,
    driver: TripId,
    passengers: &[TripId],
) -> Result<Option<PickupPlan>, ModelError> {
    plan_schedule(inst, driver, passengers, Limits::ALL)
}

/// Whether `i` can serve `j` (every trip can serve itself).
pub fn can_serve(inst: &Instance, i: TripId, j: TripId) -> Result<bool, ModelError> {
    inst.trip(i)?;
    inst.trip(j)?;
    if i == j {
        return Ok(true);
    }
    Ok(feasible_schedule(inst, i, &[j])?.is_some())
}

/// Route and time compatibility of `i` carrying `j`, ignoring seat and stop limits.
pub fn compatible(inst: &Instance, i: TripId, j: TripId) -> Result<bool, ModelError> {
    inst.trip(i)?;
    inst.trip(j)?;
    if i == j {
        return Ok(true);
    }
    Ok(plan_schedule(inst, i, &[j], Limits::ROUTE_ONLY)?.is_some())
}

/// Distinct pickup sources among `passengers` other than the driver's source.
pub fn count_stops(inst: &Instance, driver: TripId, passengers: &[TripId]) -> Result<u32, ModelError> {
    let source = inst.trip(driver)?.source;
    let mut sources = BTreeSet::new();
    for &p in passengers {
        let s = inst.trip(p)?.source;
        if s != source {
            sources.insert(s);
        }
    }
    Ok(sources.len() as u32)
}

pub(crate) fn plan_schedule(
    inst: &Instance,
    driver: TripId,
    passengers: &[TripId],
    limits: Limits,
) -> Result<Option<PickupPlan>, ModelError> {
    let trip = inst.trip(driver)?;
    let mut seen = BTreeSet::new();
    let mut riders = Vec::with_capacity(passengers.len());
    for &p in passengers {
        if p == driver {
            return Err(ModelError::DriverInPassengers(p));
        }
        if !seen.insert(p) {
            return Err(ModelError::DuplicatePassenger(p));
        }
        riders.push(inst.trip(p)?);
    }
    if limits.capacity && riders.len() > trip.capacity as usize {
        return Ok(None);
    }
    if limits.stops && count_stops(inst, driver, passengers)? > trip.stop_limit {
        return Ok(None);
    }

    let mut best: Option<(Distance, PickupPlan)> = None;
    fn offer(best: &mut Option<(Distance, PickupPlan)>, distance: Distance, plan: PickupPlan) {
        if best.as_ref().is_none_or(|(d, _)| distance < *d) {
            *best = Some((distance, plan));
        }
    }

    for (k, path) in trip.preferred_paths.iter().enumerate() {
        let info = inst.path_info(driver, k);
        let mut legs = Vec::with_capacity(riders.len());
        let mut on_path = true;
        for r in &riders {
            match (info.position.get(&r.source), info.position.get(&r.destination)) {
                (Some(&at), Some(&drop)) if drop >= at => legs.push(Leg {
                    rider: r,
                    pickup: at,
                    drop,
                }),
                _ => {
                    on_path = false;
                    break;
                }
            }
        }
        if !on_path {
            continue;
        }
        if let Some(plan) = simulate(trip, k, path, &info.prefix, &legs) {
            offer(&mut best, info.length(), plan);
        }
    }

    if best.is_none() && trip.detour_limit > 0 && !riders.is_empty() {
        if riders.len() > MAX_DETOUR_PASSENGERS {
            return Ok(None);
        }
        for (distance, plan) in detour_plans(inst, trip, &riders)? {
            offer(&mut best, distance, plan);
        }
    }
    Ok(best.map(|(_, plan)| plan))
}

struct Leg<'a> {
    rider: &'a Trip,
    pickup: usize,
    drop: usize,
}

/// Earliest-first timetable along `route` (with prefix distances `prefix`).
fn simulate(
    driver: &Trip,
    path_index: usize,
    route: &[VertexId],
    prefix: &[Distance],
    legs: &[Leg<'_>],
) -> Option<PickupPlan> {
    let mut groups: BTreeMap<usize, Vec<&Leg<'_>>> = BTreeMap::new();
    for leg in legs {
        groups.entry(leg.pickup).or_default().push(leg);
    }

    let mut time = driver.depart_earliest;
    let mut departure = time;
    let mut at = 0usize;
    // (route index, time the driver leaves it)
    let mut events: Vec<(usize, Time)> = Vec::with_capacity(groups.len() + 1);
    let mut pickups = Vec::with_capacity(groups.len());
    for (&idx, group) in &groups {
        time += prefix[idx] - prefix[at];
        let ready = group.iter().map(|l| l.rider.depart_earliest).max().unwrap_or(0);
        time = time.max(ready);
        if idx == 0 {
            departure = time;
        }
        let mut ids: Vec<TripId> = group.iter().map(|l| l.rider.id).collect();
        ids.sort_unstable();
        pickups.push(Pickup {
            vertex: route[idx],
            time,
            passengers: ids,
        });
        events.push((idx, time));
        at = idx;
    }
    let end = route.len() - 1;
    let arrival = time + prefix[end] - prefix[at];
    if arrival > driver.arrive_latest {
        return None;
    }
    for leg in legs {
        // Last event at or before the drop-off that is not later than it; the
        // passenger's own pickup qualifies, so the search always succeeds.
        let (idx, t) = events
            .iter()
            .rev()
            .find(|(idx, _)| *idx < leg.drop || (*idx == leg.drop && *idx == leg.pickup))
            .copied()
            .unwrap_or((0, departure));
        let delivered = t + prefix[leg.drop] - prefix[idx];
        if delivered > leg.rider.arrive_latest {
            return None;
        }
    }
    Some(PickupPlan {
        path_index,
        route: route.to_vec(),
        departure,
        pickups,
        arrival,
    })
}

fn detour_plans(
    inst: &Instance,
    trip: &Trip,
    riders: &[&Trip],
) -> Result<Vec<(Distance, PickupPlan)>, ModelError> {
    let net = inst.network();
    let stops: BTreeSet<VertexId> = riders.iter().map(|r| r.source).filter(|&s| s != trip.source).collect();
    let visits: Vec<VertexId> = riders
        .iter()
        .map(|r| r.destination)
        .filter(|&t| t != trip.destination)
        .chain(stops.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if visits.len() > MAX_DETOUR_WAYPOINTS {
        return Ok(Vec::new());
    }

    let mut waypoints: Vec<VertexId> = vec![trip.source, trip.destination];
    waypoints.extend(&visits);
    let mut legs: HashMap<(VertexId, VertexId), Option<Vec<VertexId>>> = HashMap::new();
    for &a in &waypoints {
        for &b in &waypoints {
            if a != b {
                legs.insert((a, b), net.shortest_path(a, b)?);
            }
        }
    }
    let baseline: Vec<Distance> = (0..trip.preferred_paths.len())
        .map(|k| inst.path_info(trip.id, k).length())
        .collect();

    let mut out = Vec::new();
    for order in permutations(&visits) {
        let mut route = vec![trip.source];
        let mut ok = true;
        let mut from = trip.source;
        for &to in order.iter().chain(std::iter::once(&trip.destination)) {
            if from == to {
                continue;
            }
            match &legs[&(from, to)] {
                Some(seg) => route.extend_from_slice(&seg[1..]),
                None => {
                    ok = false;
                    break;
                }
            }
            from = to;
        }
        if !ok {
            continue;
        }
        let mut prefix = Vec::with_capacity(route.len());
        prefix.push(0);
        for w in route.windows(2) {
            let last = *prefix.last().unwrap();
            prefix.push(last + net.edge_length(w[0], w[1]).unwrap_or(0));
        }
        let length = *prefix.last().unwrap();
        let Some(path_index) = baseline
            .iter()
            .position(|&base| length.saturating_sub(base) <= trip.detour_limit)
        else {
            continue;
        };

        // Each waypoint is reached at the first matching vertex in visiting order.
        let mut stop_index = HashMap::new();
        let mut cursor = 0usize;
        for &s in &order {
            let idx = (cursor..route.len()).find(|&i| route[i] == s);
            match idx {
                Some(i) => {
                    stop_index.insert(s, i);
                    cursor = i;
                }
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let mut route_legs = Vec::with_capacity(riders.len());
        for r in riders {
            let pickup = if r.source == trip.source {
                0
            } else {
                stop_index[&r.source]
            };
            match (pickup..route.len()).find(|&i| route[i] == r.destination) {
                Some(drop) => route_legs.push(Leg {
                    rider: r,
                    pickup,
                    drop,
                }),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if let Some(plan) = simulate(trip, path_index, &route, &prefix, &route_legs) {
            out.push((length, plan));
        }
    }
    Ok(out)
}

/// All orderings of `items` in lexicographic order of positions.
fn permutations<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    fn rec<T: Copy>(items: &[T], used: &mut Vec<bool>, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == items.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                cur.push(items[i]);
                rec(items, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(items, &mut vec![false; items.len()], &mut Vec::new(), &mut out);
    out
}
