//! Brute-force exact solvers for small instances.
//!
//! Driver sets are enumerated by size. Trips nobody can serve always drive,
//! and interchangeable trips (identical parameters) are handled as classes,
//! so only the number of drivers taken from each class matters. For each
//! candidate driver set a depth-first search assigns the remaining trips as
//! passengers under seat, stop and schedule limits.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use crate::mcmp::StarConstraints;
use crate::model::{feasible_schedule, Distance, Instance, ModelError, Solution, TripId, VertexId};
use crate::relation::{build_serve_digraph, ServeDigraph};

/// Limits on exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_trips: usize,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_trips: 12,
            time_limit: Duration::from_secs(60),
        }
    }
}

impl OracleBudget {
    /// Larger trip cap for instances with few trip classes, such as the
    /// 3-partition gadgets.
    pub fn structured() -> Self {
        Self {
            max_trips: 24,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("oracle budget exceeded: {trips} trips, limit {max}")]
    TooManyTrips { trips: usize, max: usize },
    #[error("oracle budget exceeded: time limit of {0:?} reached")]
    TimeLimit(Duration),
    #[error("instance has no feasible solution")]
    NoSolution,
}

impl OracleError {
    pub fn is_budget(&self) -> bool {
        matches!(self, OracleError::TooManyTrips { .. } | OracleError::TimeLimit(_))
    }
}

struct Clock {
    start: Instant,
    limit: Duration,
    ticks: u32,
}

impl Clock {
    fn new(limit: Duration) -> Self {
        Self {
            start: Instant::now(),
            limit,
            ticks: 0,
        }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(1024) && self.start.elapsed() > self.limit {
            return Err(OracleError::TimeLimit(self.limit));
        }
        Ok(())
    }
}

/// Callback run on each complete passenger assignment.
type Visit<'v, 'a> = dyn FnMut(&mut Search<'a>, &[Vec<usize>]) -> Result<bool, OracleError> + 'v;

/// Search context shared by both objectives.
struct Search<'a> {
    inst: &'a Instance,
    /// `serves[d][p]`: trip index `d` can carry trip index `p`.
    serves: Vec<Vec<bool>>,
    class: Vec<usize>,
    solo_ok: Vec<bool>,
    source: Vec<VertexId>,
    /// Seat, stop and pairwise checks already imply a schedule exists.
    pairwise: bool,
    clock: Clock,
}

type Groups = BTreeMap<TripId, BTreeSet<TripId>>;

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, budget: OracleBudget) -> Result<Self, OracleError> {
        if inst.len() > budget.max_trips {
            return Err(OracleError::TooManyTrips {
                trips: inst.len(),
                max: budget.max_trips,
            });
        }
        let l = inst.len();
        let dg = build_serve_digraph(inst)?;
        let mut serves = vec![vec![false; l]; l];
        for (u, v) in dg.arcs() {
            serves[v.index()][u.index()] = true;
        }
        let mut keys: HashMap<_, usize> = HashMap::new();
        let class = inst
            .trips()
            .iter()
            .map(|t| {
                let key = (
                    t.source,
                    t.destination,
                    t.capacity,
                    t.detour_limit,
                    t.preferred_paths.clone(),
                    t.stop_limit,
                    t.depart_earliest,
                    t.arrive_latest,
                );
                let next = keys.len();
                *keys.entry(key).or_insert(next)
            })
            .collect();
        let mut solo_ok = Vec::with_capacity(l);
        for id in inst.trip_ids() {
            solo_ok.push(feasible_schedule(inst, id, &[])?.is_some());
        }
        let c = inst.conditions();
        Ok(Self {
            inst,
            serves,
            class,
            solo_ok,
            source: inst.trips().iter().map(|t| t.source).collect(),
            pairwise: inst.common_destination().is_some() && c.zero_detour && c.fixed_path && c.common_window,
            clock: Clock::new(budget.time_limit),
        })
    }

    /// Trips nobody else can serve, and the classes of the rest.
    fn split(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let l = self.inst.len();
        let forced: Vec<usize> = (0..l).filter(|&p| (0..l).all(|d| d == p || !self.serves[d][p])).collect();
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for t in 0..l {
            if !forced.contains(&t) && self.solo_ok[t] {
                classes.entry(self.class[t]).or_default().push(t);
            }
        }
        let mut classes: Vec<Vec<usize>> = classes.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        (forced, classes)
    }

    /// All driver sets built from `forced` plus the lowest members of each
    /// class, grouped by size and sorted lexicographically within a size.
    fn driver_sets(forced: &[usize], classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
        fn rec(classes: &[Vec<usize>], i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == classes.len() {
                let mut set = cur.clone();
                set.sort_unstable();
                out.push(set);
                return;
            }
            let base = cur.len();
            for c in 0..=classes[i].len() {
                cur.truncate(base);
                cur.extend_from_slice(&classes[i][..c]);
                rec(classes, i + 1, cur, out);
            }
            cur.truncate(base);
        }
        let mut out = Vec::new();
        rec(classes, 0, &mut forced.to_vec(), &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Cheap necessary conditions: enough seats, and every passenger has a
    /// possible driver.
    fn plausible(&self, drivers: &[usize]) -> bool {
        let l = self.inst.len();
        if drivers.iter().any(|&d| !self.solo_ok[d]) {
            return false;
        }
        let seats: usize = drivers
            .iter()
            .map(|&d| self.inst.trips()[d].capacity as usize + 1)
            .sum();
        if seats < l {
            return false;
        }
        let is_driver: BTreeSet<usize> = drivers.iter().copied().collect();
        (0..l)
            .filter(|p| !is_driver.contains(p))
            .all(|p| drivers.iter().any(|&d| self.serves[d][p]))
    }

    /// Depth-first passenger assignment; `visit` is called on every complete
    /// assignment and returns `true` to stop the search.
    fn assign(
        &mut self,
        drivers: &[usize],
        visit: &mut Visit<'_, 'a>,
    ) -> Result<bool, OracleError> {
        let l = self.inst.len();
        let is_driver: BTreeSet<usize> = drivers.iter().copied().collect();
        let mut passengers: Vec<usize> = (0..l).filter(|p| !is_driver.contains(p)).collect();
        let options = |p: usize| drivers.iter().filter(|&&d| self.serves[d][p]).count();
        passengers.sort_by_key(|&p| (options(p), self.class[p], p));
        let mut state = DfsState {
            load: vec![Vec::new(); drivers.len()],
            stops: vec![BTreeSet::new(); drivers.len()],
            chosen: Vec::with_capacity(passengers.len()),
        };
        self.dfs(drivers, &passengers, 0, &mut state, visit)
    }

    fn dfs(
        &mut self,
        drivers: &[usize],
        passengers: &[usize],
        k: usize,
        st: &mut DfsState,
        visit: &mut Visit<'_, 'a>,
    ) -> Result<bool, OracleError> {
        self.clock.tick()?;
        if k == passengers.len() {
            let load = st.load.clone();
            return visit(self, &load);
        }
        if !self.room_left(drivers, &passengers[k..], st) {
            return Ok(false);
        }
        let p = passengers[k];
        // Interchangeable passengers take non-decreasing driver positions.
        let lo = match k.checked_sub(1) {
            Some(prev) if self.class[passengers[prev]] == self.class[p] => st.chosen[prev],
            _ => 0,
        };
        for di in lo..drivers.len() {
            let d = drivers[di];
            if !self.serves[d][p] {
                continue;
            }
            let trip = &self.inst.trips()[d];
            if st.load[di].len() >= trip.capacity as usize {
                continue;
            }
            let src = self.source[p];
            let new_stop = src != self.source[d] && !st.stops[di].contains(&src);
            if new_stop && st.stops[di].len() >= trip.stop_limit as usize {
                continue;
            }
            st.load[di].push(p);
            if !self.pairwise {
                let ids: Vec<TripId> = st.load[di].iter().map(|&t| TripId::from_index(t)).collect();
                if feasible_schedule(self.inst, TripId::from_index(d), &ids)?.is_none() {
                    st.load[di].pop();
                    continue;
                }
            }
            if new_stop {
                st.stops[di].insert(src);
            }
            st.chosen.push(di);
            let done = self.dfs(drivers, passengers, k + 1, st, visit)?;
            st.chosen.pop();
            if new_stop {
                st.stops[di].remove(&src);
            }
            st.load[di].pop();
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether the open seats could still hold every remaining passenger.
    fn room_left(&self, drivers: &[usize], rest: &[usize], st: &DfsState) -> bool {
        let mut seats = 0usize;
        for (di, &d) in drivers.iter().enumerate() {
            let trip = &self.inst.trips()[d];
            let free = (trip.capacity as usize).saturating_sub(st.load[di].len());
            if free == 0 {
                continue;
            }
            let stops_left = st.stops[di].len() < trip.stop_limit as usize;
            let useful = rest.iter().filter(|&&p| {
                self.serves[d][p]
                    && (stops_left || self.source[p] == self.source[d] || st.stops[di].contains(&self.source[p]))
            });
            seats += free.min(useful.count());
        }
        seats >= rest.len()
    }

    fn groups(drivers: &[usize], load: &[Vec<usize>]) -> Groups {
        drivers
            .iter()
            .zip(load)
            .map(|(&d, ps)| {
                let mut served: BTreeSet<TripId> = ps.iter().map(|&p| TripId::from_index(p)).collect();
                served.insert(TripId::from_index(d));
                (TripId::from_index(d), served)
            })
            .collect()
    }

    fn materialize(&self, groups: Groups) -> Result<Solution, OracleError> {
        Solution::materialize(self.inst, groups).map_err(|e| match e {
            crate::model::MaterializeError::Model(m) => OracleError::Model(m),
            crate::model::MaterializeError::Infeasible { .. } => OracleError::NoSolution,
        })
    }

    fn route_cost(&self, groups: &Groups) -> Result<Option<Distance>, OracleError> {
        let mut total = 0;
        for (d, served) in groups {
            let ps: Vec<TripId> = served.iter().copied().filter(|t| t != d).collect();
            let Some(plan) = feasible_schedule(self.inst, *d, &ps)? else {
                return Ok(None);
            };
            total += self.inst.network().walk_length(&plan.route).unwrap_or(Distance::MAX);
        }
        Ok(Some(total))
    }
}

struct DfsState {
    load: Vec<Vec<usize>>,
    stops: Vec<BTreeSet<VertexId>>,
    chosen: Vec<usize>,
}

/// A solution with the fewest drivers.
pub fn exact_min_drivers(inst: &Instance, budget: OracleBudget) -> Result<Solution, OracleError> {
    if inst.is_empty() {
        return Ok(Solution::new());
    }
    let mut search = Search::new(inst, budget)?;
    let (forced, classes) = search.split();
    for drivers in Search::driver_sets(&forced, &classes) {
        if !search.plausible(&drivers) {
            continue;
        }
        let mut found: Option<Groups> = None;
        search.assign(&drivers, &mut |_, load| {
            found = Some(Search::groups(&drivers, load));
            Ok(true)
        })?;
        if let Some(groups) = found {
            return search.materialize(groups);
        }
    }
    Err(OracleError::NoSolution)
}

/// A solution with the least total distance driven.
pub fn exact_min_distance(inst: &Instance, budget: OracleBudget) -> Result<Solution, OracleError> {
    if inst.is_empty() {
        return Ok(Solution::new());
    }
    let mut search = Search::new(inst, budget)?;
    let (forced, classes) = search.split();
    let base: Vec<Distance> = inst
        .trip_ids()
        .map(|id| {
            (0..inst.trips()[id.index()].preferred_paths.len())
                .filter_map(|k| inst.path_length(id, k).ok())
                .min()
                .unwrap_or(0)
        })
        .collect();
    // Without detours or path choice a driver's distance is fixed.
    let c = inst.conditions();
    let fixed_cost = c.zero_detour && c.fixed_path;
    let mut sets: Vec<(Distance, Vec<usize>)> = Search::driver_sets(&forced, &classes)
        .into_iter()
        .map(|s| (s.iter().map(|&d| base[d]).sum(), s))
        .collect();
    sets.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.len().cmp(&b.1.len())).then_with(|| a.1.cmp(&b.1)));

    let mut best: Option<(Distance, Groups)> = None;
    for (bound, drivers) in sets {
        if best.as_ref().is_some_and(|(b, _)| bound >= *b) {
            break;
        }
        if !search.plausible(&drivers) {
            continue;
        }
        search.assign(&drivers, &mut |s, load| {
            let groups = Search::groups(&drivers, load);
            let cost = if fixed_cost { Some(bound) } else { s.route_cost(&groups)? };
            if let Some(cost) = cost {
                if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                    best = Some((cost, groups));
                }
            }
            // With fixed costs every completion costs `bound`; the first is enough.
            Ok(fixed_cost || best.as_ref().is_some_and(|(b, _)| *b <= bound))
        })?;
    }
    match best {
        Some((_, groups)) => search.materialize(groups),
        None => Err(OracleError::NoSolution),
    }
}

/// Largest number of passengers over all vertex-disjoint star packings.
pub fn exact_max_matching(dg: &ServeDigraph, sc: &StarConstraints, budget: OracleBudget) -> Result<usize, OracleError> {
    let n = dg.vertex_count();
    if n > budget.max_trips {
        return Err(OracleError::TooManyTrips {
            trips: n,
            max: budget.max_trips,
        });
    }
    struct Packing<'a> {
        dg: &'a ServeDigraph,
        sc: &'a StarConstraints,
        is_leaf: Vec<bool>,
        leaves: Vec<Vec<TripId>>,
        can_leaf_after: Vec<usize>,
        best: usize,
        clock: Clock,
    }
    impl Packing<'_> {
        fn rec(&mut self, v: usize, matched: usize) -> Result<(), OracleError> {
            self.clock.tick()?;
            if matched + self.can_leaf_after[v] <= self.best {
                return Ok(());
            }
            if v == self.is_leaf.len() {
                self.best = matched;
                return Ok(());
            }
            let u = TripId::from_index(v);
            if self.leaves[v].is_empty() {
                for &r in self.dg.out_neighbors(u) {
                    let ri = r.index();
                    if self.is_leaf[ri] {
                        continue;
                    }
                    let mut set: BTreeSet<TripId> = self.leaves[ri].iter().copied().collect();
                    set.insert(u);
                    if !self.sc.admits(r, &set) {
                        continue;
                    }
                    self.is_leaf[v] = true;
                    self.leaves[ri].push(u);
                    self.rec(v + 1, matched + 1)?;
                    self.leaves[ri].pop();
                    self.is_leaf[v] = false;
                }
            }
            self.rec(v + 1, matched)
        }
    }
    sc.check_len(dg).map_err(|_| OracleError::NoSolution)?;
    let mut can_leaf_after = vec![0usize; n + 1];
    for v in (0..n).rev() {
        let has_root = !dg.out_neighbors(TripId::from_index(v)).is_empty();
        can_leaf_after[v] = can_leaf_after[v + 1] + usize::from(has_root);
    }
    let mut p = Packing {
        dg,
        sc,
        is_leaf: vec![false; n],
        leaves: vec![Vec::new(); n],
        can_leaf_after,
        best: 0,
        clock: Clock::new(budget.time_limit),
    };
    p.rec(0, 0)?;
    Ok(p.best)
}
