//! Three-phase driver minimization on inverse-tree meta graphs.
//!
//! Trips split into `W` (trips that can only serve themselves: no seats, or
//! no stop budget and nobody else at their source) and `X = R \ W`. Phase I
//! covers `W`, largest group first, with drivers from ancestor nodes. Phase II
//! covers the remaining zero-stop trips `Z`, pairing them within their node
//! first. Phase III walks the nodes from the top label down and fills seats
//! with everything left. The driver count is within `(K + 2) / 2` of optimal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{feasible_schedule, Instance, ModelError, Solution, TripId};
use crate::relation::{label_nodes, MetaGraph, NodeId, RelationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PhaseError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("condition {0} violated")]
    Condition(u8),
    #[error("trip {0} cannot make its own journey in its time window")]
    Infeasible(TripId),
    #[error(transparent)]
    Relation(RelationError),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl From<RelationError> for PhaseError {
    fn from(e: RelationError) -> Self {
        match e {
            RelationError::Model(m) => PhaseError::Model(m),
            RelationError::ConditionViolated(k) => PhaseError::Condition(k),
            other => PhaseError::Relation(other),
        }
    }
}

/// One assignment: `driver` takes on `served` (empty when it only starts
/// driving itself). `free` and `stop` are the driver's values afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseEvent {
    pub phase: u8,
    pub driver: TripId,
    pub new_driver: bool,
    pub served: Vec<TripId>,
    pub free: u32,
    pub stop: u32,
}

impl fmt::Display for PhaseEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let served: Vec<String> = self.served.iter().map(|t| t.to_string()).collect();
        write!(
            f,
            "phase={} driver={}{} served={} free={} stop={}",
            self.phase,
            self.driver,
            if self.new_driver { " new" } else { "" },
            if served.is_empty() { "-".to_string() } else { served.join(",") },
            self.free,
            self.stop
        )
    }
}

/// Everything a run did, for debugging and invariant checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhaseTrace {
    pub events: Vec<PhaseEvent>,
    pub w: BTreeSet<TripId>,
    pub z: BTreeSet<TripId>,
    /// `σ(S)` after each completed phase.
    pub covered: Vec<BTreeSet<TripId>>,
}

impl PhaseTrace {
    pub fn lines(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// `(W, X)` for the nodes of `mg`.
pub fn partition_trips(inst: &Instance, mg: &MetaGraph) -> Result<(BTreeSet<TripId>, BTreeSet<TripId>), PhaseError> {
    let mut w = BTreeSet::new();
    let mut x = BTreeSet::new();
    for t in inst.trips() {
        let node = mg
            .node_of(t.id)
            .ok_or_else(|| PhaseError::Internal(format!("trip {} has no node", t.id)))?;
        let alone = mg.node(node)?.trips.len() == 1;
        if t.capacity == 0 || (t.stop_limit == 0 && alone) {
            w.insert(t.id);
        } else {
            x.insert(t.id);
        }
    }
    Ok((w, x))
}

/// Partial solution of a run in progress.
#[derive(Debug, Clone)]
pub struct PhaseState<'a> {
    inst: &'a Instance,
    mg: MetaGraph,
    node: Vec<usize>,
    label: Vec<usize>,
    /// Trips sorted by (node label, id); `offset[l - 1]..offset[l]` holds label `l`.
    order: Vec<TripId>,
    offset: Vec<usize>,
    in_w: Vec<bool>,
    served_by: Vec<Option<TripId>>,
    sigma: BTreeMap<TripId, BTreeSet<TripId>>,
    free: Vec<u32>,
    stop_nodes: Vec<BTreeSet<usize>>,
    trace: PhaseTrace,
}

impl<'a> PhaseState<'a> {
    /// Empty partial solution over a labeled inverse-tree meta graph.
    pub fn new(inst: &'a Instance, mg: MetaGraph) -> Result<Self, PhaseError> {
        mg.inverse_tree_sink()?;
        if !mg.is_labeled() {
            return Err(RelationError::Unlabeled.into());
        }
        let l = inst.len();
        let p = mg.node_count();
        let mut node = vec![0usize; l];
        for id in inst.trip_ids() {
            node[id.index()] = mg
                .node_of(id)
                .ok_or_else(|| PhaseError::Internal(format!("trip {id} has no node")))?
                .0;
        }
        let label: Vec<usize> = (0..p).map(|k| mg.label(NodeId(k)).unwrap_or(0)).collect();
        let mut order: Vec<TripId> = inst.trip_ids().collect();
        order.sort_by_key(|t| (label[node[t.index()]], *t));
        let mut offset = vec![0usize; p + 1];
        for t in &order {
            offset[label[node[t.index()]]] += 1;
        }
        for k in 1..=p {
            offset[k] += offset[k - 1];
        }
        let (w, _) = partition_trips(inst, &mg)?;
        let mut in_w = vec![false; l];
        for t in &w {
            in_w[t.index()] = true;
        }
        Ok(Self {
            inst,
            mg,
            node,
            label,
            order,
            offset,
            in_w,
            served_by: vec![None; l],
            sigma: BTreeMap::new(),
            free: inst.trips().iter().map(|t| t.capacity).collect(),
            stop_nodes: vec![BTreeSet::new(); l],
            trace: PhaseTrace {
                w,
                ..PhaseTrace::default()
            },
        })
    }

    pub fn meta_graph(&self) -> &MetaGraph {
        &self.mg
    }

    pub fn trace(&self) -> &PhaseTrace {
        &self.trace
    }

    /// `σ(S)`.
    pub fn covered(&self) -> BTreeSet<TripId> {
        self.sigma.values().flatten().copied().collect()
    }

    pub fn drivers(&self) -> impl Iterator<Item = TripId> + '_ {
        self.sigma.keys().copied()
    }

    pub fn free(&self, i: TripId) -> u32 {
        self.free[i.index()]
    }

    pub fn stop(&self, i: TripId) -> u32 {
        self.stop_nodes[i.index()].len() as u32
    }

    pub fn served_set(&self, i: TripId) -> Option<&BTreeSet<TripId>> {
        self.sigma.get(&i)
    }

    fn stop_limit(&self, i: TripId) -> u32 {
        self.inst.trips()[i.index()].stop_limit
    }

    fn capacity(&self, i: TripId) -> u32 {
        self.inst.trips()[i.index()].capacity
    }

    fn is_driver(&self, i: TripId) -> bool {
        self.sigma.contains_key(&i)
    }

    fn is_served(&self, i: TripId) -> bool {
        self.served_by[i.index()].is_some()
    }

    fn is_x(&self, i: TripId) -> bool {
        !self.in_w[i.index()]
    }

    fn node_of(&self, i: TripId) -> usize {
        self.node[i.index()]
    }

    fn node_trips(&self, mu: usize) -> &[TripId] {
        let l = self.label[mu];
        &self.order[self.offset[l - 1]..self.offset[l]]
    }

    /// Trips of `A*_μ`: the labels `label(μ) ..= label(μ) + span - 1`.
    fn ancestor_trips(&self, mu: usize) -> &[TripId] {
        let l = self.label[mu];
        let span = self.mg.ancestor_span(NodeId(mu)).unwrap_or(1);
        &self.order[self.offset[l - 1]..self.offset[l - 1 + span]]
    }

    fn nodes_by_decreasing_label(&self) -> Vec<usize> {
        let mut nodes: Vec<usize> = (0..self.label.len()).collect();
        nodes.sort_by_key(|&k| std::cmp::Reverse(self.label[k]));
        nodes
    }

    /// Makes `x` a driver if needed and adds `passengers` to `σ(x)`.
    fn assign(&mut self, phase: u8, x: TripId, passengers: &[TripId]) -> Result<(), PhaseError> {
        let new_driver = !self.is_driver(x);
        if new_driver {
            if self.is_served(x) {
                return Err(PhaseError::Internal(format!("passenger {x} chosen as driver")));
            }
            self.sigma.insert(x, BTreeSet::from([x]));
            self.served_by[x.index()] = Some(x);
        }
        let own = self.node_of(x);
        for &p in passengers {
            if self.is_served(p) {
                return Err(PhaseError::Internal(format!("trip {p} served twice")));
            }
            let Some(seats) = self.free[x.index()].checked_sub(1) else {
                return Err(PhaseError::Internal(format!("driver {x} out of seats")));
            };
            self.free[x.index()] = seats;
            self.served_by[p.index()] = Some(x);
            self.sigma.entry(x).or_default().insert(p);
            let at = self.node_of(p);
            if at != own {
                self.stop_nodes[x.index()].insert(at);
            }
        }
        if self.stop(x) > self.stop_limit(x) {
            return Err(PhaseError::Internal(format!("driver {x} over its stop limit")));
        }
        self.trace.events.push(PhaseEvent {
            phase,
            driver: x,
            new_driver,
            served: passengers.to_vec(),
            free: self.free(x),
            stop: self.stop(x),
        });
        Ok(())
    }

    /// `X̄`: unassigned `X` trips of `A*_μ` with stop budget or inside `μ`.
    fn x_bar(&self, mu: usize) -> Vec<TripId> {
        self.ancestor_trips(mu)
            .iter()
            .copied()
            .filter(|&i| {
                self.is_x(i) && !self.is_served(i) && (self.stop_limit(i) > 0 || self.node_of(i) == mu)
            })
            .collect()
    }

    /// `X̂₂`: drivers of `A*_μ` with a free seat and stop budget (or inside `μ`).
    fn x_hat2(&self, mu: usize) -> Vec<TripId> {
        self.ancestor_trips(mu)
            .iter()
            .copied()
            .filter(|&i| {
                self.is_driver(i)
                    && self.free(i) > 0
                    && (self.stop(i) < self.stop_limit(i) || self.node_of(i) == mu)
            })
            .collect()
    }

    fn max_free(&self, cands: &[TripId]) -> Option<TripId> {
        // Candidates come sorted within a node but not across nodes.
        cands.iter().copied().min_by_key(|&i| (std::cmp::Reverse(self.free(i)), i))
    }

    /// Serves all of `W`.
    pub fn phase1(&mut self) -> Result<(), PhaseError> {
        let p = self.label.len();
        let mut w_left: Vec<Vec<TripId>> = vec![Vec::new(); p];
        for &t in &self.trace.w {
            if !self.is_served(t) {
                w_left[self.node_of(t)].push(t);
            }
        }
        while let Some(mu) = (0..p)
            .filter(|&k| !w_left[k].is_empty())
            .max_by_key(|&k| (w_left[k].len(), self.label[k]))
        {
            let need = w_left[mu].len();
            let mut cands: Vec<TripId> = self
                .ancestor_trips(mu)
                .iter()
                .copied()
                .filter(|&i| {
                    self.is_driver(i)
                        && self.node_of(i) != mu
                        && self.free(i) > 0
                        && self.stop(i) < self.stop_limit(i)
                })
                .collect();
            cands.extend(self.x_bar(mu));
            if cands.is_empty() {
                for w in std::mem::take(&mut w_left[mu]) {
                    self.assign(1, w, &[])?;
                }
                continue;
            }
            let slack = |i: TripId| self.stop_limit(i) - self.stop(i);
            let x = cands
                .iter()
                .copied()
                .filter(|&i| self.free(i) as usize >= need)
                .min_by_key(|&i| (slack(i), i))
                .or_else(|| {
                    cands
                        .iter()
                        .copied()
                        .min_by_key(|&i| (std::cmp::Reverse(self.free(i)), slack(i), i))
                })
                .expect("candidates are nonempty");
            let take = (self.free(x) as usize).min(need);
            let served: Vec<TripId> = w_left[mu].drain(..take).collect();
            self.assign(1, x, &served)?;
        }
        self.trace.covered.push(self.covered());
        Ok(())
    }

    /// Serves the zero-stop trips left after phase I.
    pub fn phase2(&mut self) -> Result<(), PhaseError> {
        let p = self.label.len();
        let mut z_left: Vec<Vec<TripId>> = vec![Vec::new(); p];
        for id in self.inst.trip_ids() {
            if !self.is_served(id) && self.stop_limit(id) == 0 {
                z_left[self.node_of(id)].push(id);
                self.trace.z.insert(id);
            }
        }
        let nodes = self.nodes_by_decreasing_label();
        for &mu in &nodes {
            while z_left[mu].len() >= 2 {
                let x = *z_left[mu]
                    .iter()
                    .min_by_key(|&&i| (std::cmp::Reverse(self.capacity(i)), i))
                    .expect("at least two trips");
                let mut rest: Vec<TripId> = z_left[mu].iter().copied().filter(|&i| i != x).collect();
                rest.sort_by_key(|&i| (self.capacity(i), i));
                rest.truncate(self.free(x) as usize);
                self.assign(2, x, &rest)?;
                z_left[mu].retain(|&i| !self.is_served(i));
            }
        }
        for &mu in &nodes {
            let Some(&z) = z_left[mu].first() else {
                continue;
            };
            let hat = self.x_hat2(mu);
            let x = match self.max_free(&hat) {
                Some(x) => x,
                None => self
                    .x_bar(mu)
                    .into_iter()
                    .min_by_key(|&i| (std::cmp::Reverse(self.stop_limit(i)), i))
                    .ok_or_else(|| PhaseError::Internal(format!("no driver for zero-stop trip {z}")))?,
            };
            if x == z {
                self.assign(2, z, &[])?;
            } else {
                self.assign(2, x, &[z])?;
            }
            z_left[mu].clear();
        }
        self.trace.covered.push(self.covered());
        Ok(())
    }

    /// Serves everything else, top label first.
    pub fn phase3(&mut self) -> Result<(), PhaseError> {
        for mu in self.nodes_by_decreasing_label() {
            loop {
                let unserved: Vec<TripId> = self
                    .node_trips(mu)
                    .iter()
                    .copied()
                    .filter(|&i| !self.is_served(i))
                    .collect();
                if unserved.is_empty() {
                    break;
                }
                let hat = self.x_hat2(mu);
                let x = match self.max_free(&hat) {
                    Some(x) => x,
                    None => unserved
                        .iter()
                        .copied()
                        .filter(|&i| self.is_x(i))
                        .min_by_key(|&i| (std::cmp::Reverse(self.capacity(i)), self.stop_limit(i), i))
                        .ok_or_else(|| PhaseError::Internal(format!("no driver for node {mu}")))?,
                };
                let mut rest: Vec<TripId> = unserved.into_iter().filter(|&i| i != x).collect();
                rest.truncate(self.free(x) as usize);
                self.assign(3, x, &rest)?;
            }
        }
        self.trace.covered.push(self.covered());
        Ok(())
    }

    /// Schedules every driver; call after phase III.
    pub fn into_solution(self) -> Result<(Solution, PhaseTrace), PhaseError> {
        if let Some(t) = self.inst.trip_ids().find(|&t| !self.is_served(t)) {
            return Err(PhaseError::Internal(format!("trip {t} left unserved")));
        }
        let sol = Solution::materialize(self.inst, self.sigma).map_err(|e| PhaseError::Internal(e.to_string()))?;
        Ok((sol, self.trace))
    }
}

/// Checks the solver's preconditions and builds the labeled meta graph.
pub fn prepare(inst: &Instance) -> Result<MetaGraph, PhaseError> {
    let cond = inst.conditions();
    if !inst.is_empty() && inst.common_destination().is_none() {
        return Err(PhaseError::Condition(1));
    }
    for (k, ok) in [(2, cond.zero_detour), (3, cond.fixed_path), (5, cond.common_window)] {
        if !ok {
            return Err(PhaseError::Condition(k));
        }
    }
    for id in inst.trip_ids() {
        if feasible_schedule(inst, id, &[])?.is_none() {
            return Err(PhaseError::Infeasible(id));
        }
    }
    let mg = MetaGraph::from_paths(inst)?;
    Ok(label_nodes(mg)?)
}

/// Runs all three phases and returns the solution with its trace.
pub fn solve_phases_traced(inst: &Instance) -> Result<(Solution, PhaseTrace), PhaseError> {
    if inst.is_empty() {
        return Ok((Solution::new(), PhaseTrace::default()));
    }
    let mg = prepare(inst)?;
    let mut state = PhaseState::new(inst, mg)?;
    state.phase1()?;
    state.phase2()?;
    state.phase3()?;
    state.into_solution()
}

/// Three-phase approximation for the minimum number of drivers.
///
/// Requires a common destination, zero detours, one preferred path per trip,
/// a common time window, trips at one source sharing their path, and a meta
/// graph that simplifies to an inverse tree.
pub fn solve_phases(inst: &Instance) -> Result<Solution, PhaseError> {
    solve_phases_traced(inst).map(|(sol, _)| sol)
}
