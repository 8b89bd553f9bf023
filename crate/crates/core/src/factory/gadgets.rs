//! 3-partition reduction gadgets.
//!
//! The road network has a destination `D`, one vertex `u_i` per integer and
//! a chain `v_1 - ... - v_r - D`; every `u_i` hangs off `v_1`. Trips `1..=3r`
//! start at the `u_i` with `a_i` seats; the remaining trips are seatless
//! riders at the `v_j`, `M` per vertex. A driver set of size `3r` exists
//! exactly when `A` splits into triples summing to `M`.

use super::SpecError;
use crate::model::{Instance, RoadNetwork, Time, Trip, TripId, VertexId};

/// Default cap on the number of trips the scaled gadget may create.
pub const SCALED_TRIP_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartitionSpec {
    pub r: u32,
    pub m: u64,
    pub a: Vec<u64>,
}

impl ThreePartitionSpec {
    pub fn new(r: u32, m: u64, a: Vec<u64>) -> Result<Self, SpecError> {
        let spec = Self { r, m, a };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.r < 2 {
            return Err(SpecError::SmallR(self.r));
        }
        let expected = 3 * self.r as usize;
        if self.a.len() != expected {
            return Err(SpecError::Count {
                expected,
                found: self.a.len(),
            });
        }
        let sum: u64 = self.a.iter().sum();
        if sum != u64::from(self.r) * self.m {
            return Err(SpecError::SumMismatch {
                sum,
                expected: u64::from(self.r) * self.m,
            });
        }
        for (k, &value) in self.a.iter().enumerate() {
            if 4 * value <= self.m || 2 * value >= self.m {
                return Err(SpecError::OutOfRange { index: k + 1, value });
            }
        }
        Ok(())
    }
}

/// Vertex numbering shared by all gadgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetLayout {
    pub r: u32,
}

impl GadgetLayout {
    pub const D: VertexId = 0;

    pub fn u(&self, i: u32) -> VertexId {
        i
    }

    pub fn v(&self, j: u32) -> VertexId {
        3 * self.r + j
    }

    pub fn vertex_count(&self) -> u32 {
        4 * self.r + 1
    }

    pub fn network(&self) -> RoadNetwork {
        let r = self.r;
        let mut edges: Vec<(VertexId, VertexId, u64)> = (1..=3 * r).map(|i| (self.u(i), self.v(1), 1)).collect();
        edges.extend((1..r).map(|j| (self.v(j), self.v(j + 1), 1)));
        edges.push((self.v(r), Self::D, 1));
        RoadNetwork::new(self.vertex_count(), edges).expect("gadget network is well formed")
    }

    /// `v_j, ..., v_r, D`.
    pub fn chain_from(&self, j: u32) -> Vec<VertexId> {
        (j..=self.r).map(|k| self.v(k)).chain([Self::D]).collect()
    }

    /// `u_i, v_1, ..., v_r, D`.
    pub fn driver_path(&self, i: u32) -> Vec<VertexId> {
        std::iter::once(self.u(i)).chain(self.chain_from(1)).collect()
    }
}

struct Params {
    driver_capacity: Box<dyn Fn(u64) -> u32>,
    driver_stops: Box<dyn Fn(u32) -> u32>,
    driver_window: (Time, Time),
    riders_per_vertex: u64,
    rider_window: Box<dyn Fn(u32) -> (Time, Time)>,
}

fn build(spec: &ThreePartitionSpec, p: Params) -> Result<Instance, SpecError> {
    let layout = GadgetLayout { r: spec.r };
    let mut trips = Vec::new();
    for (k, &a) in spec.a.iter().enumerate() {
        let i = k as u32 + 1;
        let n = (p.driver_capacity)(a);
        trips.push(Trip {
            id: TripId(i),
            source: layout.u(i),
            destination: GadgetLayout::D,
            capacity: n,
            detour_limit: 0,
            preferred_paths: vec![layout.driver_path(i)],
            stop_limit: (p.driver_stops)(n),
            depart_earliest: p.driver_window.0,
            arrive_latest: p.driver_window.1,
        });
    }
    for j in 1..=spec.r {
        let (alpha, beta) = (p.rider_window)(j);
        for _ in 0..p.riders_per_vertex {
            trips.push(Trip {
                id: TripId(trips.len() as u32 + 1),
                source: layout.v(j),
                destination: GadgetLayout::D,
                capacity: 0,
                detour_limit: 0,
                preferred_paths: vec![layout.chain_from(j)],
                stop_limit: 0,
                depart_earliest: alpha,
                arrive_latest: beta,
            });
        }
    }
    Ok(Instance::new(layout.network(), trips)?)
}

fn narrow(x: u64) -> Result<u32, SpecError> {
    u32::try_from(x).map_err(|_| SpecError::Invalid(format!("value {x} does not fit in 32 bits")))
}

/// The stop-constraint gadget: drivers have `a_i` seats and one stop, all
/// trips share the window `[0, 10r]`.
pub fn gen_3partition_stop(spec: &ThreePartitionSpec) -> Result<Instance, SpecError> {
    spec.validate()?;
    for &a in &spec.a {
        narrow(a)?;
    }
    let window = (0, 10 * Time::from(spec.r));
    build(
        spec,
        Params {
            driver_capacity: Box::new(|a| a as u32),
            driver_stops: Box::new(|_| 1),
            driver_window: window,
            riders_per_vertex: spec.m,
            rider_window: Box::new(move |_| window),
        },
    )
}

/// The stop gadget with every driver capacity multiplied by `rM` and `rM²`
/// riders per `v_j`, refusing to build more than `limit` trips.
pub fn gen_3partition_stop_scaled_with_limit(spec: &ThreePartitionSpec, limit: u64) -> Result<Instance, SpecError> {
    spec.validate()?;
    let rm = u64::from(spec.r) * spec.m;
    let per_vertex = rm.checked_mul(spec.m).ok_or(SpecError::TooLarge {
        trips: u64::MAX,
        limit,
    })?;
    let trips = per_vertex
        .checked_mul(u64::from(spec.r))
        .and_then(|t| t.checked_add(3 * u64::from(spec.r)))
        .unwrap_or(u64::MAX);
    if trips > limit {
        return Err(SpecError::TooLarge { trips, limit });
    }
    for &a in &spec.a {
        narrow(a * rm)?;
    }
    let window = (0, 10 * Time::from(spec.r));
    build(
        spec,
        Params {
            driver_capacity: Box::new(move |a| (a * rm) as u32),
            driver_stops: Box::new(|_| 1),
            driver_window: window,
            riders_per_vertex: per_vertex,
            rider_window: Box::new(move |_| window),
        },
    )
}

/// [`gen_3partition_stop_scaled_with_limit`] with [`SCALED_TRIP_LIMIT`].
pub fn gen_3partition_stop_scaled(spec: &ThreePartitionSpec) -> Result<Instance, SpecError> {
    gen_3partition_stop_scaled_with_limit(spec, SCALED_TRIP_LIMIT)
}

/// The time-window gadget: drivers have `δ = n = a_i` and window `[0, 2r]`;
/// riders at `v_j` have window `[r, 2r − j + 1]`, so they must board at time
/// `r` exactly.
pub fn gen_3partition_time(spec: &ThreePartitionSpec) -> Result<Instance, SpecError> {
    spec.validate()?;
    for &a in &spec.a {
        narrow(a)?;
    }
    let r = Time::from(spec.r);
    build(
        spec,
        Params {
            driver_capacity: Box::new(|a| a as u32),
            driver_stops: Box::new(|n| n),
            driver_window: (0, 2 * r),
            riders_per_vertex: spec.m,
            rider_window: Box::new(move |j| (r, 2 * r - Time::from(j) + 1)),
        },
    )
}
