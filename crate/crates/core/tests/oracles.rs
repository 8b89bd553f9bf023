//! Exact solvers against naive enumeration over every assignment.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use rideshare_core::mcmp::StarConstraints;
use rideshare_core::oracle::{exact_max_matching, exact_min_distance, exact_min_drivers, OracleBudget, OracleError};
use rideshare_core::relation::build_serve_digraph;
use rideshare_core::{feasible_schedule, solution_metrics, Distance, Instance, ServeDigraph, TripId};

/// `(fewest drivers, least distance)` over all driver sets and passenger
/// assignments.
fn naive(inst: &Instance) -> (usize, Distance) {
    let l = inst.len();
    let mut best = (usize::MAX, Distance::MAX);
    for mask in 1u32..(1 << l) {
        let drivers: Vec<TripId> = (0..l).filter(|k| mask >> k & 1 == 1).map(TripId::from_index).collect();
        let riders: Vec<TripId> = (0..l).filter(|k| mask >> k & 1 == 0).map(TripId::from_index).collect();
        let mut choice = vec![0usize; riders.len()];
        loop {
            let mut groups: BTreeMap<TripId, Vec<TripId>> = drivers.iter().map(|&d| (d, Vec::new())).collect();
            for (r, &c) in riders.iter().zip(&choice) {
                groups.get_mut(&drivers[c]).unwrap().push(*r);
            }
            let mut total = 0;
            let ok = groups.iter().all(|(&d, ps)| match feasible_schedule(inst, d, ps).unwrap() {
                Some(plan) => {
                    total += inst.network().walk_length(&plan.route).unwrap();
                    true
                }
                None => false,
            });
            if ok {
                best.0 = best.0.min(drivers.len());
                best.1 = best.1.min(total);
            }
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < drivers.len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    best
}

/// Largest matching: each vertex picks a root among its out-neighbors or
/// nothing; roots may not be leaves and must respect seats and stops.
fn naive_matching(dg: &ServeDigraph, sc: &StarConstraints) -> usize {
    let l = dg.vertex_count();
    let options: Vec<Vec<Option<TripId>>> = (0..l)
        .map(|k| {
            let u = TripId::from_index(k);
            std::iter::once(None).chain(dg.out_neighbors(u).iter().map(|&v| Some(v))).collect()
        })
        .collect();
    let mut choice = vec![0usize; l];
    let mut best = 0;
    loop {
        let root: Vec<Option<TripId>> = (0..l).map(|k| options[k][choice[k]]).collect();
        let mut leaves: BTreeMap<TripId, Vec<TripId>> = BTreeMap::new();
        for (k, r) in root.iter().enumerate() {
            if let Some(v) = r {
                leaves.entry(*v).or_default().push(TripId::from_index(k));
            }
        }
        let ok = leaves.iter().all(|(&v, ps)| {
            let stops: BTreeSet<u32> = ps.iter().map(|&u| sc.source(u)).filter(|&s| s != sc.source(v)).collect();
            root[v.index()].is_none() && ps.len() <= sc.capacity(v) as usize && stops.len() <= sc.stop_limit(v) as usize
        });
        if ok {
            best = best.max(root.iter().flatten().count());
        }
        let mut k = 0;
        while k < l {
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == l {
            break;
        }
    }
    best
}

#[test]
fn min_drivers_and_distance_match_enumeration() {
    for seed in 0..300u64 {
        let trips = 1 + seed as usize % 6;
        let inst = if seed % 3 == 0 {
            common::tree_instance(seed, trips)
        } else {
            common::random_instance(seed, trips)
        };
        let (drivers, distance) = naive(&inst);
        let sol = exact_min_drivers(&inst, OracleBudget::default()).unwrap();
        assert_eq!(sol.driver_count(), drivers, "seed {seed}");
        let sol = exact_min_distance(&inst, OracleBudget::default()).unwrap();
        assert_eq!(solution_metrics(&inst, &sol).unwrap().distance, distance, "seed {seed}");
    }
}

#[test]
fn max_matching_matches_enumeration() {
    for seed in 0..300u64 {
        let trips = 1 + seed as usize % 7;
        let inst = if seed % 3 == 0 {
            common::tree_instance(seed, trips)
        } else {
            common::random_instance(seed, trips)
        };
        let dg = build_serve_digraph(&inst).unwrap();
        let sc = StarConstraints::from_instance(&inst);
        assert_eq!(
            exact_max_matching(&dg, &sc, OracleBudget::default()).unwrap(),
            naive_matching(&dg, &sc),
            "seed {seed}"
        );
    }
}

#[test]
fn budget_is_enforced() {
    let inst = common::tree_instance(1, 30);
    let err = exact_min_drivers(&inst, OracleBudget::default()).unwrap_err();
    assert!(err.is_budget());
    assert!(err.to_string().contains("oracle budget exceeded"));
    assert!(matches!(err, OracleError::TooManyTrips { trips: 30, max: 12 }));
}

#[test]
fn single_trip_drives_alone() {
    let inst = common::tree_instance(5, 1);
    assert_eq!(exact_min_drivers(&inst, OracleBudget::default()).unwrap().driver_count(), 1);
}
