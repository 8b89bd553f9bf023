mod common;

use rideshare_core::phase::{prepare, solve_phases, solve_phases_traced, PhaseError};
use rideshare_core::{Instance, RelationError, RoadNetwork, Trip, TripId, VertexId};

/// Square `0-1-2-3` plus the chord `0-2`; vertex 0 is the destination.
fn square() -> RoadNetwork {
    RoadNetwork::new(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 2, 1)]).unwrap()
}

fn trip(id: u32, path: Vec<VertexId>) -> Trip {
    Trip {
        id: TripId(id),
        source: path[0],
        destination: *path.last().unwrap(),
        capacity: 2,
        detour_limit: 0,
        preferred_paths: vec![path],
        stop_limit: 2,
        depart_earliest: 0,
        arrive_latest: 10,
    }
}

fn solve(trips: Vec<Trip>) -> Result<usize, PhaseError> {
    let inst = Instance::new(square(), trips).unwrap();
    solve_phases(&inst).map(|s| s.driver_count())
}

#[test]
fn chain_needs_one_driver() {
    assert_eq!(solve(vec![trip(1, vec![3, 2, 1, 0]), trip(2, vec![2, 1, 0]), trip(3, vec![1, 0])]), Ok(1));
}

#[test]
fn each_condition_is_named() {
    let mut detour = trip(2, vec![2, 1, 0]);
    detour.detour_limit = 1;
    assert_eq!(solve(vec![trip(1, vec![1, 0]), detour]), Err(PhaseError::Condition(2)));

    let mut two_paths = trip(2, vec![2, 1, 0]);
    two_paths.preferred_paths.push(vec![2, 0]);
    assert_eq!(solve(vec![trip(1, vec![1, 0]), two_paths]), Err(PhaseError::Condition(3)));

    let mut late = trip(2, vec![2, 1, 0]);
    late.arrive_latest = 11;
    assert_eq!(solve(vec![trip(1, vec![1, 0]), late]), Err(PhaseError::Condition(5)));

    assert_eq!(solve(vec![trip(1, vec![1, 0]), trip(2, vec![1, 2])]), Err(PhaseError::Condition(1)));
}

#[test]
fn intransitive_relation_is_rejected() {
    let err = solve(vec![trip(1, vec![3, 2, 0]), trip(2, vec![2, 1, 0]), trip(3, vec![1, 0])]).unwrap_err();
    assert!(matches!(err, PhaseError::Relation(RelationError::Intransitive(..))), "{err:?}");
}

#[test]
fn branching_meta_graph_is_rejected() {
    let err = solve(vec![trip(1, vec![3, 2, 1, 0]), trip(2, vec![2, 0]), trip(3, vec![1, 0])]).unwrap_err();
    assert!(matches!(err, PhaseError::Relation(_)), "{err:?}");
    assert!(prepare(&Instance::new(square(), vec![trip(1, vec![2, 0]), trip(2, vec![2, 1, 0])]).unwrap()).is_err());
}

#[test]
fn unreachable_deadline_is_infeasible() {
    let mut a = trip(1, vec![3, 2, 1, 0]);
    let mut b = trip(2, vec![1, 0]);
    a.arrive_latest = 2;
    b.arrive_latest = 2;
    assert_eq!(solve(vec![a, b]), Err(PhaseError::Infeasible(TripId(1))));
}

#[test]
fn traces_are_deterministic() {
    for seed in 0..50 {
        let inst = common::tree_instance(seed, 12);
        let (s1, t1) = solve_phases_traced(&inst).unwrap();
        let (s2, t2) = solve_phases_traced(&inst).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(t1.lines(), t2.lines());
        for line in t1.lines().lines() {
            assert!(line.starts_with("phase="), "{line}");
        }
    }
}
