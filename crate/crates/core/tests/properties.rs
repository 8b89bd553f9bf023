mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rideshare_core::factory::{gen_random_tree, RandomTreeSpec};
use rideshare_core::mcmp::{edge_swap, edge_swap_matching, greedy_star, is_improvement, star_improve, star_improve_run, StarConstraints};
use rideshare_core::oracle::{exact_min_drivers, OracleBudget};
use rideshare_core::phase::{solve_phases, solve_phases_traced};
use rideshare_core::relation::{build_compatibility_digraph, build_serve_digraph, check_transitive, label_nodes, MetaGraph, MetaNode};
use rideshare_core::{read_instance, read_solution, validate_solution, write_instance, write_solution, NodeId, TripId};

fn tree_spec() -> impl Strategy<Value = RandomTreeSpec> {
    (1usize..=40, any::<u64>(), 0u32..=4, 0u32..=3, 0u32..=2).prop_flat_map(|(trips, seed, cap, lo, extra)| {
        (1..=trips).prop_map(move |nodes| RandomTreeSpec {
            trips,
            nodes,
            max_capacity: cap,
            stop_limit: (lo, lo + extra),
            seed,
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_trees_meet_phase_preconditions(spec in tree_spec()) {
        let inst = gen_random_tree(&spec).unwrap();
        prop_assert_eq!(&inst, &gen_random_tree(&spec).unwrap());
        let c = inst.conditions();
        prop_assert!(c.same_endpoint && c.zero_detour && c.fixed_path && c.common_window);
        prop_assert_eq!(check_transitive(&build_compatibility_digraph(&inst).unwrap()), None);
        if inst.trips().iter().all(|t| t.capacity > 0 && t.stop_limit > 0) && spec.nodes <= 2 {
            prop_assert_eq!(check_transitive(&build_serve_digraph(&inst).unwrap()), None);
        }
        let sources: BTreeSet<u32> = inst.trips().iter().map(|t| t.source).collect();
        prop_assert_eq!(sources.len(), spec.nodes);
    }

    #[test]
    fn solvers_are_valid_on_trees(spec in tree_spec()) {
        let inst = gen_random_tree(&spec).unwrap();
        let (sol, trace) = solve_phases_traced(&inst).unwrap();
        prop_assert!(validate_solution(&inst, &sol).valid);
        prop_assert_eq!(trace.covered.len(), 3);
        prop_assert!(trace.w.is_subset(&trace.covered[0]));
        let all: BTreeSet<TripId> = inst.trip_ids().collect();
        prop_assert_eq!(&trace.covered[2], &all);
        for s in [star_improve(&inst).unwrap(), edge_swap(&inst, 1).unwrap(), edge_swap(&inst, 2).unwrap()] {
            prop_assert!(validate_solution(&inst, &s).valid);
        }
    }

    #[test]
    fn instance_codec_round_trips(seed in any::<u64>(), trips in 1usize..=10, tree in any::<bool>()) {
        let inst = if tree { common::tree_instance(seed, trips) } else { common::random_instance(seed, trips) };
        let text = write_instance(&inst);
        let back = read_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn solution_codec_round_trips(seed in any::<u64>(), trips in 1usize..=12) {
        let inst = common::tree_instance(seed, trips);
        let sol = solve_phases(&inst).unwrap();
        let text = write_solution(&sol);
        let back = read_solution(&text).unwrap();
        prop_assert_eq!(&back, &sol);
        prop_assert_eq!(write_solution(&back), text);
    }

    #[test]
    fn matchings_are_valid_and_locally_optimal(seed in any::<u64>(), trips in 1usize..=12, tree in any::<bool>()) {
        let inst = if tree { common::tree_instance(seed, trips) } else { common::random_instance(seed, trips) };
        let dg = build_serve_digraph(&inst).unwrap();
        let sc = StarConstraints::from_instance(&inst);
        let run = star_improve_run(&dg, &sc).unwrap();
        prop_assert!(run.matching.check(&dg, &sc).is_ok());
        for v in inst.trip_ids() {
            let st = greedy_star(&dg, &sc, v, &run.matching).unwrap();
            prop_assert!(!is_improvement(&st, &run.matching));
        }
        for k in 1..=2 {
            let swapped = edge_swap_matching(&dg, &sc, k).unwrap();
            prop_assert!(swapped.matching.check(&dg, &sc).is_ok());
        }
    }

    #[test]
    fn unservable_trips_always_drive(seed in any::<u64>(), trips in 1usize..=9) {
        let inst = common::tree_instance(seed, trips);
        let dg = build_serve_digraph(&inst).unwrap();
        let forced: Vec<TripId> = inst.trip_ids().filter(|&t| dg.out_neighbors(t).is_empty()).collect();
        let sols = [
            exact_min_drivers(&inst, OracleBudget::default()).unwrap(),
            solve_phases(&inst).unwrap(),
            star_improve(&inst).unwrap(),
        ];
        for sol in &sols {
            let drivers: BTreeSet<TripId> = sol.drivers().collect();
            prop_assert!(forced.iter().all(|t| drivers.contains(t)));
        }
    }

    #[test]
    fn labels_decrease_along_arcs(seed in any::<u64>(), p in 1usize..=200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = common::random_inverse_tree(&mut rng, p);
        let nodes = (0..p).map(|i| MetaNode { source: i as u32, trips: vec![TripId::from_index(i)] }).collect();
        let mg = label_nodes(MetaGraph::from_parts(nodes, &tree).unwrap()).unwrap();
        let labels: BTreeSet<usize> = (0..p).map(|k| mg.label(NodeId(k)).unwrap()).collect();
        prop_assert_eq!(labels, (1..=p).collect::<BTreeSet<_>>());
        for (a, b) in mg.arcs() {
            prop_assert!(mg.label(a).unwrap() > mg.label(b).unwrap());
        }
    }
}

#[test]
fn dropping_a_driver_is_caught() {
    let inst = common::tree_instance(3, 8);
    let sol = solve_phases(&inst).unwrap();
    let mut text = write_solution(&sol);
    let first_driver = text.lines().nth(1).unwrap().to_string();
    assert!(first_driver.starts_with("driver "));
    let count = sol.driver_count();
    text = text.replacen(&format!("solution {count}"), &format!("solution {}", count - 1), 1);
    let mut lines: Vec<&str> = text.lines().collect();
    let end = lines[2..].iter().position(|l| l.starts_with("driver ")).map_or(lines.len(), |k| k + 2);
    lines.drain(1..end);
    let broken = read_solution(&(lines.join("\n") + "\n")).unwrap();
    assert!(!validate_solution(&inst, &broken).valid);
}
