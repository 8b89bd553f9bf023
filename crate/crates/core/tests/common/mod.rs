#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rideshare_core::factory::{gen_random_tree, RandomTreeSpec};
use rideshare_core::mcmp::{Matching, StarConstraints};
use rideshare_core::{Instance, RoadNetwork, ServeDigraph, Trip, TripId, VertexId};

/// Small instance with no structure: a random connected network, arbitrary
/// endpoints, detours, stop limits and windows.
pub fn random_instance(seed: u64, trips: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: u32 = rng.gen_range(3..=7);
    let mut edges: BTreeMap<(VertexId, VertexId), u64> = BTreeMap::new();
    for v in 1..n {
        edges.insert((rng.gen_range(0..v), v), rng.gen_range(1..=3));
    }
    for _ in 0..n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.entry((a.min(b), a.max(b))).or_insert(rng.gen_range(1..=3));
        }
    }
    let net = RoadNetwork::new(n, edges.iter().map(|(&(u, v), &len)| (u, v, len))).unwrap();
    let hubs: Vec<VertexId> = (0..2).map(|_| rng.gen_range(0..n)).collect();
    let mut list = Vec::with_capacity(trips);
    for k in 0..trips {
        let t = if rng.gen_bool(0.8) { hubs[rng.gen_range(0..hubs.len())] } else { rng.gen_range(0..n) };
        let mut s = rng.gen_range(0..n);
        while s == t {
            s = rng.gen_range(0..n);
        }
        let path = net.shortest_path(s, t).unwrap().unwrap();
        let len = net.walk_length(&path).unwrap();
        let alpha = rng.gen_range(0..=3);
        list.push(Trip {
            id: TripId::from_index(k),
            source: s,
            destination: t,
            capacity: rng.gen_range(0..=3),
            detour_limit: rng.gen_range(0..=3),
            preferred_paths: vec![path],
            stop_limit: rng.gen_range(0..=2),
            depart_earliest: alpha,
            arrive_latest: alpha + len + rng.gen_range(0..=6),
        });
    }
    Instance::new(net, list).unwrap()
}

/// Random inverse-tree instance meeting the preconditions of the phase solver.
pub fn tree_instance(seed: u64, trips: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let nodes = rng.gen_range(1..=trips.min(6));
    let lo = rng.gen_range(0..=2);
    gen_random_tree(&RandomTreeSpec {
        trips,
        nodes,
        max_capacity: rng.gen_range(0..=4),
        stop_limit: (lo, lo + rng.gen_range(0..=2)),
        seed,
    })
    .unwrap()
}

/// Largest number of unmatched in-neighbors of `v` that fit its seats and
/// stop limit, by enumerating every subset.
pub fn brute_star_size(dg: &ServeDigraph, sc: &StarConstraints, v: TripId, m: &Matching) -> usize {
    let cand: Vec<TripId> = dg.in_neighbors(v).iter().copied().filter(|&u| !m.is_matched(u)).collect();
    assert!(cand.len() < 20);
    let mut best = 0;
    for mask in 0u32..(1 << cand.len()) {
        let size = mask.count_ones() as usize;
        if size <= best || size > sc.capacity(v) as usize {
            continue;
        }
        let stops: BTreeSet<VertexId> = (0..cand.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| sc.source(cand[k]))
            .filter(|&s| s != sc.source(v))
            .collect();
        if stops.len() <= sc.stop_limit(v) as usize {
            best = size;
        }
    }
    best
}

/// Reachability by Floyd–Warshall on a dense boolean matrix.
pub fn closure(p: usize, arcs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; p]; p];
    for &(a, b) in arcs {
        r[a][b] = true;
    }
    for k in 0..p {
        for i in 0..p {
            if r[i][k] {
                for j in 0..p {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Random DAG on `p` nodes: arcs only go from higher to lower index.
pub fn random_dag(rng: &mut ChaCha8Rng, p: usize, density: f64) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    for a in 0..p {
        for b in 0..a {
            if rng.gen_bool(density) {
                arcs.push((a, b));
            }
        }
    }
    arcs
}

/// Random inverse tree on `p` nodes: node `k > 0` points at a node below it.
pub fn random_inverse_tree(rng: &mut ChaCha8Rng, p: usize) -> Vec<(usize, usize)> {
    (1..p).map(|k| (k, rng.gen_range(0..k))).collect()
}
