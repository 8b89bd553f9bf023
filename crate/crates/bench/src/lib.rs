//! Benchmark fixtures.

use rideshare_core::{gen_3partition_stop, gen_random_tree, Instance, RandomTreeSpec, ThreePartitionSpec};

/// Random inverse-tree instance with `trips` trips spread over `trips / 4`
/// source nodes.
pub fn tree(trips: usize, seed: u64) -> Instance {
    gen_random_tree(&RandomTreeSpec {
        trips,
        nodes: (trips / 4).max(1),
        max_capacity: 3,
        stop_limit: (0, 2),
        seed,
    })
    .expect("valid tree spec")
}

/// Stop gadget for a solvable 3-partition instance with `r` triples.
pub fn stop_gadget(r: u32) -> Instance {
    let a: Vec<u64> = (0..r).flat_map(|_| [2, 2, 3]).collect();
    gen_3partition_stop(&ThreePartitionSpec::new(r, 7, a).expect("valid gadget spec")).expect("gadget builds")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(tree(40, 1).len(), 40);
        assert_eq!(stop_gadget(2).len(), 20);
    }
}
