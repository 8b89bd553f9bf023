use super::{matching_to_solution, Matching, McmpRun, SolverError, StarConstraints};
use crate::model::{Instance, Solution, TripId};
use crate::relation::{build_serve_digraph, ServeDigraph};

/// Largest accepted swap depth; the search costs `O(|E|^(2k+1))`.
pub const DEFAULT_MAX_K: usize = 2;

/// One lexicographic pass over the arcs, keeping every arc that still fits.
/// The result is maximal: no single arc can be added.
pub fn greedy_maximal_matching(dg: &ServeDigraph, sc: &StarConstraints) -> Result<Matching, SolverError> {
    sc.check_len(dg)?;
    let mut m = Matching::new(dg.vertex_count());
    for (u, v) in dg.arcs() {
        try_add(&mut m, sc, u, v);
    }
    Ok(m)
}

/// Adds `(u, v)` if the result is still a valid star packing.
fn try_add(m: &mut Matching, sc: &StarConstraints, u: TripId, v: TripId) -> bool {
    if m.is_matched(u) || m.root_of(v).is_some() {
        return false;
    }
    let mut leaves = m.leaves(v).clone();
    leaves.insert(u);
    if !sc.admits(v, &leaves) {
        return false;
    }
    m.add_edge(u, v);
    true
}

fn check_depth(k: usize) -> Result<(), SolverError> {
    if k == 0 || k > DEFAULT_MAX_K {
        return Err(SolverError::InvalidDepth { k, max: DEFAULT_MAX_K });
    }
    Ok(())
}

/// Picks `need` arcs from `cands[from..]` that extend `m` validly, in
/// lexicographic order of positions; `m` holds the partial choice.
fn extend(
    m: &mut Matching,
    sc: &StarConstraints,
    cands: &[(TripId, TripId)],
    from: usize,
    need: usize,
    chosen: &mut Vec<(TripId, TripId)>,
) -> bool {
    if need == 0 {
        return true;
    }
    for idx in from..cands.len() {
        if cands.len() - idx < need {
            break;
        }
        let (u, v) = cands[idx];
        if try_add(m, sc, u, v) {
            chosen.push((u, v));
            if extend(m, sc, cands, idx + 1, need - 1, chosen) {
                return true;
            }
            chosen.pop();
            m.remove_edge(u, v);
        }
    }
    false
}

/// Tries removing `i` matched arcs (lexicographic combinations) and adding
/// `i + 1` unmatched ones, for `i = 0..=k`. Applies the first hit.
fn find_swap(dg: &ServeDigraph, sc: &StarConstraints, m: &mut Matching, k: usize) -> bool {
    let matched = m.edges();
    let unmatched: Vec<(TripId, TripId)> = dg.arcs().into_iter().filter(|&(u, v)| !m.contains_edge(u, v)).collect();
    for i in 0..=k.min(matched.len()) {
        let mut removed = Vec::with_capacity(i);
        if swap_with(sc, m, &matched, &unmatched, 0, i, &mut removed) {
            return true;
        }
    }
    false
}

fn swap_with(
    sc: &StarConstraints,
    m: &mut Matching,
    matched: &[(TripId, TripId)],
    unmatched: &[(TripId, TripId)],
    from: usize,
    left: usize,
    removed: &mut Vec<(TripId, TripId)>,
) -> bool {
    if left == 0 {
        let mut trial = m.clone();
        for &(u, v) in removed.iter() {
            trial.remove_edge(u, v);
        }
        let mut chosen = Vec::new();
        if extend(&mut trial, sc, unmatched, 0, removed.len() + 1, &mut chosen) {
            *m = trial;
            return true;
        }
        return false;
    }
    for idx in from..matched.len() {
        removed.push(matched[idx]);
        if swap_with(sc, m, matched, unmatched, idx + 1, left - 1, removed) {
            return true;
        }
        removed.pop();
    }
    false
}

/// EdgeSwap from an explicit starting matching.
pub fn edge_swap_from(
    dg: &ServeDigraph,
    sc: &StarConstraints,
    start: Matching,
    k: usize,
) -> Result<McmpRun, SolverError> {
    check_depth(k)?;
    sc.check_len(dg)?;
    start.check(dg, sc).map_err(SolverError::InvalidMatching)?;
    let mut m = start;
    let mut improvements = 0;
    let mut passes = 1;
    while find_swap(dg, sc, &mut m, k) {
        improvements += 1;
        passes += 1;
    }
    Ok(McmpRun {
        matching: m,
        improvements,
        passes,
    })
}

/// EdgeSwap from the greedy maximal matching.
pub fn edge_swap_matching(dg: &ServeDigraph, sc: &StarConstraints, k: usize) -> Result<McmpRun, SolverError> {
    check_depth(k)?;
    let start = greedy_maximal_matching(dg, sc)?;
    edge_swap_from(dg, sc, start, k)
}

/// EdgeSwap with depth `k`, converted to a solution.
pub fn edge_swap(inst: &Instance, k: usize) -> Result<Solution, SolverError> {
    check_depth(k)?;
    let dg = build_serve_digraph(inst)?;
    let sc = StarConstraints::from_instance(inst);
    let run = edge_swap_matching(&dg, &sc, k)?;
    matching_to_solution(inst, &run.matching)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: u32) -> TripId {
        TripId(x)
    }

    /// 2 can serve 1 and 3, 4 can serve 3; everyone has one seat.
    fn fixture() -> (ServeDigraph, StarConstraints) {
        let dg = ServeDigraph::from_arcs(4, [(t(1), t(2)), (t(3), t(2)), (t(3), t(4))]).unwrap();
        let sc = StarConstraints::new(vec![0, 1, 0, 1], vec![0, 1, 0, 1], vec![1, 2, 3, 4]).unwrap();
        (dg, sc)
    }

    #[test]
    fn one_for_two_swap() {
        let (dg, sc) = fixture();
        let start = Matching::from_edges(4, &[(t(3), t(2))]).unwrap();
        let run = edge_swap_from(&dg, &sc, start, 1).unwrap();
        assert_eq!(run.matching.edges(), vec![(t(1), t(2)), (t(3), t(4))]);
        assert_eq!(run.improvements, 1);
    }

    #[test]
    fn optimal_start_is_kept() {
        let (dg, sc) = fixture();
        let start = Matching::from_edges(4, &[(t(1), t(2)), (t(3), t(4))]).unwrap();
        let run = edge_swap_from(&dg, &sc, start.clone(), 2).unwrap();
        assert_eq!(run.matching, start);
        assert_eq!(run.improvements, 0);
    }

    #[test]
    fn greedy_start_is_maximal() {
        let (dg, sc) = fixture();
        let m = greedy_maximal_matching(&dg, &sc).unwrap();
        assert_eq!(m.edges(), vec![(t(1), t(2)), (t(3), t(4))]);
    }

    #[test]
    fn depth_is_bounded() {
        let (dg, sc) = fixture();
        assert_eq!(
            edge_swap_matching(&dg, &sc, 3),
            Err(SolverError::InvalidDepth { k: 3, max: 2 })
        );
        assert!(edge_swap_matching(&dg, &sc, 0).is_err());
    }
}
