use super::{greedy_star, is_improvement, matching_to_solution, Matching, SolverError, Star, StarConstraints};
use crate::model::{Instance, Solution};
use crate::relation::{build_serve_digraph, ServeDigraph};

/// Final matching of a local-search run plus counters for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McmpRun {
    pub matching: Matching,
    pub improvements: usize,
    /// Vertex scans started (each improvement restarts the scan).
    pub passes: usize,
}

/// StarImprove as an explicit state machine, one improvement per [`step`](Self::step).
#[derive(Debug, Clone)]
pub struct StarImprover<'a> {
    dg: &'a ServeDigraph,
    sc: &'a StarConstraints,
    m: Matching,
    improvements: usize,
    passes: usize,
}

impl<'a> StarImprover<'a> {
    pub fn new(dg: &'a ServeDigraph, sc: &'a StarConstraints) -> Result<Self, SolverError> {
        sc.check_len(dg)?;
        Ok(Self {
            dg,
            sc,
            m: Matching::new(dg.vertex_count()),
            improvements: 0,
            passes: 0,
        })
    }

    pub fn matching(&self) -> &Matching {
        &self.m
    }

    /// Scans vertices in ascending id order and applies the first improving
    /// greedy star. Returns it, or `None` once a whole scan finds nothing.
    pub fn step(&mut self) -> Result<Option<Star>, SolverError> {
        self.passes += 1;
        for v in self.dg.vertices() {
            let st = greedy_star(self.dg, self.sc, v, &self.m)?;
            if is_improvement(&st, &self.m) {
                self.m.apply_star(&st);
                self.improvements += 1;
                return Ok(Some(st));
            }
        }
        Ok(None)
    }

    pub fn run(mut self) -> Result<McmpRun, SolverError> {
        while self.step()?.is_some() {}
        Ok(McmpRun {
            matching: self.m,
            improvements: self.improvements,
            passes: self.passes,
        })
    }
}

/// Runs StarImprove to a local optimum on an explicit digraph.
pub fn star_improve_run(dg: &ServeDigraph, sc: &StarConstraints) -> Result<McmpRun, SolverError> {
    StarImprover::new(dg, sc)?.run()
}

/// StarImprove with stop-aware greedy stars, converted to a solution.
pub fn star_improve(inst: &Instance) -> Result<Solution, SolverError> {
    let dg = build_serve_digraph(inst)?;
    let sc = StarConstraints::from_instance(inst);
    let run = star_improve_run(&dg, &sc)?;
    matching_to_solution(inst, &run.matching)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TripId;

    fn t(x: u32) -> TripId {
        TripId(x)
    }

    #[test]
    fn no_arcs_terminates_immediately() {
        let dg = ServeDigraph::from_arcs(3, []).unwrap();
        let sc = StarConstraints::new(vec![1; 3], vec![1; 3], vec![0, 1, 2]).unwrap();
        let run = star_improve_run(&dg, &sc).unwrap();
        assert_eq!((run.improvements, run.passes, run.matching.edge_count()), (0, 1, 0));
    }

    #[test]
    fn one_root_takes_both() {
        let dg = ServeDigraph::from_arcs(3, [(t(2), t(1)), (t(3), t(1))]).unwrap();
        let sc = StarConstraints::new(vec![2, 0, 0], vec![2, 0, 0], vec![0, 1, 2]).unwrap();
        let run = star_improve_run(&dg, &sc).unwrap();
        assert_eq!(run.matching.edges(), vec![(t(2), t(1)), (t(3), t(1))]);
        run.matching.check(&dg, &sc).unwrap();
    }

    #[test]
    fn later_star_can_break_a_leaf_edge() {
        // 1 first grabs 2; then 2 (cap 2) beats its single-arc use as a leaf
        let dg = ServeDigraph::from_arcs(4, [(t(2), t(1)), (t(3), t(2)), (t(4), t(2))]).unwrap();
        let sc = StarConstraints::new(vec![1, 2, 0, 0], vec![1, 2, 0, 0], vec![0, 1, 2, 3]).unwrap();
        let run = star_improve_run(&dg, &sc).unwrap();
        assert_eq!(run.matching.edge_count(), 2);
        assert_eq!(run.improvements, 2);
        run.matching.check(&dg, &sc).unwrap();
    }
}
