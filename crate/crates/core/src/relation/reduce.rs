//! Shortcut removal (transitive reduction) on node-level DAGs.

use super::RelationError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b)
        })
    }
}

pub(crate) fn adjacency(p: usize, arcs: &[(usize, usize)]) -> Result<Vec<Vec<usize>>, RelationError> {
    let mut out = vec![Vec::new(); p];
    for &(a, b) in arcs {
        if a >= p {
            return Err(RelationError::UnknownNode(a));
        }
        if b >= p {
            return Err(RelationError::UnknownNode(b));
        }
        if a != b {
            out[a].push(b);
        }
    }
    for list in &mut out {
        list.sort_unstable();
        list.dedup();
    }
    Ok(out)
}

/// Kahn topological order; `Cyclic` if the graph has a directed cycle.
pub(crate) fn topological_order(out: &[Vec<usize>]) -> Result<Vec<usize>, RelationError> {
    let p = out.len();
    let mut indeg = vec![0usize; p];
    for list in out {
        for &b in list {
            indeg[b] += 1;
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..p).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(p);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &b in &out[v] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.insert(b);
            }
        }
    }
    if order.len() == p {
        Ok(order)
    } else {
        Err(RelationError::Cyclic)
    }
}

/// Strict reachability sets (`v` reaches `w` via a nonempty path).
pub(crate) fn reach_sets(out: &[Vec<usize>]) -> Result<Vec<BitSet>, RelationError> {
    let order = topological_order(out)?;
    let p = out.len();
    let mut reach = vec![BitSet::new(p); p];
    for &v in order.iter().rev() {
        let mut acc = BitSet::new(p);
        for &w in &out[v] {
            acc.insert(w);
            acc.union_with(&reach[w]);
        }
        reach[v] = acc;
    }
    Ok(reach)
}

/// Strict transitive closure of a DAG over nodes `0..p`, as sorted successor lists.
pub fn transitive_closure(p: usize, arcs: &[(usize, usize)]) -> Result<Vec<Vec<usize>>, RelationError> {
    let out = adjacency(p, arcs)?;
    Ok(reach_sets(&out)?.iter().map(|s| s.iter().collect()).collect())
}

/// Removes every shortcut arc: an arc `(a, b)` is dropped when `b` stays
/// reachable from `a` without it. Returns the surviving arcs, sorted.
pub fn remove_shortcuts(p: usize, arcs: &[(usize, usize)]) -> Result<Vec<(usize, usize)>, RelationError> {
    let out = adjacency(p, arcs)?;
    let reach = reach_sets(&out)?;
    let mut kept = Vec::new();
    for (a, succ) in out.iter().enumerate() {
        for &b in succ {
            let bypass = succ.iter().any(|&c| c != b && reach[c].contains(b));
            if !bypass {
                kept.push((a, b));
            }
        }
    }
    Ok(kept)
}
