use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::reduce::{adjacency, reach_sets, remove_shortcuts, topological_order};
use super::{check_transitive, RelationError, ServeDigraph};
use crate::model::{Instance, TripId, VertexId};

/// Index of a node in a [`MetaGraph`] (nodes are ordered by source vertex).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// All trips starting at one source vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaNode {
    pub source: VertexId,
    pub trips: Vec<TripId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Labels {
    /// `label[node]` in `1..=p`.
    label: Vec<usize>,
    /// `by_label[l - 1]` is the node labelled `l`.
    by_label: Vec<usize>,
    /// Ancestor-or-self count per node, present for inverse trees.
    span: Option<Vec<usize>>,
}

/// Source-grouped serve graph with shortcuts removed. An arc `(μ, ν)` means
/// the trips of `μ` can serve the trips of `ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaGraph {
    nodes: Vec<MetaNode>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    node_of: Vec<usize>,
    labels: Option<Labels>,
}

/// Ancestor/descendant sets of one node (nonempty-path reachability).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaQueries {
    pub ancestors: Vec<NodeId>,
    pub ancestors_or_self: Vec<NodeId>,
    pub descendants: Vec<NodeId>,
    pub descendants_or_self: Vec<NodeId>,
}

impl MetaGraph {
    /// Builds a meta graph from explicit nodes and node-level arcs; shortcuts
    /// are removed and cycles rejected.
    pub fn from_parts(nodes: Vec<MetaNode>, arcs: &[(usize, usize)]) -> Result<Self, RelationError> {
        let p = nodes.len();
        let kept = remove_shortcuts(p, arcs)?;
        let out = adjacency(p, &kept)?;
        let mut inn = vec![Vec::new(); p];
        for (a, b) in &kept {
            inn[*b].push(*a);
        }
        for list in &mut inn {
            list.sort_unstable();
        }
        let max_trip = nodes
            .iter()
            .flat_map(|n| n.trips.iter())
            .map(|t| t.0 as usize)
            .max()
            .unwrap_or(0);
        let mut node_of = vec![usize::MAX; max_trip];
        for (k, node) in nodes.iter().enumerate() {
            for t in &node.trips {
                node_of[t.index()] = k;
            }
        }
        Ok(Self {
            nodes,
            out,
            inn,
            node_of,
            labels: None,
        })
    }

    /// Node-level construction straight from preferred paths.
    ///
    /// Requires a common destination, zero detour, one preferred path per
    /// trip and a common time window; trips sharing a source must share their
    /// path, so node `μ` serves node `ν` exactly when `ν`'s source lies on
    /// `μ`'s path. Agrees with [`build_meta_graph`] over the compatibility
    /// digraph whenever every trip can make its own journey in time, but runs
    /// in time linear in the total path length instead of quadratic in trips.
    pub fn from_paths(inst: &Instance) -> Result<Self, RelationError> {
        let cond = inst.conditions();
        if inst.common_destination().is_none() && !inst.is_empty() {
            return Err(RelationError::ConditionViolated(1));
        }
        for (k, ok) in [(2, cond.zero_detour), (3, cond.fixed_path), (5, cond.common_window)] {
            if !ok {
                return Err(RelationError::ConditionViolated(k));
            }
        }
        let nodes = group_by_source(inst);
        for node in &nodes {
            let first = inst.trip(node.trips[0])?;
            for &t in &node.trips[1..] {
                if inst.trip(t)?.preferred_paths != first.preferred_paths {
                    return Err(RelationError::NonUniformNode(first.id, t));
                }
            }
        }
        let by_source: BTreeMap<VertexId, usize> =
            nodes.iter().enumerate().map(|(k, n)| (n.source, k)).collect();
        let mut arcs = Vec::new();
        for (k, node) in nodes.iter().enumerate() {
            let path = &inst.trip(node.trips[0])?.preferred_paths[0];
            for v in &path[1..] {
                if let Some(&other) = by_source.get(v) {
                    arcs.push((k, other));
                }
            }
        }
        // The relation must already be transitively closed.
        let out = adjacency(nodes.len(), &arcs)?;
        for (a, succ) in out.iter().enumerate() {
            for &b in succ {
                for &c in &out[b] {
                    if c != a && out[a].binary_search(&c).is_err() {
                        let (ta, tb, tc) = (nodes[a].trips[0], nodes[b].trips[0], nodes[c].trips[0]);
                        return Err(RelationError::Intransitive(tc, tb, ta));
                    }
                }
            }
        }
        Self::from_parts(nodes, &arcs)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[MetaNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&MetaNode, RelationError> {
        self.nodes.get(id.0).ok_or(RelationError::UnknownNode(id.0))
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    /// Node containing trip `t`.
    pub fn node_of(&self, t: TripId) -> Option<NodeId> {
        match self.node_of.get(t.index()) {
            Some(&k) if k != usize::MAX => Some(NodeId(k)),
            _ => None,
        }
    }

    pub fn out_neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.out[id.0].iter().map(|&k| NodeId(k))
    }

    pub fn in_neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.inn[id.0].iter().map(|&k| NodeId(k))
    }

    /// Arcs `(μ, ν)`, sorted.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (NodeId(a), NodeId(b))))
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Checks the inverse-tree shape and returns its unique sink.
    pub fn inverse_tree_sink(&self) -> Result<NodeId, RelationError> {
        if self.nodes.is_empty() {
            return Err(RelationError::NotInverseTree("no nodes".into()));
        }
        if let Some(k) = self.out.iter().position(|s| s.len() > 1) {
            return Err(RelationError::NotInverseTree(format!(
                "node {} has out-degree {}",
                k,
                self.out[k].len()
            )));
        }
        let sinks: Vec<usize> = (0..self.nodes.len()).filter(|&k| self.out[k].is_empty()).collect();
        match sinks.as_slice() {
            [sink] => Ok(NodeId(*sink)),
            _ => Err(RelationError::NotInverseTree(format!("{} sinks", sinks.len()))),
        }
    }

    pub fn is_inverse_tree(&self) -> bool {
        self.inverse_tree_sink().is_ok()
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn label(&self, id: NodeId) -> Option<usize> {
        self.labels.as_ref().and_then(|l| l.label.get(id.0).copied())
    }

    pub fn node_with_label(&self, label: usize) -> Option<NodeId> {
        let l = self.labels.as_ref()?;
        label.checked_sub(1).and_then(|k| l.by_label.get(k)).map(|&k| NodeId(k))
    }

    /// Nodes in decreasing label order `μ_p, ..., μ_1`.
    pub fn by_decreasing_label(&self) -> Result<Vec<NodeId>, RelationError> {
        let l = self.labels.as_ref().ok_or(RelationError::Unlabeled)?;
        Ok(l.by_label.iter().rev().map(|&k| NodeId(k)).collect())
    }

    /// Whether `a ∈ A*_μ`, i.e. `a` reaches `μ` by a possibly empty path.
    ///
    /// Constant time on labeled inverse trees, a graph search otherwise.
    pub fn is_ancestor_or_self(&self, a: NodeId, mu: NodeId) -> bool {
        if let Some(Labels {
            label,
            span: Some(span),
            ..
        }) = &self.labels
        {
            let (la, lm) = (label[a.0], label[mu.0]);
            return lm <= la && la < lm + span[mu.0];
        }
        a == mu || self.search(a.0, &self.out).contains(&mu.0)
    }

    /// Number of nodes in `A*_μ` on labeled inverse trees; these carry labels
    /// `label(μ) ..= label(μ) + span - 1`.
    pub fn ancestor_span(&self, mu: NodeId) -> Option<usize> {
        self.labels.as_ref()?.span.as_ref().map(|s| s[mu.0])
    }

    fn search(&self, from: usize, adj: &[Vec<usize>]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = adj[from].clone();
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend(&adj[v]);
            }
        }
        seen
    }

    pub fn ancestors(&self, mu: NodeId) -> Vec<NodeId> {
        self.search(mu.0, &self.inn).into_iter().map(NodeId).collect()
    }

    pub fn descendants(&self, mu: NodeId) -> Vec<NodeId> {
        self.search(mu.0, &self.out).into_iter().map(NodeId).collect()
    }

    /// Arc list in label space, one `"b a"` line per arc `(μ_b, μ_a)`.
    pub fn label_dump(&self) -> Result<String, RelationError> {
        let l = self.labels.as_ref().ok_or(RelationError::Unlabeled)?;
        let mut lines: Vec<(usize, usize)> = self
            .arcs()
            .into_iter()
            .map(|(a, b)| (l.label[a.0], l.label[b.0]))
            .collect();
        lines.sort_unstable();
        Ok(lines.iter().map(|(b, a)| format!("{b} {a}\n")).collect())
    }

    /// Labels the nodes of an inverse tree `μ_p, ..., μ_1` with the stack
    /// procedure: push the sink, repeatedly push an unvisited in-neighbor of
    /// the top node (lowest node index first), and pop nodes with no
    /// unvisited in-arc, giving them decreasing labels starting at `p`.
    pub fn label_inverse_tree(mut self) -> Result<Self, RelationError> {
        let sink = self.inverse_tree_sink()?;
        let p = self.nodes.len();
        let mut label = vec![0usize; p];
        let mut span = vec![1usize; p];
        let mut next = p;
        let mut stack: Vec<(usize, usize)> = vec![(sink.0, 0)];
        while let Some(top) = stack.last_mut() {
            let (mu, cursor) = *top;
            if cursor < self.inn[mu].len() {
                top.1 += 1;
                stack.push((self.inn[mu][cursor], 0));
            } else {
                stack.pop();
                label[mu] = next;
                next -= 1;
                span[mu] = 1 + self.inn[mu].iter().map(|&c| span[c]).sum::<usize>();
            }
        }
        debug_assert_eq!(next, 0, "inverse tree is connected");
        let mut by_label = vec![0usize; p];
        for (node, &l) in label.iter().enumerate() {
            by_label[l - 1] = node;
        }
        self.labels = Some(Labels {
            label,
            by_label,
            span: Some(span),
        });
        Ok(self)
    }

    /// Labels any DAG so that every arc `(μ_b, μ_a)` has `b > a`, following a
    /// topological order (smallest node index first among ready nodes).
    pub fn label_topological(mut self) -> Result<Self, RelationError> {
        let order = topological_order(&self.out)?;
        let p = order.len();
        let mut label = vec![0usize; p];
        for (k, &node) in order.iter().enumerate() {
            label[node] = p - k;
        }
        let mut by_label = vec![0usize; p];
        for (node, &l) in label.iter().enumerate() {
            by_label[l - 1] = node;
        }
        self.labels = Some(Labels {
            label,
            by_label,
            span: None,
        });
        Ok(self)
    }

    /// Strict reachability of the simplified graph, per node.
    pub fn reachability(&self) -> Vec<Vec<usize>> {
        reach_sets(&self.out)
            .expect("meta graphs are acyclic")
            .iter()
            .map(|s| s.iter().collect())
            .collect()
    }
}

fn group_by_source(inst: &Instance) -> Vec<MetaNode> {
    let mut groups: BTreeMap<VertexId, Vec<TripId>> = BTreeMap::new();
    for t in inst.trips() {
        groups.entry(t.source).or_default().push(t.id);
    }
    groups
        .into_iter()
        .map(|(source, trips)| MetaNode { source, trips })
        .collect()
}

/// Groups trips by source and derives node arcs from `dg` (an arc `(u, v)`
/// of the digraph becomes `(node(v), node(u))`), then removes shortcuts.
///
/// `dg` should be the route-compatibility digraph; see
/// [`build_compatibility_digraph`](super::build_compatibility_digraph).
pub fn build_meta_graph(inst: &Instance, dg: &ServeDigraph) -> Result<MetaGraph, RelationError> {
    let cond = inst.conditions();
    for (k, ok) in [(1, cond.same_endpoint), (2, cond.zero_detour), (3, cond.fixed_path)] {
        if !ok {
            return Err(RelationError::ConditionViolated(k));
        }
    }
    if let Some((k, j, i)) = check_transitive(dg) {
        return Err(RelationError::Intransitive(k, j, i));
    }
    let nodes = group_by_source(inst);
    let mut node_of = vec![0usize; inst.len()];
    for (k, node) in nodes.iter().enumerate() {
        for t in &node.trips {
            node_of[t.index()] = k;
        }
    }
    let mut arcs = BTreeSet::new();
    for (u, v) in dg.arcs() {
        if u.index() >= inst.len() || v.index() >= inst.len() {
            return Err(crate::model::ModelError::UnknownTrip(u.max(v)).into());
        }
        let (mu, nu) = (node_of[v.index()], node_of[u.index()]);
        if mu != nu {
            arcs.insert((mu, nu));
        }
    }
    MetaGraph::from_parts(nodes, &arcs.into_iter().collect::<Vec<_>>())
}

/// Labels an inverse-tree meta graph; fails on any other shape.
pub fn label_nodes(mg: MetaGraph) -> Result<MetaGraph, RelationError> {
    mg.label_inverse_tree()
}

/// Ancestor and descendant sets of `mu`.
pub fn meta_queries(mg: &MetaGraph, mu: NodeId) -> Result<MetaQueries, RelationError> {
    mg.node(mu)?;
    let ancestors = mg.ancestors(mu);
    let descendants = mg.descendants(mu);
    let with_self = |mut v: Vec<NodeId>| {
        v.push(mu);
        v.sort_unstable();
        v
    };
    Ok(MetaQueries {
        ancestors_or_self: with_self(ancestors.clone()),
        descendants_or_self: with_self(descendants.clone()),
        ancestors,
        descendants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bare(p: usize) -> Vec<MetaNode> {
        (0..p)
            .map(|k| MetaNode {
                source: k as VertexId,
                trips: vec![TripId::from_index(k)],
            })
            .collect()
    }

    #[test]
    fn single_node_gets_label_one() {
        let mg = label_nodes(MetaGraph::from_parts(bare(1), &[]).unwrap()).unwrap();
        assert_eq!(mg.label(NodeId(0)), Some(1));
    }

    #[test]
    fn chain_labels_descend_toward_sink() {
        // a=0 -> b=1 -> c=2, c is the sink
        let mg = label_nodes(MetaGraph::from_parts(bare(3), &[(0, 1), (1, 2)]).unwrap()).unwrap();
        assert_eq!(
            [0, 1, 2].map(|k| mg.label(NodeId(k)).unwrap()),
            [3, 2, 1]
        );
        let q = meta_queries(&mg, NodeId(2)).unwrap();
        assert_eq!(q.ancestors_or_self, vec![NodeId(0), NodeId(1), NodeId(2)]);
        assert!(q.descendants.is_empty());
        assert_eq!(mg.label_dump().unwrap(), "2 1\n3 2\n");
    }

    #[test]
    fn star_into_sink() {
        // three origins 1, 2, 3 into sink 0
        let mg = label_nodes(MetaGraph::from_parts(bare(4), &[(1, 0), (2, 0), (3, 0)]).unwrap()).unwrap();
        assert_eq!(mg.label(NodeId(0)), Some(1));
        assert_eq!(
            [1, 2, 3].map(|k| mg.label(NodeId(k)).unwrap()),
            [4, 3, 2]
        );
        for (a, b) in mg.arcs() {
            assert!(mg.label(a) > mg.label(b));
        }
    }

    #[test]
    fn shortcut_removed_and_non_tree_rejected() {
        let mg = MetaGraph::from_parts(bare(3), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(mg.arcs(), vec![(NodeId(0), NodeId(1)), (NodeId(1), NodeId(2))]);

        let fork = MetaGraph::from_parts(bare(3), &[(0, 1), (0, 2)]).unwrap();
        assert!(matches!(
            fork.clone().label_inverse_tree(),
            Err(RelationError::NotInverseTree(_))
        ));
        let labeled = fork.label_topological().unwrap();
        for (a, b) in labeled.arcs() {
            assert!(labeled.label(a) > labeled.label(b));
        }
        assert!(labeled.is_ancestor_or_self(NodeId(0), NodeId(2)));
        assert!(!labeled.is_ancestor_or_self(NodeId(1), NodeId(2)));
    }

    #[test]
    fn unknown_node_query() {
        let mg = MetaGraph::from_parts(bare(1), &[]).unwrap();
        assert_eq!(meta_queries(&mg, NodeId(5)), Err(RelationError::UnknownNode(5)));
    }
}
