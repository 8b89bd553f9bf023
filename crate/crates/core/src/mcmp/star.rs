use std::collections::BTreeMap;

use super::{Matching, SolverError, StarConstraints};
use crate::model::{TripId, VertexId};
use crate::relation::ServeDigraph;

/// A center `root` carrying `leaves`, needing `stop_count` pickups away from
/// its own source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub root: TripId,
    pub leaves: Vec<TripId>,
    pub stop_count: u32,
}

/// Largest star at `v` over its in-neighbors untouched by `m`.
///
/// In-neighbors are grouped by source. The group sharing `v`'s source is
/// taken first since it costs no stop; then, while seats and stops remain,
/// the largest remaining group (ties: smallest member id). A group too large
/// for the remaining seats contributes its lowest ids.
pub fn greedy_star(
    dg: &ServeDigraph,
    sc: &StarConstraints,
    v: TripId,
    m: &Matching,
) -> Result<Star, SolverError> {
    if !dg.contains(v) {
        return Err(SolverError::UnknownVertex(v));
    }
    sc.check_len(dg)?;
    let own = sc.source(v);
    let mut groups: BTreeMap<VertexId, Vec<TripId>> = BTreeMap::new();
    for &u in dg.in_neighbors(v) {
        if !m.is_matched(u) {
            groups.entry(sc.source(u)).or_default().push(u);
        }
    }
    let mut seats = sc.capacity(v) as usize;
    let mut leaves = Vec::new();
    if let Some(same) = groups.remove(&own) {
        let take = same.len().min(seats);
        leaves.extend_from_slice(&same[..take]);
        seats -= take;
    }
    let mut rest: Vec<Vec<TripId>> = groups.into_values().collect();
    // Largest first; in-neighbor lists are sorted so `g[0]` is the smallest id.
    rest.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut stop_count = 0;
    for g in rest {
        if seats == 0 || stop_count >= sc.stop_limit(v) {
            break;
        }
        let take = g.len().min(seats);
        leaves.extend_from_slice(&g[..take]);
        seats -= take;
        stop_count += 1;
    }
    leaves.sort_unstable();
    Ok(Star {
        root: v,
        leaves,
        stop_count,
    })
}

/// Whether adopting `st` grows `m`: `|P_v| − Σ_u |M(u)| > |M(v)|`.
pub fn is_improvement(st: &Star, m: &Matching) -> bool {
    let displaced: usize = st.leaves.iter().map(|&u| m.incident(u)).sum();
    st.leaves.len() as i64 - displaced as i64 > m.incident(st.root) as i64
}
