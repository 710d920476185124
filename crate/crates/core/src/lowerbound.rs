//! The layered hard-instance family.
//!
//! `G_1 = K_{c+1}`. Each later layer removes the lowest-id vertex `v` of the
//! previous clique, adds a stable set `S_j` of `Δ − c + 2` vertices taking
//! over the edges of `v` (handed out round-robin in ascending neighbor
//! order), and a clique `C_j` of `c − 1` vertices joined to all of `S_j`.
//! `G_{j−1}` is the reduction of `G_j` with respect to `(C_j, S_j)`, so no
//! `G_i` is c-colorable, yet deleting one edge in the middle makes it
//! c-colorable while balls of small radius do not notice.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{k_delta, Graph, Vertex};
use crate::iso::{are_isomorphic_rooted, wl_hash};
use crate::reducers::ReducerSpec;
use crate::sim::gather_ball;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Role {
    Clique,
    Stable,
}

/// Vertex removed when a layer was added.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RemovedVertex {
    /// Layer the vertex belonged to.
    pub layer: u32,
    /// Its neighbors at removal time, in final ids.
    pub neighbors: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayeredGraph {
    #[cfg_attr(feature = "serde", serde(skip))]
    pub graph: Graph,
    pub delta: usize,
    pub c: usize,
    /// Layer per vertex (index `v - 1`), starting at 1.
    pub layer_of: Vec<u32>,
    /// Role per vertex (index `v - 1`); layer 1 is all clique.
    pub role_of: Vec<Role>,
    pub removed: Vec<RemovedVertex>,
}

impl LayeredGraph {
    pub fn layers(&self) -> u32 {
        self.layer_of.iter().copied().max().unwrap_or(0)
    }

    /// Vertices of `layer` with `role`, ascending.
    pub fn members(&self, layer: u32, role: Role) -> Vec<Vertex> {
        (0..self.layer_of.len())
            .filter(|&i| self.layer_of[i] == layer && self.role_of[i] == role)
            .map(|i| i as Vertex + 1)
            .collect()
    }

    /// The reducer `(C_i, S_i)` of the top layer, for `i ≥ 2`.
    pub fn top_reducer(&self) -> Option<ReducerSpec> {
        let top = self.layers();
        (top >= 2).then(|| ReducerSpec {
            clique: self.members(top, Role::Clique).into(),
            stable: self.members(top, Role::Stable).into(),
            component_id: top as usize - 1,
        })
    }
}

/// Whether the family exists for `(Δ, c)`, with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub ok: bool,
    pub reason: String,
}

/// `c ≤ Δ − k_Δ − 1`, or `c = Δ − k_Δ` with `Δ = (k_Δ + 1)(k_Δ + 2)`.
/// Either way `(Δ − c + 2)(Δ − c + 1) ≥ Δ`, which is what lets the removed
/// vertex's edges spread over `S_j` without exceeding degree `Δ`.
pub fn valid_parameters(delta: usize, c: usize) -> Validity {
    if delta < 3 || c < 3 {
        return Validity { ok: false, reason: "need Δ ≥ 3 and c ≥ 3".into() };
    }
    let k = k_delta(delta as u64) as usize;
    let (ok, reason) = if c + k < delta {
        (true, format!("c = {c} ≤ Δ − k_Δ − 1 = {}", delta - k - 1))
    } else if c + k == delta && (k + 1) * (k + 2) == delta {
        (true, format!("c = Δ − k_Δ = {c} and Δ = (k_Δ + 1)(k_Δ + 2)"))
    } else if c + k == delta {
        (false, format!("c = Δ − k_Δ = {c} but Δ ≠ (k_Δ + 1)(k_Δ + 2) = {}", (k + 1) * (k + 2)))
    } else {
        (false, format!("c = {c} exceeds Δ − k_Δ = {}", delta - k))
    };
    debug_assert!(!ok || (delta - c + 2) * (delta - c + 1) >= delta);
    Validity { ok, reason }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LowerBoundError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("need at least one layer")]
    NoLayers,
    #[error("the hard instance needs an even i ≥ 4, got {0}")]
    BadLayerCount(usize),
    #[error("no edge joins layers {0} and {1}")]
    NoCrossingEdge(u32, u32),
}

/// Builds `G_i`.
pub fn build_chain(delta: usize, c: usize, i: usize) -> Result<LayeredGraph, LowerBoundError> {
    let validity = valid_parameters(delta, c);
    if !validity.ok {
        return Err(LowerBoundError::InvalidParameters(validity.reason));
    }
    if i == 0 {
        return Err(LowerBoundError::NoLayers);
    }
    // Working ids grow without reuse; removed vertices keep an empty slot.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new()];
    let mut layer = vec![0u32];
    let mut role = vec![Role::Clique];
    let mut dead: Vec<u32> = Vec::new();
    let mut add = |adj: &mut Vec<Vec<u32>>, l: u32, r: Role| {
        adj.push(Vec::new());
        layer.push(l);
        role.push(r);
        adj.len() as u32 - 1
    };
    let connect = |adj: &mut Vec<Vec<u32>>, u: u32, v: u32| {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    };

    let first: Vec<u32> = (0..=c).map(|_| add(&mut adj, 1, Role::Clique)).collect();
    for (a, &u) in first.iter().enumerate() {
        for &v in &first[a + 1..] {
            connect(&mut adj, u, v);
        }
    }
    let mut clique = first;
    let mut removed_raw: Vec<(u32, Vec<u32>)> = Vec::new();
    for j in 2..=i as u32 {
        let v = clique[0];
        let mut nbrs = core::mem::take(&mut adj[v as usize]);
        nbrs.sort_unstable();
        for &u in &nbrs {
            adj[u as usize].retain(|&w| w != v);
        }
        dead.push(v);
        let stable: Vec<u32> = (0..delta - c + 2).map(|_| add(&mut adj, j, Role::Stable)).collect();
        let next: Vec<u32> = (0..c - 1).map(|_| add(&mut adj, j, Role::Clique)).collect();
        for (idx, &u) in nbrs.iter().enumerate() {
            connect(&mut adj, u, stable[idx % stable.len()]);
        }
        for (a, &u) in next.iter().enumerate() {
            for &w in &next[a + 1..] {
                connect(&mut adj, u, w);
            }
            for &s in &stable {
                connect(&mut adj, u, s);
            }
        }
        removed_raw.push((j - 1, nbrs));
        clique = next;
    }

    let mut alive = vec![true; adj.len()];
    alive[0] = false;
    for &v in &dead {
        alive[v as usize] = false;
    }
    let alive_ref = &alive;
    let mut final_id = vec![0 as Vertex; adj.len()];
    let mut next_id = 0;
    for w in 1..adj.len() {
        if alive_ref[w] {
            next_id += 1;
            final_id[w] = next_id;
        }
    }
    let edges = (1..adj.len()).filter(|&w| alive_ref[w]).flat_map(|w| {
        let fid = &final_id;
        adj[w].iter().filter(move |&&u| (u as usize) > w).map(move |&u| (fid[w], fid[u as usize]))
    });
    let graph = Graph::from_edges(next_id as usize, edges.collect::<Vec<_>>()).expect("construction is simple");
    let keep = |w: usize| alive_ref[w];
    let layer_of = (1..adj.len()).filter(|&w| keep(w)).map(|w| layer[w]).collect();
    let role_of = (1..adj.len()).filter(|&w| keep(w)).map(|w| role[w]).collect();
    let removed = removed_raw
        .into_iter()
        .map(|(l, nbrs)| RemovedVertex { layer: l, neighbors: nbrs.iter().map(|&u| final_id[u as usize]).collect() })
        .collect();
    Ok(LayeredGraph { graph, delta, c, layer_of, role_of, removed })
}

/// The chain `G_i` and the c-colorable graph obtained by deleting the
/// lowest edge between layers `i/2` and `i/2 + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HardInstance {
    pub chain: LayeredGraph,
    pub graph: Graph,
    pub deleted: (Vertex, Vertex),
}

pub fn build_hard_instance(delta: usize, c: usize, i: usize) -> Result<HardInstance, LowerBoundError> {
    if i < 4 || i % 2 == 1 {
        return Err(LowerBoundError::BadLayerCount(i));
    }
    let chain = build_chain(delta, c, i)?;
    let (lo, hi) = (i as u32 / 2, i as u32 / 2 + 1);
    let layer = |v: Vertex| chain.layer_of[v as usize - 1];
    let deleted = chain
        .graph
        .edges()
        .find(|&(u, v)| {
            let (a, b) = (layer(u), layer(v));
            (a, b) == (lo, hi) || (a, b) == (hi, lo)
        })
        .ok_or(LowerBoundError::NoCrossingEdge(lo, hi))?;
    let graph = chain.graph.without_edge(deleted.0, deleted.1);
    Ok(HardInstance { chain, graph, deleted })
}

/// How many radius-`r` balls of the chain reappear in the hard graph.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndistinguishabilityReport {
    pub radius: usize,
    pub total: usize,
    pub matched: usize,
    pub unmatched: Vec<Vertex>,
}

impl IndistinguishabilityReport {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.matched as f64 / self.total as f64
        }
    }
}

/// For every vertex of the chain, looks for a vertex of `hard` whose
/// rooted ball of the same radius is isomorphic. Candidates are bucketed by
/// a rooted refinement hash and then checked exactly.
pub fn indistinguishability_report(hard: &Graph, chain: &LayeredGraph, radius: usize) -> IndistinguishabilityReport {
    let rooted = |g: &Graph, v: Vertex| {
        let ball = gather_ball(g, v, radius).expect("vertex of the graph");
        let root = ball.local(v).expect("center is in its ball");
        (ball.graph, root)
    };
    let mut hard_balls: Vec<(u64, Graph, Vertex)> = hard
        .vertices()
        .map(|w| {
            let (b, r) = rooted(hard, w);
            (wl_hash(&b, Some(r)), b, r)
        })
        .collect();
    hard_balls.sort_by_key(|e| e.0);
    let mut unmatched = Vec::new();
    for v in chain.graph.vertices() {
        let (b, r) = rooted(&chain.graph, v);
        let h = wl_hash(&b, Some(r));
        let start = hard_balls.partition_point(|e| e.0 < h);
        let found = hard_balls[start..]
            .iter()
            .take_while(|e| e.0 == h)
            .any(|(_, hb, hr)| are_isomorphic_rooted(&b, r, hb, *hr));
        if !found {
            unmatched.push(v);
        }
    }
    let total = chain.graph.n();
    IndistinguishabilityReport { radius, total, matched: total - unmatched.len(), unmatched }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{chromatic_number, is_colorable, DEFAULT_EXACT_BUDGET};
    use crate::iso::are_isomorphic;
    use crate::reducers::{color_with_reductions, reduce};

    #[test]
    fn parameter_examples() {
        assert!(valid_parameters(12, 9).ok);
        assert!(valid_parameters(12, 10).ok);
        assert!(!valid_parameters(12, 11).ok);
        assert!(!valid_parameters(13, 11).ok);
    }

    #[test]
    fn first_layers() {
        let g1 = build_chain(12, 9, 1).unwrap();
        assert!(are_isomorphic(&g1.graph, &Graph::complete(10)));
        let g2 = build_chain(12, 9, 2).unwrap();
        assert_eq!(g2.graph.n(), 22);
        assert!(g2.graph.delta() <= 12);
        let g3 = build_chain(12, 9, 3).unwrap();
        assert_eq!(g3.graph.n(), 34);
    }

    #[test]
    fn structure_holds() {
        for (delta, c) in [(12, 9), (12, 10), (20, 16), (30, 20)] {
            let lg = build_chain(delta, c, 5).unwrap();
            let g = &lg.graph;
            assert!(g.delta() <= delta);
            for j in 2..=5 {
                let cl = lg.members(j, Role::Clique);
                let st = lg.members(j, Role::Stable);
                let expected = if j == 5 { c - 1 } else { c - 2 };
                assert_eq!((cl.len(), st.len()), (expected, delta - c + 2));
                assert!(cl.iter().all(|&v| g.degree(v) == delta));
                assert!(st.iter().all(|&s| st.iter().all(|&t| !g.has_edge(s, t))));
                assert!(st.iter().all(|&s| cl.iter().all(|&v| g.has_edge(s, v))));
            }
        }
    }

    #[test]
    fn chain_is_not_c_colorable() {
        let g3 = build_chain(6, 4, 3).unwrap();
        assert_eq!(chromatic_number(&g3.graph, DEFAULT_EXACT_BUDGET), Ok(5));
    }

    #[test]
    fn reduction_gives_the_previous_chain() {
        for i in 2..=3 {
            let gi = build_chain(12, 9, i).unwrap();
            let prev = build_chain(12, 9, i - 1).unwrap();
            let red = reduce(&gi.graph, &gi.top_reducer().unwrap());
            assert!(are_isomorphic(&red.graph, &prev.graph));
        }
    }

    #[test]
    fn hard_instance() {
        assert_eq!(build_hard_instance(12, 9, 3), Err(LowerBoundError::BadLayerCount(3)));
        let h = build_hard_instance(6, 4, 4).unwrap();
        assert_eq!(h.chain.graph.m(), h.graph.m() + 1);
        assert!(is_colorable(&h.graph, 4, DEFAULT_EXACT_BUDGET).unwrap());
    }

    #[test]
    fn hard_instances_at_scale_via_reductions() {
        for (delta, c) in [(12, 9), (12, 10), (20, 16)] {
            let h = build_hard_instance(delta, c, 4).unwrap();
            let col = color_with_reductions(&h.graph, c, DEFAULT_EXACT_BUDGET).unwrap().expect("c-colorable");
            assert!(col.is_total() && crate::coloring::is_proper(&h.graph, &col));
            assert!(col.max_color().unwrap() as usize <= c);
            let chain = build_chain(delta, c, 4).unwrap();
            assert_eq!(color_with_reductions(&chain.graph, c, DEFAULT_EXACT_BUDGET), Ok(None));
        }
    }

    #[test]
    fn balls_match_at_small_radius() {
        let h = build_hard_instance(12, 9, 8).unwrap();
        assert_eq!(indistinguishability_report(&h.graph, &h.chain, 0).matched, h.chain.graph.n());
        let r1 = indistinguishability_report(&h.graph, &h.chain, 1);
        assert_eq!(r1.unmatched, Vec::<Vertex>::new());
        let whole = indistinguishability_report(&h.graph, &h.chain, h.chain.graph.n());
        assert_eq!(whole.matched, 0);
    }
}
