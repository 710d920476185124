//! c-reducers, hollow components and closed-neighborhood certificates.
//!
//! A c-reducer is a clique `C` on `c − 1` vertices joined to every vertex of
//! a disjoint stable set `S′`, where `C` has no other neighbors. Any
//! c-coloring gives `S′` one color, so deleting `C` and contracting `S′` to
//! a single vertex keeps c-colorability in both directions.

use alloc::vec;
use alloc::vec::Vec;

use crate::coloring::{first_conflict, Color, PartialColoring};
use crate::constants::ConstantsProfile;
use crate::dense::{self, DenseError, DenseReport};
use crate::exact::{self, SolverBudgetExceeded};
use crate::graph::{k_delta, Graph, InducedSubgraph, Vertex, VertexSet};
use crate::listcolor::{self, ExtendReport, ListColorError};
use crate::matching::{greedy_complement_matching, maximum_complement_matching};

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReducerSpec {
    pub clique: VertexSet,
    pub stable: VertexSet,
    /// Index of the dense component this reducer was found in.
    pub component_id: usize,
}

impl ReducerSpec {
    pub fn vertices(&self) -> VertexSet {
        self.clique.union(&self.stable)
    }

    /// Checks the defining adjacencies against `g` and `c`.
    pub fn is_valid(&self, g: &Graph, c: usize) -> bool {
        let all = self.vertices();
        self.clique.len() + 1 == c
            && !self.stable.is_empty()
            && self.clique.intersection(&self.stable).is_empty()
            && self.stable.iter().all(|s| g.neighbors(s).iter().all(|&w| !self.stable.contains(w)))
            && self.clique.iter().all(|v| g.degree(v) + 1 == all.len() && g.neighbors(v).iter().all(|&w| all.contains(w)))
    }
}

/// Tests whether `x` is exactly a c-reducer: `C` is the set of vertices
/// whose closed neighborhood is all of `x`, and `S′ = x ∖ C` must be a
/// non-empty stable set with `|C| = c − 1`.
pub fn detect_reducer(g: &Graph, x: &VertexSet, c: usize) -> Option<ReducerSpec> {
    let clique: VertexSet = x.iter().filter(|&v| g.degree(v) + 1 == x.len() && g.neighbors(v).iter().all(|&w| x.contains(w))).collect();
    let spec = ReducerSpec { stable: x.difference(&clique), clique, component_id: 0 };
    spec.is_valid(g, c).then_some(spec)
}

/// [`detect_reducer`] over every component, tagging component indices.
pub fn detect_reducers(g: &Graph, components: &[VertexSet], c: usize) -> Vec<ReducerSpec> {
    components
        .iter()
        .enumerate()
        .filter_map(|(i, x)| detect_reducer(g, x, c).map(|r| ReducerSpec { component_id: i, ..r }))
        .collect()
}

/// Vertices outside the reducer with a neighbor in `S′`.
pub fn external_neighbors(g: &Graph, r: &ReducerSpec) -> VertexSet {
    let inside = r.vertices();
    r.stable.iter().flat_map(|s| g.neighbors(s).iter().copied()).filter(|&w| !inside.contains(w)).collect()
}

/// Fewer than `c` outside vertices see `S′`, so `S′` can always take a
/// color missing around it.
pub fn is_deletable(g: &Graph, r: &ReducerSpec, c: usize) -> bool {
    external_neighbors(g, r).len() < c
}

/// The reduced graph and how to carry colorings back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub graph: Graph,
    /// Id in the reduced graph per original vertex (index `v`); `None` for
    /// deleted clique vertices.
    pub to_r: Vec<Option<Vertex>>,
    /// The contracted vertex of each reducer.
    pub contracted: Vec<Vertex>,
    pub reducers: Vec<ReducerSpec>,
}

impl Reduction {
    /// Carries a total c-coloring of the reduced graph back to `g`: `S′`
    /// takes the contracted vertex's color and `C` the other `c − 1` colors
    /// in ascending order.
    pub fn lift(&self, r_coloring: &PartialColoring, c: Color) -> PartialColoring {
        let n = self.to_r.len() - 1;
        let mut out = PartialColoring::new(n, c.max(r_coloring.palette()));
        for v in 1..=n as Vertex {
            if let Some(rv) = self.to_r[v as usize] {
                if let Some(col) = r_coloring.get(rv) {
                    out.set(v, col);
                }
            }
        }
        for (r, &x) in self.reducers.iter().zip(&self.contracted) {
            let Some(col) = r_coloring.get(x) else { continue };
            let others = (1..=c).filter(|&k| k != col);
            for (v, k) in r.clique.iter().zip(others) {
                out.set(v, k);
            }
        }
        out
    }
}

/// Deletes `C` and contracts `S′` for one reducer.
pub fn reduce(g: &Graph, r: &ReducerSpec) -> Reduction {
    reduce_all(g, core::slice::from_ref(r))
}

/// Reduces every reducer of a vertex-disjoint list at once. The contracted
/// vertex takes the place of the smallest member of `S′` in id order.
pub fn reduce_all(g: &Graph, reducers: &[ReducerSpec]) -> Reduction {
    let n = g.n();
    let mut deleted = vec![false; n + 1];
    let mut lead = vec![0 as Vertex; n + 1];
    for r in reducers {
        for v in r.clique.iter() {
            deleted[v as usize] = true;
        }
        let first = r.stable.first().expect("non-empty stable set");
        for s in r.stable.iter() {
            lead[s as usize] = first;
        }
    }
    let mut to_r = vec![None; n + 1];
    let mut next = 0 as Vertex;
    for v in g.vertices() {
        if deleted[v as usize] || (lead[v as usize] != 0 && lead[v as usize] != v) {
            continue;
        }
        next += 1;
        to_r[v as usize] = Some(next);
    }
    for v in g.vertices() {
        if lead[v as usize] != 0 {
            to_r[v as usize] = to_r[lead[v as usize] as usize];
        }
    }
    let mut edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .filter_map(|(u, v)| {
            let (a, b) = (to_r[u as usize]?, to_r[v as usize]?);
            Some((a.min(b), a.max(b)))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::from_edges(next as usize, edges).expect("stable sets contract without loops");
    let contracted = reducers.iter().map(|r| to_r[r.stable.first().unwrap() as usize].unwrap()).collect();
    Reduction { graph, to_r, contracted, reducers: reducers.to_vec() }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReducerError {
    #[error("reducer {0} does not match the definition")]
    Invalid(usize),
    #[error("reducer {0} is not deletable")]
    NotDeletable(usize),
    #[error("vertex {0} outside the reducers is uncolored")]
    OuterIncomplete(Vertex),
    #[error("input coloring is improper at edge ({0}, {1})")]
    ImproperInput(Vertex, Vertex),
    #[error(transparent)]
    List(#[from] ListColorError),
}

/// Extends a c-coloring of `G − ∪(C ∪ S′)` over deletable reducers: color
/// the contracted vertices by list coloring in the reduced graph, then lift.
/// Colors `outer` gives to reducer vertices are ignored.
pub fn extend_over_reducers(
    g: &Graph,
    reducers: &[ReducerSpec],
    outer: &PartialColoring,
    c: usize,
    seed: u64,
    max_rounds: usize,
) -> Result<(PartialColoring, ExtendReport), ReducerError> {
    let mut inside = vec![false; g.n() + 1];
    for (i, r) in reducers.iter().enumerate() {
        if !r.is_valid(g, c) {
            return Err(ReducerError::Invalid(i));
        }
        if !is_deletable(g, r, c) {
            return Err(ReducerError::NotDeletable(i));
        }
        for v in r.vertices().iter() {
            inside[v as usize] = true;
        }
    }
    let mut base = outer.clone();
    for v in g.vertices().filter(|&v| inside[v as usize]) {
        base.clear(v);
    }
    if let Some(v) = g.vertices().find(|&v| !inside[v as usize] && !base.is_colored(v)) {
        return Err(ReducerError::OuterIncomplete(v));
    }
    if let Some((u, v)) = first_conflict(g, &base) {
        return Err(ReducerError::ImproperInput(u, v));
    }
    let red = reduce_all(g, reducers);
    let mut r_col = PartialColoring::new(red.graph.n(), (c as Color).max(base.palette()));
    for v in g.vertices() {
        if let (Some(rv), Some(col)) = (red.to_r[v as usize], base.get(v)) {
            r_col.set(rv, col);
        }
    }
    let targets: VertexSet = red.contracted.iter().copied().collect();
    let (r_done, report) = listcolor::extend_subset(&red.graph, &r_col, &targets, c as Color, 1, seed, max_rounds)?;
    let out = red.lift(&r_done, c as Color);
    debug_assert!(first_conflict(g, &out).is_none());
    Ok((out, report))
}

/// Whether the complement of `g[x]` has a matching with at least
/// `threshold` pairs. The greedy maximal matching settles most cases (it
/// is at least half the maximum); the exact blossom matching decides the
/// rest.
pub fn detect_hollow(g: &Graph, x: &VertexSet, threshold: usize) -> bool {
    let greedy = greedy_complement_matching(g, x).len();
    if greedy >= threshold {
        return true;
    }
    if 2 * greedy < threshold {
        return false;
    }
    maximum_complement_matching(g, x).len() >= threshold
}

/// Extends `outer` over the hollow components with the same five stages as
/// the dense extension.
pub fn extend_over_hollow(
    g: &Graph,
    hollow: &[VertexSet],
    outer: &PartialColoring,
    c: Color,
    k_equiv: u64,
    profile: &ConstantsProfile,
    seed: u64,
) -> Result<(PartialColoring, DenseReport), DenseError> {
    let mut base = outer.clone();
    for v in hollow.iter().flat_map(|x| x.iter()) {
        base.clear(v);
    }
    dense::dense_extend_components(g, hollow, &base, c, k_equiv, profile, seed)
}

/// A closed neighborhood that cannot be c-colored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub vertex: Vertex,
    pub subgraph: InducedSubgraph,
    pub palette: usize,
    /// Search nodes the refutation took.
    pub solver_nodes: u64,
}

/// Outcome of a certification scan and which hypotheses of the converse
/// hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyReport {
    pub certificate: Option<Certificate>,
    pub delta: usize,
    pub k_delta: u64,
    /// `c ≥ Δ − k_Δ + 1`: without a certificate, `g` is then c-colorable
    /// for large enough `Δ`.
    pub c_above_threshold: bool,
    pub neighborhoods_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CertifyError {
    #[error("around vertex {vertex}: {source}")]
    Budget { vertex: Vertex, source: SolverBudgetExceeded },
    #[error("refutation at vertex {0} was not confirmed by the independent check")]
    Unconfirmed(Vertex),
}

/// Scans closed neighborhoods in ascending vertex order and returns the
/// first one that is not c-colorable. Every refutation is re-checked by a
/// second, independent solver before it is emitted.
pub fn certify_non_colorable(g: &Graph, c: usize, budget: u64) -> Result<CertifyReport, CertifyError> {
    let delta = g.delta();
    let kd = if delta >= 2 { k_delta(delta as u64) } else { 0 };
    let c_above_threshold = c as u64 + kd > delta as u64;
    let mut checked = 0;
    for v in g.vertices() {
        checked += 1;
        let sub = g.induced(&g.closed_neighborhood(v));
        let verdict = exact::color_with(&sub.graph, c, budget).map_err(|source| CertifyError::Budget { vertex: v, source })?;
        if verdict.coloring.is_none() {
            let confirmed =
                exact::brute_force_colorable(&sub.graph, c, budget).map_err(|source| CertifyError::Budget { vertex: v, source })?;
            if confirmed {
                return Err(CertifyError::Unconfirmed(v));
            }
            let certificate = Certificate { vertex: v, subgraph: sub, palette: c, solver_nodes: verdict.nodes };
            return Ok(CertifyReport {
                certificate: Some(certificate),
                delta,
                k_delta: kd,
                c_above_threshold,
                neighborhoods_checked: checked,
            });
        }
    }
    Ok(CertifyReport { certificate: None, delta, k_delta: kd, c_above_threshold, neighborhoods_checked: checked })
}

/// Some c-reducer of `g`, found by testing the closed neighborhood of every
/// vertex of degree `c − 2` or more. The smallest clique vertex wins.
pub fn find_reducer(g: &Graph, c: usize) -> Option<ReducerSpec> {
    g.vertices()
        .filter(|&v| g.degree(v) + 2 >= c)
        .find_map(|v| detect_reducer(g, &g.closed_neighborhood(v), c))
}

/// Exact c-colorability after peeling reducers one at a time. Each
/// reduction preserves c-colorability in both directions, so the answer is
/// the same as on `g` itself; the search just runs on a smaller core.
/// Returns a proper c-coloring of `g` when one exists.
pub fn color_with_reductions(g: &Graph, c: usize, budget: u64) -> Result<Option<PartialColoring>, SolverBudgetExceeded> {
    let mut chain: Vec<Reduction> = Vec::new();
    let mut current = g.clone();
    while let Some(r) = find_reducer(&current, c) {
        let red = reduce(&current, &r);
        current = red.graph.clone();
        chain.push(red);
    }
    let Some(mut coloring) = exact::color_with(&current, c, budget)?.coloring else {
        return Ok(None);
    };
    for red in chain.iter().rev() {
        coloring = red.lift(&coloring, c as Color);
    }
    debug_assert!(coloring.is_total() && first_conflict(g, &coloring).is_none());
    Ok(Some(coloring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_proper;
    use crate::exact::DEFAULT_EXACT_BUDGET;
    use crate::iso::are_isomorphic;

    /// `K_{c−1}` on `1..c−1` joined to a stable set on the next `s` ids,
    /// plus `extra` edges.
    fn reducer_graph(c: usize, s: usize, n: usize, extra: &[(Vertex, Vertex)]) -> Graph {
        let k = c as Vertex - 1;
        let mut edges = Vec::new();
        for u in 1..=k {
            for v in u + 1..=k {
                edges.push((u, v));
            }
            for t in 1..=s as Vertex {
                edges.push((u, k + t));
            }
        }
        edges.extend_from_slice(extra);
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn detection_examples() {
        let g = reducer_graph(5, 3, 7, &[]);
        let x: VertexSet = g.vertices().collect();
        let r = detect_reducer(&g, &x, 5).unwrap();
        assert_eq!(r.clique.as_slice(), [1, 2, 3, 4]);
        assert_eq!(r.stable.as_slice(), [5, 6, 7]);

        let k5 = Graph::complete(5);
        assert_eq!(detect_reducer(&k5, &k5.vertices().collect(), 5), None);

        // A clique vertex with an outside neighbor.
        let g = reducer_graph(5, 3, 8, &[(1, 8)]);
        assert_eq!(detect_reducer(&g, &(1..=7).collect(), 5), None);
    }

    #[test]
    fn deletability_boundary() {
        let c = 4;
        let none = reducer_graph(c, 2, 5, &[]);
        let x: VertexSet = (1..=5).collect();
        assert!(is_deletable(&none, &detect_reducer(&none, &x, c).unwrap(), c));
        // S′ = {4, 5} sees exactly c = 4 outside vertices.
        let g = reducer_graph(c, 2, 9, &[(4, 6), (4, 7), (5, 8), (5, 9)]);
        let r = detect_reducer(&g, &x, c).unwrap();
        assert_eq!(external_neighbors(&g, &r).len(), 4);
        assert!(!is_deletable(&g, &r, c));
    }

    #[test]
    fn reduction_to_a_single_vertex() {
        let g = reducer_graph(4, 2, 5, &[]);
        let r = detect_reducer(&g, &g.vertices().collect(), 4).unwrap();
        let red = reduce(&g, &r);
        assert_eq!((red.graph.n(), red.graph.m()), (1, 0));
    }

    #[test]
    fn reduction_preserves_colorability() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..150 {
            let c = rng.gen_range(3..=5);
            let s = rng.gen_range(1..=3);
            let host = rng.gen_range(2..=8);
            let first_host = (c - 1 + s) as Vertex + 1;
            let n = c - 1 + s + host;
            let mut extra = Vec::new();
            for u in first_host..=n as Vertex {
                for v in u + 1..=n as Vertex {
                    if rng.gen_bool(0.5) {
                        extra.push((u, v));
                    }
                }
                for t in 0..s as Vertex {
                    if rng.gen_bool(0.3) {
                        extra.push((c as Vertex + t, u));
                    }
                }
            }
            let g = reducer_graph(c, s, n, &extra);
            let x: VertexSet = (1..first_host).collect();
            let Some(r) = detect_reducer(&g, &x, c) else { continue };
            let red = reduce(&g, &r);
            let a = exact::is_colorable(&g, c, DEFAULT_EXACT_BUDGET).unwrap();
            let b = exact::is_colorable(&red.graph, c, DEFAULT_EXACT_BUDGET).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn extension_forces_the_free_color() {
        // c = 4, S′ = {4, 5} sees outside vertices 6, 7, 8 colored 1, 2, 3.
        let c = 4;
        let g = reducer_graph(c, 2, 8, &[(4, 6), (5, 7), (5, 8)]);
        let r = detect_reducer(&g, &(1..=5).collect(), c).unwrap();
        let outer = PartialColoring::from_colors(vec![None, None, None, None, None, Some(1), Some(2), Some(3)], 4);
        let (out, _) = extend_over_reducers(&g, &[r], &outer, c, 9, 1000).unwrap();
        assert!(is_proper(&g, &out) && out.is_total());
        assert_eq!(out.get(4), Some(4));
        assert_eq!(out.get(5), Some(4));
        for v in 6..=8 {
            assert_eq!(out.get(v), outer.get(v));
        }
    }

    #[test]
    fn isolated_reducer_with_empty_outer() {
        let g = reducer_graph(5, 3, 7, &[]);
        let r = detect_reducer(&g, &g.vertices().collect(), 5).unwrap();
        let (out, _) = extend_over_reducers(&g, &[r], &PartialColoring::new(7, 5), 5, 0, 1000).unwrap();
        assert!(is_proper(&g, &out) && out.is_total());
        assert!(out.get(5) == out.get(6) && out.get(6) == out.get(7));
    }

    #[test]
    fn hollow_examples() {
        let k6 = Graph::complete(6);
        assert!(!detect_hollow(&k6, &k6.vertices().collect(), 1));
        let stable = Graph::empty(8);
        let all: VertexSet = stable.vertices().collect();
        assert!(detect_hollow(&stable, &all, 4));
        assert!(!detect_hollow(&stable, &all, 5));
        // K_m minus C_m: the complement is C_m, with maximum matching ⌊m/2⌋.
        for m in [7usize, 8] {
            let cyc = Graph::cycle(m);
            let edges = (1..=m as Vertex).flat_map(|u| (u + 1..=m as Vertex).map(move |v| (u, v)));
            let g = Graph::from_edges(m, edges.filter(|&(u, v)| !cyc.has_edge(u, v))).unwrap();
            let all: VertexSet = g.vertices().collect();
            assert!(detect_hollow(&g, &all, m / 2));
            assert!(!detect_hollow(&g, &all, m / 2 + 1));
        }
    }

    #[test]
    fn certificate_examples() {
        let k5 = Graph::complete(5);
        let rep = certify_non_colorable(&k5, 4, DEFAULT_EXACT_BUDGET).unwrap();
        let cert = rep.certificate.unwrap();
        assert_eq!(cert.vertex, 1);
        assert!(are_isomorphic(&cert.subgraph.graph, &k5));

        let c5 = Graph::cycle(5);
        assert_eq!(certify_non_colorable(&c5, 3, DEFAULT_EXACT_BUDGET).unwrap().certificate, None);
        // Every closed neighborhood of C5 is a path, yet χ(C5) = 3 > 2.
        assert_eq!(certify_non_colorable(&c5, 2, DEFAULT_EXACT_BUDGET).unwrap().certificate, None);
        assert!(!exact::is_colorable(&c5, 2, DEFAULT_EXACT_BUDGET).unwrap());
    }

    #[test]
    fn hollow_extension_without_components() {
        let g = Graph::path(4);
        let outer = PartialColoring::from_colors(vec![Some(1), Some(2), Some(1), Some(2)], 2);
        let (out, _) = extend_over_hollow(&g, &[], &outer, 2, 1, &ConstantsProfile::desk(), 0).unwrap();
        assert_eq!(out, outer);
    }
}
