//! Simple undirected graphs on vertex ids `1..=n`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Vertex ids are 1-based, as in the LOCAL model.
pub type Vertex = u32;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} outside 1..={n}")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
}

/// A simple undirected graph with sorted adjacency lists and a cached
/// maximum degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
    delta: usize,
}

impl Graph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Graph {
        Graph { adj: vec![Vec::new(); n], m: 0, delta: 0 }
    }

    /// Builds a graph from an edge list, collapsing duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w == 0 || w as usize > n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u as usize - 1].push(v);
            adj[v as usize - 1].push(u);
        }
        let mut m = 0;
        let mut delta = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
            delta = delta.max(list.len());
        }
        Ok(Graph { adj, m: m / 2, delta })
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Graph {
        let edges = (1..=n as Vertex).flat_map(|u| (u + 1..=n as Vertex).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph is simple")
    }

    /// The cycle `C_n` on `1 - 2 - ... - n - 1`.
    pub fn cycle(n: usize) -> Graph {
        let edges = (1..=n as Vertex).map(|u| (u, u % n as Vertex + 1));
        Graph::from_edges(n, edges).expect("cycle is simple for n >= 3")
    }

    /// The path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Graph {
        let edges = (1..n as Vertex).map(|u| (u, u + 1));
        Graph::from_edges(n, edges).expect("path is simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Maximum degree.
    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + Clone {
        1..=self.adj.len() as Vertex
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v >= 1 && v as usize <= self.adj.len()
    }

    pub fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// Sorted neighbor ids. Panics on an unknown vertex.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.contains(u) && self.contains(v) && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Number of edges with both ends in `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        let mask = set.mask(self.n());
        set.iter()
            .map(|u| self.neighbors(u).iter().filter(|&&w| w > u && mask[w as usize]).count())
            .sum()
    }

    /// The subgraph induced by `set`, relabeled to `1..=|set|` in ascending
    /// order of original id.
    pub fn induced(&self, set: &VertexSet) -> InducedSubgraph {
        let ids: Vec<Vertex> = set.iter().collect();
        let mut local = vec![0 as Vertex; self.n() + 1];
        for (i, &v) in ids.iter().enumerate() {
            local[v as usize] = i as Vertex + 1;
        }
        let edges = ids.iter().flat_map(|&u| {
            let lu = local[u as usize];
            let local = &local;
            self.neighbors(u)
                .iter()
                .filter_map(move |&w| (local[w as usize] > lu).then_some((lu, local[w as usize])))
        });
        let graph = Graph::from_edges(ids.len(), edges).expect("induced subgraph is simple");
        InducedSubgraph { graph, ids }
    }

    /// A copy with the edge `uv` removed (no-op if absent).
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Graph {
        Graph::from_edges(self.n(), self.edges().filter(|&(a, b)| !((a, b) == (u, v) || (a, b) == (v, u))))
            .expect("subgraph of a simple graph")
    }

    /// Breadth-first distances from `v` up to `radius` (`None` beyond).
    pub fn distances_from(&self, v: Vertex, radius: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n() + 1];
        dist[v as usize] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].unwrap();
            if du == radius {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices within distance `radius` of `v`, including `v`.
    pub fn ball(&self, v: Vertex, radius: usize) -> VertexSet {
        let dist = self.distances_from(v, radius);
        VertexSet::from_sorted_unchecked(
            (1..dist.len()).filter(|&u| dist[u].is_some()).map(|u| u as Vertex).collect(),
        )
    }

    /// Closed neighborhood `{v} ∪ N(v)`.
    pub fn closed_neighborhood(&self, v: Vertex) -> VertexSet {
        self.ball(v, 1)
    }
}

/// A set of vertex ids with ascending iteration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> VertexSet {
        VertexSet(Vec::new())
    }

    /// Trusts the caller that `ids` is strictly ascending.
    pub(crate) fn from_sorted_unchecked(ids: Vec<Vertex>) -> VertexSet {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        VertexSet(ids)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Vertex> + ExactSizeIterator + Clone + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    /// Smallest member.
    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    /// Membership mask of length `n + 1`, indexed by vertex id.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n + 1];
        for v in self.iter() {
            if (v as usize) <= n {
                mask[v as usize] = true;
            }
        }
        mask
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut ids: Vec<Vertex> = iter.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(ids: Vec<Vertex>) -> Self {
        ids.into_iter().collect()
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(ids: [Vertex; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = core::iter::Copied<core::slice::Iter<'a, Vertex>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// An induced subgraph together with the original id of each local vertex.
///
/// `ids[i]` is the original id of local vertex `i + 1`; `ids` is ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub ids: Vec<Vertex>,
}

impl InducedSubgraph {
    pub fn original(&self, local: Vertex) -> Vertex {
        self.ids[local as usize - 1]
    }

    pub fn local(&self, original: Vertex) -> Option<Vertex> {
        self.ids.binary_search(&original).ok().map(|i| i as Vertex + 1)
    }
}

/// Maximum `k` with `(k+1)(k+2) <= delta`; zero when `delta < 2`.
pub fn k_delta(delta: u64) -> u64 {
    if delta < 2 {
        return 0;
    }
    let fits = |k: u64| (k as u128 + 1) * (k as u128 + 2) <= delta as u128;
    let mut k = isqrt(delta);
    while k > 0 && !fits(k) {
        k -= 1;
    }
    while fits(k + 1) {
        k += 1;
    }
    k
}

fn isqrt(x: u64) -> u64 {
    let mut r = libm::sqrt(x as f64) as u64;
    while (r as u128) * (r as u128) > x as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= x as u128 {
        r += 1;
    }
    r
}

/// Number of unordered non-adjacent pairs inside `N(v)`, optionally
/// restricted to `N(v) ∩ restrict`.
pub fn non_adjacent_pairs_in_neighborhood(
    g: &Graph,
    v: Vertex,
    restrict: Option<&VertexSet>,
) -> Result<usize, GraphError> {
    g.check(v)?;
    let nbrs: VertexSet = match restrict {
        Some(r) => g.neighbors(v).iter().copied().filter(|&u| r.contains(u)).collect(),
        None => g.neighbors(v).iter().copied().collect(),
    };
    let m = nbrs.len();
    Ok(m * m.saturating_sub(1) / 2 - g.edges_within(&nbrs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (2..=leaves as Vertex + 1).map(|l| (1, l))).unwrap()
    }

    #[test]
    fn path_and_complete() {
        let p3 = Graph::from_edges(3, [(1, 2), (2, 3)]).unwrap();
        assert_eq!(p3.delta(), 2);
        assert_eq!(p3.m(), 2);
        let k4 = Graph::complete(4);
        assert_eq!((k4.n(), k4.delta(), k4.m()), (4, 3, 6));
    }

    #[test]
    fn rejects_self_loops_and_collapses_duplicates() {
        assert_eq!(Graph::from_edges(5, [(5, 5)]), Err(GraphError::SelfLoop(5)));
        let g = Graph::from_edges(2, [(1, 2), (2, 1), (1, 2)]).unwrap();
        assert_eq!(g.m(), 1);
        assert!(matches!(Graph::from_edges(2, [(1, 3)]), Err(GraphError::OutOfRange { vertex: 3, .. })));
    }

    #[test]
    fn k_delta_examples() {
        assert_eq!(k_delta(6), 1);
        assert_eq!(k_delta(12), 2);
        assert_eq!(k_delta(100), 8);
        assert_eq!(k_delta(2), 0);
        assert_eq!(k_delta(5), 0);
    }

    #[test]
    fn non_adjacent_pair_examples() {
        assert_eq!(non_adjacent_pairs_in_neighborhood(&star(3), 1, None), Ok(3));
        let k4 = Graph::complete(4);
        for v in k4.vertices() {
            assert_eq!(non_adjacent_pairs_in_neighborhood(&k4, v, None), Ok(0));
        }
        let c5 = Graph::cycle(5);
        for v in c5.vertices() {
            assert_eq!(non_adjacent_pairs_in_neighborhood(&c5, v, None), Ok(1));
        }
        let only = VertexSet::from([2, 3]);
        assert_eq!(non_adjacent_pairs_in_neighborhood(&star(3), 1, Some(&only)), Ok(1));
        assert_eq!(non_adjacent_pairs_in_neighborhood(&c5, 9, None), Err(GraphError::UnknownVertex(9)));
    }

    #[test]
    fn induced_relabels_in_order() {
        let c6 = Graph::cycle(6);
        let sub = c6.induced(&VertexSet::from([5, 6, 1, 2]));
        assert_eq!(sub.ids, [1, 2, 5, 6]);
        assert_eq!(sub.graph.m(), 3);
        assert_eq!(sub.local(5), Some(3));
        assert_eq!(sub.original(4), 6);
    }

    #[test]
    fn vertex_set_ops() {
        let mut s = VertexSet::from([4, 1, 4, 3]);
        assert_eq!(s.as_slice(), [1, 3, 4]);
        assert!(s.insert(2));
        assert!(!s.insert(2));
        assert!(s.remove(3));
        assert_eq!(s.difference(&VertexSet::from([1])).as_slice(), [2, 4]);
        assert_eq!(s.union(&VertexSet::from([9])).as_slice(), [1, 2, 4, 9]);
    }
}
