//! Matchings in complements ("antimatchings") and maximum matching.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("vertex {0} appears in two pairs")]
    Overlap(Vertex),
    #[error("pair ({0}, {1}) is adjacent in the graph")]
    Adjacent(Vertex, Vertex),
    #[error("pair ({0}, {1}) is not an edge of the graph")]
    NotAnEdge(Vertex, Vertex),
}

/// Which graph the pairs of a [`Matching`] are edges of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// Pairs are edges of the graph.
    Edges,
    /// Pairs are non-edges: a matching of the complement.
    NonEdges,
}

/// Disjoint vertex pairs whose adjacency status was checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(Vertex, Vertex)>,
    kind: PairKind,
}

impl Matching {
    pub fn new(g: &Graph, pairs: Vec<(Vertex, Vertex)>, kind: PairKind) -> Result<Matching, MatchingError> {
        let mut seen = vec![false; g.n() + 1];
        for &(u, v) in &pairs {
            for w in [u, v] {
                if core::mem::replace(&mut seen[w as usize], true) {
                    return Err(MatchingError::Overlap(w));
                }
            }
            match (kind, g.has_edge(u, v)) {
                (PairKind::NonEdges, true) => return Err(MatchingError::Adjacent(u, v)),
                (PairKind::Edges, false) => return Err(MatchingError::NotAnEdge(u, v)),
                _ => {}
            }
        }
        Ok(Matching { pairs, kind })
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn endpoints(&self) -> VertexSet {
        self.pairs.iter().flat_map(|&(u, v)| [u, v]).collect()
    }

    /// The first `len` pairs.
    pub fn truncated(&self, len: usize) -> Matching {
        Matching { pairs: self.pairs[..len.min(self.pairs.len())].to_vec(), kind: self.kind }
    }
}

/// Ascending-id greedy maximal matching of the complement of `g[s]`.
///
/// Each unmatched `u` (ascending) is paired with the smallest unmatched
/// `w > u` in `s` that is non-adjacent to it. The vertices of `s` left
/// uncovered are pairwise adjacent, i.e. they form a clique of `g`.
pub fn greedy_complement_matching(g: &Graph, s: &VertexSet) -> Matching {
    let members: Vec<Vertex> = s.iter().collect();
    let mut matched = vec![false; g.n() + 1];
    let mut pairs = Vec::new();
    for (i, &u) in members.iter().enumerate() {
        if matched[u as usize] {
            continue;
        }
        if let Some(&w) = members[i + 1..].iter().find(|&&w| !matched[w as usize] && !g.has_edge(u, w)) {
            matched[u as usize] = true;
            matched[w as usize] = true;
            pairs.push((u, w));
        }
    }
    Matching { pairs, kind: PairKind::NonEdges }
}

/// Maximum matching of a general graph (Edmonds' blossom algorithm).
///
/// Pairs are returned with the smaller id first, sorted.
pub fn maximum_matching(g: &Graph) -> Vec<(Vertex, Vertex)> {
    let n = g.n();
    let adj: Vec<Vec<usize>> =
        (1..=n as Vertex).map(|v| g.neighbors(v).iter().map(|&w| w as usize - 1).collect()).collect();
    let mut blossom = Blossom::new(&adj);
    // Greedy start keeps the augmenting phase short.
    for (v, nbrs) in adj.iter().enumerate() {
        if blossom.mate[v].is_none() {
            if let Some(&w) = nbrs.iter().find(|&&w| blossom.mate[w].is_none()) {
                blossom.mate[v] = Some(w);
                blossom.mate[w] = Some(v);
            }
        }
    }
    for v in 0..n {
        if blossom.mate[v].is_none() {
            blossom.augment_from(v);
        }
    }
    let mut pairs: Vec<(Vertex, Vertex)> = (0..n)
        .filter_map(|v| blossom.mate[v].filter(|&w| v < w).map(|w| (v as Vertex + 1, w as Vertex + 1)))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Maximum matching of the complement of `g[s]`, in original ids.
pub fn maximum_complement_matching(g: &Graph, s: &VertexSet) -> Matching {
    let ids: Vec<Vertex> = s.iter().collect();
    let mut edges = Vec::new();
    for (i, &u) in ids.iter().enumerate() {
        for (j, &w) in ids.iter().enumerate().skip(i + 1) {
            if !g.has_edge(u, w) {
                edges.push((i as Vertex + 1, j as Vertex + 1));
            }
        }
    }
    let complement = Graph::from_edges(ids.len(), edges).expect("complement is simple");
    let pairs = maximum_matching(&complement)
        .into_iter()
        .map(|(a, b)| (ids[a as usize - 1], ids[b as usize - 1]))
        .collect();
    Matching { pairs, kind: PairKind::NonEdges }
}

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![None; n],
            parent: vec![None; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match self.mate[a] {
                Some(m) => a = self.parent[m].expect("matched vertex on a path has a parent"),
                None => break,
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b].expect("path back to root")].expect("parent");
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = self.mate[v].expect("blossom path is alternating");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("blossom path parent");
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_is_outer = to == root || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_is_outer {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }

    fn augment_from(&mut self, root: usize) {
        if let Some(mut v) = self.find_path(root) {
            loop {
                let pv = self.parent[v].expect("augmenting path");
                let ppv = self.mate[pv];
                self.mate[v] = Some(pv);
                self.mate[pv] = Some(v);
                match ppv {
                    Some(next) => v = next,
                    None => break,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_max_matching(g: &Graph) -> usize {
        fn go(edges: &[(Vertex, Vertex)], used: &mut Vec<bool>, from: usize) -> usize {
            let mut best = 0;
            for i in from..edges.len() {
                let (u, v) = edges[i];
                if !used[u as usize] && !used[v as usize] {
                    used[u as usize] = true;
                    used[v as usize] = true;
                    best = best.max(1 + go(edges, used, i + 1));
                    used[u as usize] = false;
                    used[v as usize] = false;
                }
            }
            best
        }
        let edges: Vec<_> = g.edges().collect();
        go(&edges, &mut vec![false; g.n() + 1], 0)
    }

    #[test]
    fn greedy_examples() {
        let k5 = Graph::complete(5);
        assert!(greedy_complement_matching(&k5, &VertexSet::from([1, 2, 3, 4, 5])).is_empty());
        let empty = Graph::empty(4);
        assert_eq!(greedy_complement_matching(&empty, &VertexSet::from([1, 2, 3, 4])).len(), 2);
        let c5 = Graph::cycle(5);
        let m = greedy_complement_matching(&c5, &VertexSet::from([1, 2, 3, 4, 5]));
        assert_eq!(m.pairs(), [(1, 3), (2, 4)]);
        assert_eq!(VertexSet::from([1, 2, 3, 4, 5]).difference(&m.endpoints()).as_slice(), [5]);
    }

    #[test]
    fn construction_checks_adjacency() {
        let p3 = Graph::path(3);
        assert!(Matching::new(&p3, vec![(1, 3)], PairKind::NonEdges).is_ok());
        assert_eq!(Matching::new(&p3, vec![(1, 2)], PairKind::NonEdges), Err(MatchingError::Adjacent(1, 2)));
        assert_eq!(Matching::new(&p3, vec![(1, 2), (2, 3)], PairKind::Edges), Err(MatchingError::Overlap(2)));
    }

    #[test]
    fn blossom_on_odd_cycles() {
        assert_eq!(maximum_matching(&Graph::cycle(5)).len(), 2);
        assert_eq!(maximum_matching(&Graph::cycle(9)).len(), 4);
        // Two triangles joined by an edge need the blossom to reach 3.
        let g = Graph::from_edges(6, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (4, 6)]).unwrap();
        assert_eq!(maximum_matching(&g).len(), 3);
    }

    #[test]
    fn blossom_matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=9);
            let mut edges = Vec::new();
            for u in 1..=n as Vertex {
                for v in u + 1..=n as Vertex {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let m = maximum_matching(&g);
            assert!(Matching::new(&g, m.clone(), PairKind::Edges).is_ok());
            assert_eq!(m.len(), brute_max_matching(&g), "{g:?}");
        }
    }
}
