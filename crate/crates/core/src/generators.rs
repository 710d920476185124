//! Seeded graph families used as testbeds.
//!
//! None of these are objects of the theory; they exist so the algorithms
//! can be exercised on graphs with a known maximum degree. Every generator
//! is a pure function of its parameters and seed.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{k_delta, Graph, Vertex};
use crate::reducers::ReducerSpec;
use crate::rng::{self, Domain, Stream};

/// Growable simple graph with a degree cap.
struct Builder {
    adj: Vec<Vec<Vertex>>,
    cap: usize,
}

impl Builder {
    fn new(n: usize, cap: usize) -> Builder {
        Builder { adj: vec![Vec::new(); n + 1], cap }
    }

    fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    fn has(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].contains(&v)
    }

    /// Adds `{u, v}` unless it is a loop, a duplicate, or would break the cap.
    fn try_add(&mut self, u: Vertex, v: Vertex) -> bool {
        if u == v || self.has(u, v) || self.degree(u) >= self.cap || self.degree(v) >= self.cap {
            return false;
        }
        self.adj[u as usize].push(v);
        self.adj[v as usize].push(u);
        true
    }

    fn finish(self) -> Graph {
        let n = self.adj.len() - 1;
        let edges: Vec<(Vertex, Vertex)> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| (u as Vertex) < v).map(move |&v| (u as Vertex, v)))
            .collect();
        Graph::from_edges(n, edges).expect("builder keeps the graph simple")
    }
}

fn gen_stream(seed: u64, family: u64) -> Stream {
    rng::stream(seed, Domain::Generator, family, 0)
}

/// Union of up to `delta` random perfect matchings, skipping edges that
/// would repeat or exceed degree `delta`. Most vertices end with degree
/// `delta`; none exceeds it.
pub fn random_regularish(n: usize, delta: usize, seed: u64) -> Graph {
    let mut r = gen_stream(seed, 1);
    let mut b = Builder::new(n, delta);
    add_matchings(&mut b, &mut r, (1..=n as Vertex).collect(), delta);
    b.finish()
}

/// `rounds` random matchings among `pool`, each pairing consecutive
/// entries of a shuffle of the still-deficient vertices.
fn add_matchings(b: &mut Builder, r: &mut Stream, pool: Vec<Vertex>, rounds: usize) {
    for _ in 0..rounds {
        let mut open: Vec<Vertex> = pool.iter().copied().filter(|&v| b.degree(v) < b.cap).collect();
        open.shuffle(r);
        for pair in open.chunks_exact(2) {
            b.try_add(pair[0], pair[1]);
        }
    }
}

/// `count` disjoint cliques of `size` vertices.
pub fn clique_union(count: usize, size: usize) -> Graph {
    let mut edges = Vec::new();
    for c in 0..count {
        let base = (c * size) as Vertex;
        for u in 1..=size as Vertex {
            for v in u + 1..=size as Vertex {
                edges.push((base + u, base + v));
            }
        }
    }
    Graph::from_edges(count * size, edges).expect("simple")
}

/// Near-cliques on `Δ + 1` vertices (each edge dropped with probability
/// `drop_permille / 1000`) covering about half of the vertices, a
/// half-degree random graph on the rest, and random noise edges across the
/// whole graph. Maximum degree is at most `delta`.
pub fn clustered(n: usize, delta: usize, drop_permille: u32, seed: u64) -> Graph {
    let mut r = gen_stream(seed, 2);
    let mut b = Builder::new(n, delta);
    let size = delta + 1;
    let clusters = (n / 2) / size;
    for c in 0..clusters {
        let base = (c * size) as Vertex;
        for u in 1..=size as Vertex {
            for v in u + 1..=size as Vertex {
                if r.gen_range(0..1000) >= drop_permille {
                    b.try_add(base + u, base + v);
                }
            }
        }
    }
    let rest: Vec<Vertex> = ((clusters * size) as Vertex + 1..=n as Vertex).collect();
    add_matchings(&mut b, &mut r, rest, delta / 2);
    for _ in 0..n / 4 {
        let u = r.gen_range(1..=n as Vertex);
        let v = r.gen_range(1..=n as Vertex);
        b.try_add(u, v);
    }
    b.finish()
}

/// Bipartite (hence triangle-free) graph on two halves joined by
/// `⌊Δ/2⌋` random perfect matchings, plus `max(1, n/50)` hubs raised to
/// degree exactly `Δ`. `n` must be even and at least `2Δ`.
pub fn triangle_free_hubs(n: usize, delta: usize, seed: u64) -> Graph {
    assert!(n.is_multiple_of(2) && n >= 2 * delta, "need an even n ≥ 2Δ");
    let mut r = gen_stream(seed, 3);
    let half = n / 2;
    let mut b = Builder::new(n, delta);
    let left: Vec<Vertex> = (1..=half as Vertex).collect();
    let right: Vec<Vertex> = (half as Vertex + 1..=n as Vertex).collect();
    for _ in 0..delta / 2 {
        let mut perm = right.clone();
        perm.shuffle(&mut r);
        for (&u, &v) in left.iter().zip(&perm) {
            b.try_add(u, v);
        }
    }
    let hubs = (n / 50).max(1);
    let mut all: Vec<Vertex> = (1..=n as Vertex).collect();
    all.shuffle(&mut r);
    for &h in all.iter().take(hubs) {
        let other = if (h as usize) <= half { &right } else { &left };
        let mut candidates = other.clone();
        candidates.shuffle(&mut r);
        for &w in &candidates {
            if b.degree(h) == delta {
                break;
            }
            b.try_add(h, w);
        }
    }
    b.finish()
}

/// A host graph with planted deletable c-reducers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducerHost {
    pub graph: Graph,
    /// Vertices `1..=outer` lie outside every reducer.
    pub outer: usize,
    pub reducers: Vec<ReducerSpec>,
}

/// `count` c-reducers hanging off a random outer graph on `outer` vertices.
/// Each stable set has between 1 and `Δ − c + 2` vertices, and each of its
/// vertices up to `Δ − c + 1` outer neighbors (at least one for a lone
/// vertex), so the maximum degree stays at most `Δ`. Outer vertices have
/// degree below `c`, so any c-coloring of the outer part is reachable
/// greedily. With `c > Δ − k_Δ` the stable sets see at most
/// `(Δ − c + 2)(Δ − c + 1) < c` outer vertices, which makes every reducer
/// deletable.
pub fn reducer_host(outer: usize, delta: usize, c: usize, count: usize, seed: u64) -> ReducerHost {
    assert!(c >= 3 && c <= delta, "need 3 ≤ c ≤ Δ");
    assert!(c as u64 + k_delta(delta as u64) > delta as u64, "need c > Δ − k_Δ");
    assert!(outer > delta, "the outer graph needs more than Δ vertices");
    let mut r = gen_stream(seed, 4);
    let free = delta - c + 1;
    let sizes: Vec<usize> = (0..count).map(|_| r.gen_range(1..=free + 1)).collect();
    let n = outer + sizes.iter().map(|s| s + c - 1).sum::<usize>();
    let mut outer_b = Builder::new(outer, c - 1);
    let mut edges = Vec::new();
    let mut reducers = Vec::new();
    let mut next = outer as Vertex;
    for (i, &size) in sizes.iter().enumerate() {
        let stable: Vec<Vertex> = (1..=size as Vertex).map(|j| next + j).collect();
        let clique: Vec<Vertex> = (1..c as Vertex).map(|j| next + size as Vertex + j).collect();
        next += (size + c - 1) as Vertex;
        for (a, &u) in clique.iter().enumerate() {
            edges.extend(clique[a + 1..].iter().map(|&v| (u, v)));
            edges.extend(stable.iter().map(|&s| (s, u)));
        }
        for &s in &stable {
            let want = r.gen_range(usize::from(size == 1)..=free);
            let mut seen = Vec::new();
            for _ in 0..8 * (want + 1) {
                if seen.len() == want {
                    break;
                }
                let w = r.gen_range(1..=outer as Vertex);
                // An outer slot is spent on `s`, counted in the outer builder.
                if !seen.contains(&w) && outer_b.degree(w) < c - 1 {
                    outer_b.adj[w as usize].push(0);
                    seen.push(w);
                    edges.push((w, s));
                }
            }
        }
        reducers.push(ReducerSpec { clique: clique.into(), stable: stable.into(), component_id: i });
    }
    add_matchings(&mut outer_b, &mut r, (1..=outer as Vertex).collect(), c - 1);
    edges.extend(outer_b.adj.iter().enumerate().flat_map(|(u, l)| {
        l.iter().filter(move |&&v| v != 0 && (u as Vertex) < v).map(move |&v| (u as Vertex, v))
    }));
    let graph = Graph::from_edges(n, edges).expect("simple");
    ReducerHost { graph, outer, reducers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;

    fn triangle_free(g: &Graph) -> bool {
        g.edges().all(|(u, v)| !g.neighbors(u).iter().any(|&w| g.has_edge(w, v)))
    }

    #[test]
    fn regularish_respects_the_cap_and_is_deterministic() {
        let g = random_regularish(500, 10, 1);
        assert_eq!(g.delta(), 10);
        assert!(g.vertices().filter(|&v| g.degree(v) == 10).count() > 400);
        assert_eq!(g, random_regularish(500, 10, 1));
        assert_ne!(g, random_regularish(500, 10, 2));
    }

    #[test]
    fn clique_union_shape() {
        let g = clique_union(3, 5);
        assert_eq!((g.n(), g.m(), g.delta()), (15, 30, 4));
    }

    #[test]
    fn clustered_has_near_cliques() {
        let g = clustered(1000, 40, 20, 4);
        assert!(g.delta() <= 40);
        let first: VertexSet = (1..=41).collect();
        assert!(g.edges_within(&first) > 41 * 40 / 2 * 9 / 10);
    }

    #[test]
    fn reducer_hosts_are_deletable() {
        use crate::reducers::{is_deletable, ReducerSpec};
        for seed in 0..20 {
            let h = reducer_host(60, 12, 11, 5, seed);
            assert!(h.graph.delta() <= 12);
            assert!(h.graph.vertices().take(h.outer).all(|v| h.graph.degree(v) < 11));
            for r in &h.reducers {
                let r: &ReducerSpec = r;
                assert!(r.is_valid(&h.graph, 11));
                assert!(is_deletable(&h.graph, r, 11));
            }
        }
    }

    #[test]
    fn hubs_are_full_and_graph_is_triangle_free() {
        let g = triangle_free_hubs(500, 50, 9);
        assert_eq!(g.delta(), 50);
        assert!(g.vertices().filter(|&v| g.degree(v) == 50).count() >= 10);
        assert!(triangle_free(&g));
    }
}
