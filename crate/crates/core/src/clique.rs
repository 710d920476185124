//! Per-neighborhood exact clique search.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex, VertexSet};

/// Default branch-node budget per closed neighborhood.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("clique search around vertex {vertex} exceeded its budget of {budget} branch nodes")]
pub struct BudgetExceeded {
    pub vertex: Vertex,
    pub budget: u64,
}

/// Looks for a clique with more than `threshold` vertices.
///
/// Vertices are scanned in ascending order; around each `v` the search is
/// restricted to `v` and its higher-id neighbors, so a clique is found in
/// the neighborhood of its lowest member. The returned clique is extended
/// greedily to a maximal one inside `{v} ∪ N(v)`.
pub fn find_clique_above(
    g: &Graph,
    threshold: usize,
    budget: u64,
) -> Result<Option<(Vertex, VertexSet)>, BudgetExceeded> {
    let target = threshold + 1;
    for v in g.vertices() {
        if g.degree(v) + 1 < target {
            continue;
        }
        let candidates: Vec<Vertex> =
            g.neighbors(v).iter().copied().filter(|&u| u > v && g.degree(u) + 1 >= target).collect();
        if candidates.len() + 1 < target {
            continue;
        }
        let mut search = Search { g, target: target - 1, nodes: 0, budget, found: None };
        let mut current = Vec::new();
        search.expand(&mut current, candidates).map_err(|()| BudgetExceeded { vertex: v, budget })?;
        if let Some(mut clique) = search.found {
            clique.push(v);
            extend_to_maximal(g, v, &mut clique);
            return Ok(Some((v, clique.into_iter().collect())));
        }
    }
    Ok(None)
}

/// Whole-graph maximum clique by plain branch and bound.
pub fn maximum_clique(g: &Graph) -> VertexSet {
    let mut best: Vec<Vertex> = Vec::new();
    fn go(g: &Graph, current: &mut Vec<Vertex>, candidates: &[Vertex], best: &mut Vec<Vertex>) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        for (i, &v) in candidates.iter().enumerate() {
            if current.len() + candidates.len() - i <= best.len() {
                return;
            }
            let next: Vec<Vertex> = candidates[i + 1..].iter().copied().filter(|&w| g.has_edge(v, w)).collect();
            current.push(v);
            go(g, current, &next, best);
            current.pop();
        }
    }
    let all: Vec<Vertex> = g.vertices().collect();
    go(g, &mut Vec::new(), &all, &mut best);
    best.into_iter().collect()
}

pub fn is_clique(g: &Graph, set: &VertexSet) -> bool {
    let ids = set.as_slice();
    ids.iter().enumerate().all(|(i, &u)| ids[i + 1..].iter().all(|&w| g.has_edge(u, w)))
}

fn extend_to_maximal(g: &Graph, v: Vertex, clique: &mut Vec<Vertex>) {
    for &u in g.neighbors(v) {
        if !clique.contains(&u) && clique.iter().all(|&w| g.has_edge(u, w)) {
            clique.push(u);
        }
    }
}

struct Search<'g> {
    g: &'g Graph,
    target: usize,
    nodes: u64,
    budget: u64,
    found: Option<Vec<Vertex>>,
}

impl Search<'_> {
    /// Err(()) when the budget runs out.
    fn expand(&mut self, current: &mut Vec<Vertex>, candidates: Vec<Vertex>) -> Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        if current.len() >= self.target {
            self.found = Some(current.clone());
            return Ok(());
        }
        if current.len() + color_bound(self.g, &candidates) < self.target {
            return Ok(());
        }
        for (i, &u) in candidates.iter().enumerate() {
            if current.len() + candidates.len() - i < self.target {
                break;
            }
            let next: Vec<Vertex> = candidates[i + 1..].iter().copied().filter(|&w| self.g.has_edge(u, w)).collect();
            current.push(u);
            self.expand(current, next)?;
            current.pop();
            if self.found.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Greedy coloring of the candidate set; a clique uses at most one vertex
/// per color class.
fn color_bound(g: &Graph, candidates: &[Vertex]) -> usize {
    let mut classes: Vec<Vec<Vertex>> = Vec::new();
    for &u in candidates {
        match classes.iter_mut().find(|class| class.iter().all(|&w| !g.has_edge(u, w))) {
            Some(class) => class.push(u),
            None => classes.push(vec![u]),
        }
    }
    classes.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i + 1, (i + 1) % 5 + 1));
        let spokes = (0..5).map(|i| (i + 1, i + 6));
        let inner = (0..5).map(|i| (i + 6, (i + 2) % 5 + 6));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }

    #[test]
    fn examples() {
        let (v, c) = find_clique_above(&Graph::complete(5), 4, DEFAULT_CLIQUE_BUDGET).unwrap().unwrap();
        assert_eq!((v, c.len()), (1, 5));
        assert_eq!(find_clique_above(&Graph::cycle(6), 2, DEFAULT_CLIQUE_BUDGET), Ok(None));
        let p = petersen();
        assert_eq!(p.delta(), 3);
        assert_eq!(maximum_clique(&p).len(), 2);
        assert_eq!(find_clique_above(&p, 2, DEFAULT_CLIQUE_BUDGET), Ok(None));
    }

    #[test]
    fn budget_is_enforced() {
        let err = find_clique_above(&Graph::complete(6), 5, 2).unwrap_err();
        assert_eq!(err.vertex, 1);
    }
}
