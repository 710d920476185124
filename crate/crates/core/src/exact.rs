//! Exact c-colorability by DSATUR-ordered backtracking.
//!
//! The solver never answers wrongly: when its node budget runs out it says
//! so instead of guessing.

use alloc::vec;
use alloc::vec::Vec;

use crate::coloring::{Color, PartialColoring};
use crate::graph::{Graph, Vertex};

/// Default search-node budget for one colorability question.
pub const DEFAULT_EXACT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("exact coloring search exceeded its budget of {budget} nodes")]
pub struct SolverBudgetExceeded {
    pub budget: u64,
}

/// Outcome of one colorability question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    /// A proper coloring with at most `c` colors, if one exists.
    pub coloring: Option<PartialColoring>,
    /// Search nodes visited (the length of the refutation when `None`).
    pub nodes: u64,
}

/// Decides whether `g` has a proper coloring with `c` colors.
pub fn color_with(g: &Graph, c: usize, budget: u64) -> Result<Verdict, SolverBudgetExceeded> {
    let n = g.n();
    if n == 0 {
        return Ok(Verdict { coloring: Some(PartialColoring::new(0, c.max(1) as Color)), nodes: 0 });
    }
    if c == 0 {
        return Ok(Verdict { coloring: None, nodes: 0 });
    }
    let clique = greedy_clique(g);
    if clique.len() > c {
        return Ok(Verdict { coloring: None, nodes: 1 });
    }
    let mut s = Solver {
        g,
        c,
        colors: vec![0; n + 1],
        // forbidden[v][col] counts colored neighbors of v holding col.
        forbidden: vec![vec![0u32; c + 1]; n + 1],
        saturation: vec![0; n + 1],
        nodes: 0,
        budget,
        cliques: if c < 128 { clique_cover(g).into_iter().filter(|q| q.len() >= 3).collect() } else { Vec::new() },
    };
    // Pre-color a large clique with 1..: removes color symmetry at the root.
    for (i, &v) in clique.iter().enumerate() {
        s.assign(v, i + 1);
    }
    let used = clique.len();
    let found = s.search(n - clique.len(), used)?;
    let coloring = found.then(|| {
        PartialColoring::from_colors(
            s.colors[1..].iter().map(|&c| Some(c as Color)).collect(),
            c as Color,
        )
    });
    Ok(Verdict { coloring, nodes: s.nodes.max(1) })
}

pub fn is_colorable(g: &Graph, c: usize, budget: u64) -> Result<bool, SolverBudgetExceeded> {
    color_with(g, c, budget).map(|v| v.coloring.is_some())
}

/// Exact chromatic number, searching upward from a clique lower bound.
pub fn chromatic_number(g: &Graph, budget: u64) -> Result<usize, SolverBudgetExceeded> {
    if g.n() == 0 {
        return Ok(0);
    }
    let mut c = greedy_clique(g).len().max(1);
    loop {
        if is_colorable(g, c, budget)? {
            return Ok(c);
        }
        c += 1;
    }
}

fn greedy_clique(g: &Graph) -> Vec<Vertex> {
    let mut best = Vec::new();
    for q in clique_cover(g) {
        if q.len() > best.len() {
            best = q;
        }
    }
    best
}

/// One greedy clique per start vertex, adding first the neighbors that
/// share the most neighbors with it. Duplicates are dropped.
fn clique_cover(g: &Graph) -> Vec<Vec<Vertex>> {
    let mut out: Vec<Vec<Vertex>> = Vec::new();
    for start in g.vertices() {
        let mut clique = vec![start];
        let mut order: Vec<Vertex> = g.neighbors(start).to_vec();
        let common = |u: Vertex| g.neighbors(u).iter().filter(|&&w| g.has_edge(start, w)).count();
        order.sort_by_key(|&u| (core::cmp::Reverse(common(u)), core::cmp::Reverse(g.degree(u)), u));
        for u in order {
            if clique.iter().all(|&w| g.has_edge(u, w)) {
                clique.push(u);
            }
        }
        let mut key = clique.clone();
        key.sort_unstable();
        if !out.iter().any(|q| {
            let mut k = q.clone();
            k.sort_unstable();
            k == key
        }) {
            out.push(clique);
        }
    }
    out
}

/// Whether every domain can pick its own color, by augmenting paths.
fn has_system_of_distinct_colors(domains: &[u128], c: usize) -> bool {
    fn augment(i: usize, domains: &[u128], owner: &mut [usize], seen: &mut u128) -> bool {
        let mut free = domains[i] & !*seen;
        while free != 0 {
            let col = free.trailing_zeros() as usize;
            free &= free - 1;
            *seen |= 1 << col;
            if owner[col] == usize::MAX || augment(owner[col], domains, owner, seen) {
                owner[col] = i;
                return true;
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; c + 1];
    (0..domains.len()).all(|i| augment(i, domains, &mut owner, &mut 0))
}

struct Solver<'g> {
    g: &'g Graph,
    c: usize,
    colors: Vec<usize>,
    forbidden: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    nodes: u64,
    budget: u64,
    /// Cliques whose uncolored members must still find enough colors.
    cliques: Vec<Vec<Vertex>>,
}

impl Solver<'_> {
    fn assign(&mut self, v: Vertex, col: usize) {
        self.colors[v as usize] = col;
        for &w in self.g.neighbors(v) {
            let slot = &mut self.forbidden[w as usize][col];
            if *slot == 0 {
                self.saturation[w as usize] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: Vertex) {
        let col = core::mem::replace(&mut self.colors[v as usize], 0);
        for &w in self.g.neighbors(v) {
            let slot = &mut self.forbidden[w as usize][col];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w as usize] -= 1;
            }
        }
    }

    /// Uncolored vertex of maximum saturation, then maximum degree, then
    /// minimum id. Returns `None` when everything is colored.
    fn pick(&self) -> Option<Vertex> {
        self.g
            .vertices()
            .filter(|&v| self.colors[v as usize] == 0)
            .max_by_key(|&v| (self.saturation[v as usize], self.g.degree(v), core::cmp::Reverse(v)))
    }

    /// Some clique cannot give its uncolored members distinct colors: the
    /// members and their remaining colors have no perfect matching.
    fn clique_starved(&self) -> bool {
        let mut domains: Vec<u128> = Vec::new();
        self.cliques.iter().any(|q| {
            domains.clear();
            let mut union = 0u128;
            for &w in q {
                if self.colors[w as usize] == 0 {
                    let f = &self.forbidden[w as usize];
                    let d = (1..=self.c).filter(|&col| f[col] == 0).fold(0u128, |m, col| m | 1 << col);
                    union |= d;
                    domains.push(d);
                }
            }
            domains.len() > union.count_ones() as usize || !has_system_of_distinct_colors(&domains, self.c)
        })
    }

    fn search(&mut self, remaining: usize, used: usize) -> Result<bool, SolverBudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolverBudgetExceeded { budget: self.budget });
        }
        if remaining == 0 {
            return Ok(true);
        }
        let v = self.pick().expect("remaining > 0");
        if self.saturation[v as usize] >= self.c {
            return Ok(false);
        }
        // Colors beyond `used + 1` are interchangeable with `used + 1`.
        for col in 1..=(used + 1).min(self.c) {
            if self.forbidden[v as usize][col] != 0 {
                continue;
            }
            self.assign(v, col);
            let wiped = self.g.neighbors(v).iter().any(|&w| {
                self.colors[w as usize] == 0 && self.saturation[w as usize] >= self.c
            }) || self.clique_starved();
            if !wiped && self.search(remaining - 1, used.max(col))? {
                return Ok(true);
            }
            self.unassign(v);
        }
        Ok(false)
    }
}

/// Second, independent colorability check: plain backtracking in id order
/// with none of the main solver's pruning. Used to re-verify refutations.
pub fn brute_force_colorable(g: &Graph, c: usize, budget: u64) -> Result<bool, SolverBudgetExceeded> {
    struct Brute<'g> {
        g: &'g Graph,
        c: usize,
        colors: Vec<usize>,
        nodes: u64,
        budget: u64,
    }
    impl Brute<'_> {
        fn go(&mut self, v: usize) -> Result<bool, SolverBudgetExceeded> {
            if v > self.g.n() {
                return Ok(true);
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(SolverBudgetExceeded { budget: self.budget });
            }
            for col in 1..=self.c {
                let free =
                    self.g.neighbors(v as Vertex).iter().all(|&w| w as usize > v || self.colors[w as usize] != col);
                if free {
                    self.colors[v] = col;
                    if self.go(v + 1)? {
                        return Ok(true);
                    }
                }
            }
            self.colors[v] = 0;
            Ok(false)
        }
    }
    Brute { g, c, colors: vec![0; g.n() + 1], nodes: 0, budget }.go(1)
}
