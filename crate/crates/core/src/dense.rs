//! Extending a coloring of the sparse part over the dense components.
//!
//! Each component `X_i` sets aside a few pairs of non-adjacent vertices that
//! will share a color. Vertices of `X_i` adjacent to both members of many
//! pairs then see many repeated colors, which pays for coloring them last
//! among the tight vertices. The five stages run over all components at
//! once, in a fixed order:
//!
//! 1. the pairs, colored in the graph where each pair is merged;
//! 2. `W⁻`, the few vertices with many outside neighbors;
//! 3. `W⁺`, which still see many uncolored vertices of `Z`;
//! 4. `Z`, the dominators, paid for by repeated pair colors;
//! 5. `W⁰`, whose degree is already low.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coloring::{first_conflict, Color, PartialColoring};
use crate::constants::{Breach, ConstantsProfile};
use crate::decomposition::DenseDecomposition;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::listcolor::{self, ListColorError};
use crate::matching::greedy_complement_matching;
use crate::rng;
use crate::sim::RoundStats;

/// How one component is split up for the five stages.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensePlan {
    /// `M_i`: disjoint non-adjacent pairs, smaller id first.
    pub pairs: Vec<(Vertex, Vertex)>,
    /// `U_i`: the component minus the pair endpoints.
    pub u: VertexSet,
    /// `Z_i`: lowest-id vertices of `U_i` dominating enough pairs.
    pub z: VertexSet,
    pub w0: VertexSet,
    pub w_plus: VertexSet,
    pub w_minus: VertexSet,
    /// How many vertices of `U_i` qualified as dominators.
    pub dominators: usize,
    pub breaches: Vec<Breach>,
}

impl DensePlan {
    pub fn pair_endpoints(&self) -> VertexSet {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DenseError {
    #[error("component {component}: complement matching has {available} pairs, {needed} needed")]
    InsufficientAntimatching { component: usize, available: usize, needed: usize },
    #[error("vertex {0} of a dense component is already colored")]
    AlreadyColored(Vertex),
    #[error("input coloring is improper at edge ({0}, {1})")]
    ImproperInput(Vertex, Vertex),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        source: ListColorError,
        /// Whether some precondition of the argument was already breached.
        breached: bool,
    },
}

/// `|M_i| = ⌈k/4⌉`; the ceiling keeps at least one pair for `k < 4`.
pub fn pair_count(k: u64) -> usize {
    k.div_ceil(4).max(1) as usize
}

/// A vertex dominates enough pairs when it is adjacent to both members of
/// at least `⌈|M_i|/6⌉` of them.
pub fn domination_threshold(pairs: usize) -> usize {
    pairs.div_ceil(6)
}

/// Splits component `x` (index `component`, for error reporting).
pub fn plan_dense_extension(g: &Graph, x: &VertexSet, k: u64) -> Result<DensePlan, DenseError> {
    plan_component(g, x, k, 0)
}

fn plan_component(g: &Graph, x: &VertexSet, k: u64, component: usize) -> Result<DensePlan, DenseError> {
    let delta = g.delta() as u64;
    let needed = pair_count(k);
    let full = greedy_complement_matching(g, x);
    if full.len() < needed {
        return Err(DenseError::InsufficientAntimatching { component, available: full.len(), needed });
    }
    let pairs: Vec<(Vertex, Vertex)> = full.pairs()[..needed].to_vec();
    let ends: VertexSet = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let u = x.difference(&ends);
    let mut breaches = Vec::new();
    let step = format!("dense-plan[{component}]");

    let threshold = domination_threshold(pairs.len());
    let dominating: Vec<Vertex> = u
        .iter()
        .filter(|&w| pairs.iter().filter(|&&(a, b)| g.has_edge(w, a) && g.has_edge(w, b)).count() >= threshold)
        .collect();
    let z_size = u.len().div_ceil(5);
    if dominating.len() < z_size {
        breaches.push(Breach::new(
            &step,
            format!("only {} dominators, fewer than ⌈|U|/5⌉ = {z_size}", dominating.len()),
        ));
    }
    let z: VertexSet = dominating.iter().copied().take(z_size).collect();

    let mut w0 = VertexSet::new();
    let mut w_plus = VertexSet::new();
    let mut w_minus = VertexSet::new();
    for v in u.difference(&z).iter() {
        if g.degree(v) as u64 + k <= delta {
            w0.insert(v);
        } else if 4 * g.neighbors(v).iter().filter(|&&w| z.contains(w)).count() >= z.len() {
            w_plus.insert(v);
        } else {
            w_minus.insert(v);
        }
    }
    if w_minus.len() as u64 > 6 * k {
        breaches.push(Breach::new(&step, format!("|W⁻| = {} exceeds 6k = {}", w_minus.len(), 6 * k)));
    }
    // Δ − k ≤ |U| ≤ Δ − k/4.
    let size = u.len() as u64;
    if size + k < delta || 4 * size + k > 4 * delta {
        breaches.push(Breach::new(&step, format!("|U| = {size} outside [Δ − k, Δ − k/4] for Δ = {delta}, k = {k}")));
    }
    Ok(DensePlan { pairs, u, z, w0, w_plus, w_minus, dominators: dominating.len(), breaches })
}

/// One extension stage.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StageReport {
    pub stage: String,
    pub colored: usize,
    /// Smallest residual slack seen, with its vertex.
    pub min_slack: Option<(Vertex, i64)>,
    /// Slack the correctness argument promises at proof scale.
    pub expected_slack: i64,
    pub rounds: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DenseReport {
    pub plans: Vec<DensePlan>,
    pub stages: Vec<StageReport>,
    pub breaches: Vec<Breach>,
    pub stats: RoundStats,
}

/// Extends a coloring that is total on `dec.sparse` to all of `g` with
/// palette `c`.
pub fn dense_extend(
    g: &Graph,
    dec: &DenseDecomposition,
    s_coloring: &PartialColoring,
    c: Color,
    k: u64,
    profile: &ConstantsProfile,
    seed: u64,
) -> Result<(PartialColoring, DenseReport), DenseError> {
    dense_extend_components(g, &dec.components, s_coloring, c, k, profile, seed)
}

/// The staged extension over an explicit list of components. Vertices
/// outside the components are left as they are, colored or not.
pub fn dense_extend_components(
    g: &Graph,
    components: &[VertexSet],
    coloring: &PartialColoring,
    c: Color,
    k: u64,
    profile: &ConstantsProfile,
    seed: u64,
) -> Result<(PartialColoring, DenseReport), DenseError> {
    if let Some((u, v)) = first_conflict(g, coloring) {
        return Err(DenseError::ImproperInput(u, v));
    }
    if let Some(v) = components.iter().flat_map(|x| x.iter()).find(|&v| coloring.is_colored(v)) {
        return Err(DenseError::AlreadyColored(v));
    }
    let mut report = DenseReport::default();
    let mut out = coloring.clone().with_palette(c.max(coloring.palette()));
    if components.is_empty() {
        return Ok((out, report));
    }
    let delta = g.delta() as i64;
    let (ci, ki) = (c as i64, k as i64);
    if c as u64 + profile.dense_c.floor_mul(k) < g.delta() as u64 {
        report.breaches.push(Breach::new("dense", format!("c = {c} is below Δ − ⌊k/48⌋")));
    }
    if (g.delta() as u64) < profile.dense_delta_over_k * k {
        report.breaches.push(Breach::new("dense", format!("Δ = {delta} is below {}k", profile.dense_delta_over_k)));
    }
    for (i, x) in components.iter().enumerate() {
        let plan = plan_component(g, x, k, i)?;
        report.breaches.extend(plan.breaches.iter().cloned());
        report.plans.push(plan);
    }
    let union = |f: fn(&DensePlan) -> &VertexSet| -> VertexSet {
        report.plans.iter().fold(VertexSet::new(), |acc, p| acc.union(f(p)))
    };
    let (w_minus, w_plus, z, w0) = (union(|p| &p.w_minus), union(|p| &p.w_plus), union(|p| &p.z), union(|p| &p.w0));
    let m = pair_count(k) as i64;
    let max_rounds = profile.max_list_rounds;

    // Stage 1: pairs, on the quotient graph.
    let pairs: Vec<(Vertex, Vertex)> = report.plans.iter().flat_map(|p| p.pairs.iter().copied()).collect();
    let q = Quotient::new(g, &pairs);
    let h_coloring = q.push(&out);
    let targets: VertexSet = pairs.iter().map(|&(a, _)| q.to_h[a as usize]).collect();
    let stage_seed = rng::child_seed(seed, 1);
    let colored = listcolor::extend_subset(&q.h, &h_coloring, &targets, c, 1, stage_seed, max_rounds);
    let breached = !report.breaches.is_empty();
    let (h_colored, ext) = colored.map_err(|source| DenseError::Stage { stage: "pairs", source, breached })?;
    for &(a, b) in &pairs {
        let col = h_colored.get(q.to_h[a as usize]).expect("stage colors every pair");
        out.set(a, col);
        out.set(b, col);
    }
    record(&mut report, "dense-pairs", ext, ci - delta / 2 - m);

    // Stages 2 to 5 on G itself. Stage 4 colors Z and stage 5 colors W⁰,
    // as the slack accounting of each stage requires.
    let stages: [(&'static str, &VertexSet, i64); 4] = [
        ("dense-w-minus", &w_minus, ci - (delta / 4 + 6 * ki + 2 * m)),
        ("dense-w-plus", &w_plus, ci - (23 * delta) / 24),
        ("dense-z", &z, ci + domination_threshold(m as usize) as i64 - delta),
        ("dense-w0", &w0, ci - (delta - ki)),
    ];
    for (n, (name, set, expected)) in stages.into_iter().enumerate() {
        let stage_seed = rng::child_seed(seed, n as u64 + 2);
        let breached = !report.breaches.is_empty();
        let (next, ext) = listcolor::extend_subset(g, &out, set, c, 1, stage_seed, max_rounds)
            .map_err(|source| DenseError::Stage { stage: name, source, breached })?;
        out = next;
        record(&mut report, name, ext, expected);
    }
    debug_assert!(components.iter().all(|x| x.iter().all(|v| out.is_colored(v))));
    debug_assert!(first_conflict(g, &out).is_none());
    Ok((out, report))
}

fn record(report: &mut DenseReport, name: &str, ext: listcolor::ExtendReport, expected: i64) {
    if let Some((v, s)) = ext.min_slack {
        if s < expected {
            report.breaches.push(Breach::new(name, format!("slack {s} at vertex {v} is below the expected {expected}")));
        }
    }
    report.stats.absorb(name, &ext.stats);
    report.stages.push(StageReport {
        stage: name.into(),
        colored: ext.colored,
        min_slack: ext.min_slack,
        expected_slack: expected,
        rounds: ext.stats.total(),
    });
}

/// `g` with the second member of every pair merged into the first.
struct Quotient {
    h: Graph,
    /// Quotient id per original vertex (index `v`).
    to_h: Vec<Vertex>,
    /// One original vertex per quotient id (index `h - 1`).
    rep: Vec<Vertex>,
}

impl Quotient {
    fn new(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Quotient {
        let mut partner = vec![0 as Vertex; g.n() + 1];
        for &(a, b) in pairs {
            partner[b as usize] = a;
        }
        let mut to_h = vec![0 as Vertex; g.n() + 1];
        let mut rep = Vec::with_capacity(g.n());
        for v in g.vertices() {
            if partner[v as usize] == 0 {
                rep.push(v);
                to_h[v as usize] = rep.len() as Vertex;
            }
        }
        for &(a, b) in pairs {
            to_h[b as usize] = to_h[a as usize];
        }
        let mut edges: Vec<(Vertex, Vertex)> = g
            .edges()
            .map(|(u, v)| {
                let (x, y) = (to_h[u as usize], to_h[v as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let h = Graph::from_edges(rep.len(), edges).expect("merged pairs are non-adjacent");
        Quotient { h, to_h, rep }
    }

    fn push(&self, coloring: &PartialColoring) -> PartialColoring {
        let colors = self.rep.iter().map(|&v| coloring.get(v)).collect();
        PartialColoring::from_colors(colors, coloring.palette())
    }
}
