//! Clique or `(Δ − εk)`-coloring, end to end.
//!
//! The run either exhibits a clique on more than `Δ − k` vertices, or it
//! colors `G` with `Δ − ⌊εk⌋` colors:
//!
//! * decompose `G` with density `k/16` into `S` and dense components;
//! * let `T` be the vertices of `S` with degree close to `Δ` inside `S`;
//! * color `G[S]` wastefully from `⌊Δ/2⌋` colors, repairing with the LLL so
//!   that uncolored vertices of `T` see many repeated colors;
//! * finish `S` by list coloring, then extend over the dense components.
//!
//! Every threshold comes from a [`ConstantsProfile`]. A run on small graphs
//! usually breaches some precondition of the correctness argument; each one
//! is recorded in the report rather than refused.

use alloc::format;
use alloc::vec::Vec;

use crate::clique::{find_clique_above, BudgetExceeded};
use crate::coloring::{first_conflict, Color, PartialColoring};
use crate::constants::{Breach, ConstantsProfile};
use crate::decomposition::{self, DecompositionError, DenseDecomposition};
use crate::dense::{self, DenseError, DenseReport};
use crate::graph::{non_adjacent_pairs_in_neighborhood, Graph, Vertex, VertexSet};
use crate::listcolor::{self, ListColorError};
use crate::rng;
use crate::sim::{RoundStats, TraceRecord};
use crate::sparse::{self, SparseError, SparseJob};

/// Sizes of the sets the sparse step works with.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparseSummary {
    pub s: usize,
    pub t: usize,
    pub drawers: usize,
    pub colored_by_lll: usize,
    pub uncolored_t: usize,
    pub ell: u64,
    pub required_repeats: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PipelineReport {
    pub delta: usize,
    pub k: u64,
    /// The palette `Δ − ⌊εk⌋`.
    pub palette: Color,
    pub colors_used: usize,
    pub max_color: Color,
    pub lll_phases: usize,
    pub components: usize,
    pub sparse: SparseSummary,
    pub dense: DenseReport,
    pub breaches: Vec<Breach>,
    pub stats: RoundStats,
}

// The coloring variant dominates in practice, so boxing would buy nothing.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem1Outcome {
    /// A clique on more than `Δ − k` vertices, found around `vertex`.
    Clique { vertex: Vertex, clique: VertexSet, stats: RoundStats },
    Coloring { coloring: PartialColoring, decomposition: DenseDecomposition, report: PipelineReport },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("k = {k} must satisfy 1 ≤ k < Δ = {delta}")]
    InvalidK { k: u64, delta: usize },
    #[error("clique check: {0}")]
    Clique(#[from] BudgetExceeded),
    #[error("decomposition: {0}")]
    Decomposition(#[from] DecompositionError),
    #[error("sparse coloring: {0}")]
    Sparse(#[from] SparseError),
    #[error("extending the coloring of S: {0}")]
    SparseExtension(#[from] ListColorError),
    #[error("extending over the dense components: {0}")]
    Dense(#[from] DenseError),
}

/// Runs the whole pipeline on `g` with parameter `k`.
pub fn theorem1_run(
    g: &Graph,
    k: u64,
    profile: &ConstantsProfile,
    seed: u64,
) -> Result<Theorem1Outcome, PipelineError> {
    theorem1_run_traced(g, k, profile, seed, None)
}

/// [`theorem1_run`], passing the per-(round, vertex) trace of the
/// decomposition program, the one node program run on all of `G`, to
/// `trace`.
pub fn theorem1_run_traced(
    g: &Graph,
    k: u64,
    profile: &ConstantsProfile,
    seed: u64,
    trace: Option<&mut dyn FnMut(TraceRecord)>,
) -> Result<Theorem1Outcome, PipelineError> {
    let delta = g.delta();
    if k == 0 || k >= delta as u64 {
        return Err(PipelineError::InvalidK { k, delta });
    }
    let mut stats = RoundStats::default();
    let mut breaches = Vec::new();

    // Each vertex learns the edges among its neighbors in one round.
    stats.add_phase("clique-check", 1);
    if let Some((vertex, clique)) = find_clique_above(g, delta - k as usize, profile.clique_budget)? {
        return Ok(Theorem1Outcome::Clique { vertex, clique, stats });
    }

    let log_delta = libm::log2(delta as f64);
    if (k as f64) < profile.k_min_log.to_f64() * log_delta {
        breaches.push(Breach::new("parameters", format!("k = {k} is below {} · log₂ Δ", profile.k_min_log)));
    }
    if k as u128 * profile.k_max.den() as u128 > profile.k_max.num() as u128 * delta as u128 {
        breaches.push(Breach::new("parameters", format!("k = {k} exceeds {} · Δ", profile.k_max)));
    }
    let palette = profile.palette(delta, k) as Color;
    let half = (delta / 2).max(1) as Color;
    assert!(half <= palette, "ε is too large: the palette Δ − ⌊εk⌋ must hold ⌊Δ/2⌋ colors");

    // Decomposition with d = k/16.
    let d = profile.density.times(k);
    if d.num() as u128 * profile.density_max.den() as u128 > profile.density_max.num() as u128 * d.den() as u128 * delta as u128 {
        breaches.push(Breach::new("decomposition", format!("d = {d} exceeds {} · Δ", profile.density_max)));
    }
    let (dec, dec_stats) = match trace {
        Some(t) => decomposition::build_decomposition_traced(g, d, t)?,
        None => decomposition::build_decomposition_unchecked(g, d)?,
    };
    stats.absorb("decomposition", &dec_stats);
    let verdict = decomposition::verify_decomposition(g, &dec);
    for (name, check) in verdict.checks() {
        if !check.pass {
            breaches.push(Breach::new("decomposition", format!("property {name} fails: {:?}", check.witness)));
        }
    }

    // T and the drawers, measured inside G[S] against the global Δ.
    let s = &dec.sparse;
    let t_min = (delta as u64).saturating_sub(profile.t_degree.floor_mul(k));
    let ell = profile.ell_value(k);
    if ell < profile.ell_min(delta) {
        breaches.push(Breach::new("sparse", format!("ℓ = {ell} is below {} · log₂ Δ", profile.ell_min_log)));
    }
    let sub = g.induced(s);
    let mut t = VertexSet::new();
    let mut drawers = VertexSet::new();
    let mut t_short = 0;
    for (i, v) in s.iter().enumerate() {
        let local = i as Vertex + 1;
        let pairs = non_adjacent_pairs_in_neighborhood(g, v, Some(s)).expect("vertex of g") as u64;
        let draws = pairs >= ell * delta as u64;
        if draws {
            drawers.insert(local);
        }
        if sub.graph.degree(local) as u64 >= t_min {
            t.insert(local);
            t_short += usize::from(!draws);
        }
    }
    if t_short > 0 {
        breaches.push(Breach::new("sparse", format!("{t_short} vertices of T have fewer than ℓΔ non-adjacent neighbor pairs")));
    }
    let job = SparseJob {
        events: t.intersection(&drawers),
        drawers,
        palette: half,
        ell,
        beta: profile.beta,
        max_phases: profile.max_lll_phases,
    };
    let out = sparse::sparse_color_job(&sub.graph, &job, rng::child_seed(seed, 1))?;
    stats.merge(&out.stats);
    let mut coloring = PartialColoring::new(g.n(), palette);
    for (local, c) in out.coloring.colored() {
        coloring.set(sub.original(local), c);
    }
    let summary = SparseSummary {
        s: s.len(),
        t: t.len(),
        drawers: job.drawers.len(),
        colored_by_lll: out.coloring.colored_count(),
        uncolored_t: t.iter().filter(|&v| !out.coloring.is_colored(v)).count(),
        ell,
        required_repeats: job.required_repeats(),
    };

    // Finish S with the full palette.
    let required = profile.extension_slack_value(k) as i64;
    let (coloring, ext) =
        listcolor::extend_subset(g, &coloring, s, palette, required, rng::child_seed(seed, 2), profile.max_list_rounds)?;
    stats.absorb("sparse-extension", &ext.stats);

    let (coloring, dense_report) = dense::dense_extend(g, &dec, &coloring, palette, k, profile, rng::child_seed(seed, 3))?;
    stats.merge(&dense_report.stats);
    breaches.extend(dense_report.breaches.iter().cloned());

    debug_assert!(coloring.is_total());
    debug_assert!(first_conflict(g, &coloring).is_none());
    let report = PipelineReport {
        delta,
        k,
        palette,
        colors_used: coloring.distinct_colors(),
        max_color: coloring.max_color().unwrap_or(0),
        lll_phases: out.lll_phases,
        components: dec.components.len(),
        sparse: summary,
        dense: dense_report,
        breaches,
        stats,
    };
    Ok(Theorem1Outcome::Coloring { coloring, decomposition: dec, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_proper;

    #[test]
    fn clique_certificate() {
        // K_8 plus isolated vertices and a pendant path to push Δ up.
        let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
        for u in 1..=8 {
            for v in u + 1..=8 {
                edges.push((u, v));
            }
        }
        edges.extend([(1, 9), (1, 10)]);
        let g = Graph::from_edges(12, edges).unwrap();
        assert_eq!(g.delta(), 9);
        match theorem1_run(&g, 3, &ConstantsProfile::desk(), 0).unwrap() {
            Theorem1Outcome::Clique { clique, .. } => assert_eq!(clique.len(), 8),
            other => panic!("expected a clique, got {other:?}"),
        }
    }

    #[test]
    fn invalid_k() {
        let g = Graph::cycle(5);
        assert!(matches!(theorem1_run(&g, 0, &ConstantsProfile::desk(), 0), Err(PipelineError::InvalidK { .. })));
        assert!(matches!(theorem1_run(&g, 2, &ConstantsProfile::desk(), 0), Err(PipelineError::InvalidK { .. })));
    }

    #[test]
    fn dense_components_get_colored() {
        // Two copies of K_42 minus a perfect matching (every degree 40),
        // each missing the edge {1, 3}, which is rerouted between the
        // copies; plus a disjoint 30-cycle. Cliques have 21 vertices.
        let (copies, size) = (2u32, 42u32);
        let mut edges = Vec::new();
        for c in 0..copies {
            let base = c * size;
            for u in 1..=size {
                for v in u + 1..=size {
                    let matched = v == u + 1 && u % 2 == 1;
                    if !matched && (u, v) != (1, 3) {
                        edges.push((base + u, base + v));
                    }
                }
            }
        }
        edges.extend([(1, size + 1), (3, size + 3)]);
        let ring = copies * size;
        edges.extend((1..=30).map(|i| (ring + i, ring + i % 30 + 1)));
        let g = Graph::from_edges((ring + 30) as usize, edges).unwrap();
        let k = 16;
        let profile = ConstantsProfile::desk();
        match theorem1_run(&g, k, &profile, 5).unwrap() {
            Theorem1Outcome::Coloring { coloring, decomposition, report } => {
                assert!(coloring.is_total());
                assert!(is_proper(&g, &coloring));
                assert!(coloring.max_color().unwrap() <= report.palette);
                assert_eq!(decomposition.components.len(), 2);
                assert_eq!(decomposition.sparse.len(), 30);
                assert_eq!(report.dense.stages.len(), 5);
            }
            other => panic!("expected a coloring, got {other:?}"),
        }
    }
}
