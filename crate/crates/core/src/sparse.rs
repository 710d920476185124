//! Wasteful random coloring with Local Lemma repair.
//!
//! Every drawer picks a uniform color from `1..=C`; both endpoints of a
//! monochromatic edge give their color back. A target that ends uncolored
//! wants many colors repeated in its neighborhood, since each repeat is one
//! unit of slack for the later extension. Targets that miss the bar are bad
//! events of radius 2, and the LLL engine resamples the draws around them.
//!
//! Drawer `i` (in ascending id order) owns random stream index `i`, so the
//! wasteful round is exactly the first sample of the LLL instance.

use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::coloring::{Color, PartialColoring};
use crate::constants::ConstantsProfile;
use crate::frac::Frac;
use crate::graph::{non_adjacent_pairs_in_neighborhood, Graph, Vertex, VertexSet};
use crate::lll::{self, Event, LllError, LllInstance};
use crate::rng::{self, Domain};
use crate::sim::RoundStats;

pub use crate::listcolor::repeated_colors;

/// The draw of drawer number `rank`, resample `count`.
fn draw(seed: u64, rank: usize, count: u64, palette: Color) -> Color {
    rng::stream(seed, Domain::Variable, rank as u64, count).gen_range(1..=palette)
}

/// Keeps a drawn color iff no drawing neighbor drew the same one.
/// `draws` is indexed by vertex.
fn retain(g: &Graph, draws: &[Option<Color>], palette: Color) -> PartialColoring {
    let mut out = PartialColoring::new(g.n(), palette);
    for v in g.vertices() {
        if let Some(c) = draws[v as usize] {
            if g.neighbors(v).iter().all(|&w| draws[w as usize] != Some(c)) {
                out.set(v, c);
            }
        }
    }
    out
}

/// One wasteful round: each vertex of `targets` draws from `1..=palette`,
/// then uncolors itself if a neighbor in `targets` drew the same color.
pub fn wasteful_round(g: &Graph, targets: &VertexSet, palette: Color, seed: u64) -> PartialColoring {
    assert!(palette >= 1, "palette must be non-empty");
    let mut draws = vec![None; g.n() + 1];
    for (rank, v) in targets.iter().enumerate() {
        draws[v as usize] = Some(draw(seed, rank, 0, palette));
    }
    retain(g, &draws, palette)
}

/// Inputs of one sparse-coloring run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseJob {
    /// Vertices that draw a color.
    pub drawers: VertexSet,
    /// Vertices carrying a bad event.
    pub events: VertexSet,
    /// Size of the drawing palette, normally `⌊Δ/2⌋`.
    pub palette: Color,
    /// An uncolored event vertex needs more than `beta · ell` repeats.
    pub ell: u64,
    pub beta: Frac,
    pub max_phases: usize,
}

impl SparseJob {
    /// Repeats needed to avoid the bad event: the least integer `> β·ℓ`.
    pub fn required_repeats(&self) -> u64 {
        self.beta.floor_mul(self.ell) + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparseOutcome {
    pub coloring: PartialColoring,
    pub lll_phases: usize,
    pub resamples: u64,
    pub events: usize,
    /// Event vertices that ended uncolored (they all meet the bar).
    pub uncolored_events: usize,
    pub stats: RoundStats,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SparseError {
    #[error("vertex {vertex} has {pairs} non-adjacent neighbor pairs, fewer than ℓΔ = {required}")]
    TooFewPairs { vertex: Vertex, pairs: usize, required: u64 },
    #[error("LLL repair stopped after {phases} phases with {} bad vertices", violated.len())]
    PhaseLimit { phases: usize, coloring: PartialColoring, violated: VertexSet },
}

struct Ctx<'g> {
    g: &'g Graph,
    /// Variable index per vertex (index `v`), `None` for non-drawers.
    var_of: Vec<Option<usize>>,
}

impl Ctx<'_> {
    fn retained(&self, v: Vertex, values: &lll::Scoped<'_, Color>) -> Option<Color> {
        let c = *values.get(self.var_of[v as usize]?);
        let clash = self.g.neighbors(v).iter().any(|&w| self.var_of[w as usize].is_some_and(|j| *values.get(j) == c));
        (!clash).then_some(c)
    }
}

/// The bad events of a job, as an LLL instance over the drawers' colors.
fn instance<'g>(g: &'g Graph, job: &SparseJob) -> LllInstance<'g, Color> {
    let mut var_of = vec![None; g.n() + 1];
    for (i, v) in job.drawers.iter().enumerate() {
        var_of[v as usize] = Some(i);
    }
    let ctx = Rc::new(Ctx { g, var_of });
    let mut inst = LllInstance::new();
    let palette = job.palette;
    for _ in job.drawers.iter() {
        inst.add_variable(move |s| s.gen_range(1..=palette));
    }
    let need = job.required_repeats() as usize;
    for v in job.events.iter() {
        let scope = g.ball(v, 2).iter().filter_map(|u| ctx.var_of[u as usize]).collect::<Vec<_>>();
        let ctx = Rc::clone(&ctx);
        let event = Event::new(scope, move |vals| {
            if ctx.retained(v, vals).is_some() {
                return false;
            }
            let mut seen: Vec<Color> = ctx.g.neighbors(v).iter().filter_map(|&u| ctx.retained(u, vals)).collect();
            seen.sort_unstable();
            let repeats = seen.chunk_by(|a, b| a == b).filter(|run| run.len() >= 2).count();
            repeats < need
        });
        inst.add_event(event.anchored(v, 2));
    }
    inst
}

/// Wasteful round plus LLL repair for an explicit job.
pub fn sparse_color_job(g: &Graph, job: &SparseJob, seed: u64) -> Result<SparseOutcome, SparseError> {
    assert!(job.palette >= 1, "palette must be non-empty");
    let inst = instance(g, job);
    let to_coloring = |values: &[Color]| {
        let mut draws = vec![None; g.n() + 1];
        for (v, &c) in job.drawers.iter().zip(values) {
            draws[v as usize] = Some(c);
        }
        retain(g, &draws, job.palette)
    };
    let mut stats = RoundStats::default();
    // Draw, exchange draws, keep or drop.
    stats.add_phase("wasteful", 1);
    match lll::solve(&inst, seed, job.max_phases) {
        Ok(sol) => {
            stats.merge(&sol.stats);
            let coloring = to_coloring(&sol.assignment);
            let uncolored_events = job.events.iter().filter(|&v| !coloring.is_colored(v)).count();
            Ok(SparseOutcome {
                coloring,
                lll_phases: sol.phases,
                resamples: sol.resamples,
                events: job.events.len(),
                uncolored_events,
                stats,
            })
        }
        Err(LllError::PhaseLimit { phases, partial, violated }) => Err(SparseError::PhaseLimit {
            phases,
            coloring: to_coloring(&partial),
            violated: violated.iter().map(|&e| job.events.as_slice()[e]).collect(),
        }),
    }
}

/// Partial `⌊Δ/2⌋`-coloring in which every uncolored target has more than
/// `β·ell` repeated colors around it. Every target must have at least
/// `ell·Δ` non-adjacent pairs in its neighborhood.
pub fn sparse_color(
    g: &Graph,
    targets: &VertexSet,
    ell: u64,
    profile: &ConstantsProfile,
    seed: u64,
) -> Result<SparseOutcome, SparseError> {
    let delta = g.delta() as u64;
    for v in targets.iter() {
        let pairs = non_adjacent_pairs_in_neighborhood(g, v, None).expect("target in graph");
        if (pairs as u64) < ell * delta {
            return Err(SparseError::TooFewPairs { vertex: v, pairs, required: ell * delta });
        }
    }
    let job = SparseJob {
        drawers: targets.clone(),
        events: targets.clone(),
        palette: (delta / 2).max(1) as Color,
        ell,
        beta: profile.beta,
        max_phases: profile.max_lll_phases,
    };
    sparse_color_job(g, &job, seed)
}
