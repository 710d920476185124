//! Residual lists and randomized (deg+1)-list coloring.
//!
//! Extending a partial `c`-coloring is a list-coloring problem on the
//! uncolored vertices: each keeps the palette colors its colored neighbors
//! do not use. Every repeated color among those neighbors leaves one more
//! color free, which is where all slack in the pipeline comes from.

use alloc::vec;
use alloc::vec::Vec;

use crate::coloring::{first_conflict, Color, PartialColoring};
use crate::frac::Frac;
use crate::graph::{Graph, InducedSubgraph, Vertex, VertexSet};
use crate::rng::Stream;
use crate::sim::{self, NodeInfo, NodeProgram, RoundStats, SimError, Step};

/// Per-vertex color lists over the palette `1..=palette`. `lists[i]` is
/// the sorted list of local vertex `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    pub lists: Vec<Vec<Color>>,
    pub palette: Color,
}

impl ListAssignment {
    /// Panics if a list holds a color outside the palette.
    pub fn new(mut lists: Vec<Vec<Color>>, palette: Color) -> ListAssignment {
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
            assert!(l.iter().all(|c| (1..=palette).contains(c)), "list color outside 1..={palette}");
        }
        ListAssignment { lists, palette }
    }

    pub fn list(&self, v: Vertex) -> &[Color] {
        &self.lists[v as usize - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ListColorError {
    #[error("input coloring is improper at edge ({0}, {1})")]
    ImproperInput(Vertex, Vertex),
    #[error(
        "slack violation at vertex {vertex}: |L| = {list_size}, uncolored degree {d_u}, degree {d_g}, required slack {required}"
    )]
    SlackViolation { vertex: Vertex, list_size: usize, d_u: usize, d_g: usize, required: i64 },
    #[error("list coloring did not finish in {max_rounds} rounds; {} vertices left", stuck.len())]
    RoundLimit { max_rounds: usize, stuck: VertexSet },
}

/// The list-coloring problem left by a partial coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    /// Subgraph induced by the vertices still to color.
    pub sub: InducedSubgraph,
    /// Lists indexed by local ids of `sub`.
    pub lists: ListAssignment,
    /// `|L(u)| − d_U(u)` per local vertex.
    pub slack: Vec<i64>,
}

impl Residual {
    pub fn min_slack(&self) -> Option<(Vertex, i64)> {
        (0..self.slack.len()).map(|i| (self.sub.ids[i], self.slack[i])).min_by_key(|&(v, s)| (s, v))
    }
}

/// Number of colors that appear on at least two neighbors of `v`.
pub fn repeated_colors(g: &Graph, v: Vertex, coloring: &PartialColoring) -> usize {
    let mut seen: Vec<Color> = g.neighbors(v).iter().filter_map(|&w| coloring.get(w)).collect();
    seen.sort_unstable();
    let mut repeats = 0;
    let mut i = 0;
    while i < seen.len() {
        let mut j = i;
        while j < seen.len() && seen[j] == seen[i] {
            j += 1;
        }
        if j - i >= 2 {
            repeats += 1;
        }
        i = j;
    }
    repeats
}

/// Residual lists for all uncolored vertices.
pub fn residual_lists(g: &Graph, colored: &PartialColoring, palette: Color) -> Result<Residual, ListColorError> {
    let targets: VertexSet = colored.uncolored().collect();
    residual_on(g, colored, palette, &targets)
}

/// Residual lists for the uncolored vertices of `targets`; other uncolored
/// vertices are ignored (they are colored later and do not constrain this
/// step).
pub fn residual_on(
    g: &Graph,
    colored: &PartialColoring,
    palette: Color,
    targets: &VertexSet,
) -> Result<Residual, ListColorError> {
    if let Some((u, v)) = first_conflict(g, colored) {
        return Err(ListColorError::ImproperInput(u, v));
    }
    let todo: VertexSet = targets.iter().filter(|&v| !colored.is_colored(v)).collect();
    let sub = g.induced(&todo);
    let covers_all = todo.len() == colored.uncolored().count();
    let mut used = vec![false; palette as usize + 1];
    let mut lists = Vec::with_capacity(todo.len());
    let mut slack = Vec::with_capacity(todo.len());
    for (i, v) in todo.iter().enumerate() {
        used.iter_mut().for_each(|u| *u = false);
        for &w in g.neighbors(v) {
            if let Some(c) = colored.get(w) {
                if c <= palette {
                    used[c as usize] = true;
                }
            }
        }
        let list: Vec<Color> = (1..=palette).filter(|&c| !used[c as usize]).collect();
        let s = list.len() as i64 - sub.graph.degree(i as Vertex + 1) as i64;
        if covers_all {
            // Observation: slack ≥ c + ℓ − d_G with ℓ repeated colors.
            debug_assert!(
                s >= palette as i64 + repeated_colors(g, v, colored) as i64 - g.degree(v) as i64,
                "slack bound fails at {v}"
            );
        }
        lists.push(list);
        slack.push(s);
    }
    Ok(Residual { sub, lists: ListAssignment { lists, palette }, slack })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialState {
    list: Vec<Color>,
    live: Vec<Vertex>,
    proposal: Option<Color>,
    color: Option<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrialMsg {
    Proposal(Color),
    Committed(Color),
}

/// Randomized color trials, one round per trial.
///
/// In each round a node first drops the colors its neighbors committed to;
/// then, if it proposed a color in the previous round, it keeps it unless a
/// neighbor proposed or committed the same color; otherwise it proposes a
/// uniform color from its list with probability `activity`.
pub struct ColorTrial<'a> {
    pub lists: &'a ListAssignment,
    pub activity: Frac,
}

impl NodeProgram for ColorTrial<'_> {
    type State = TrialState;
    type Msg = TrialMsg;
    type Output = Option<Color>;

    fn name(&self) -> &'static str {
        "list-coloring"
    }

    fn init(&self, node: &NodeInfo<'_>) -> TrialState {
        TrialState { list: self.lists.list(node.id).to_vec(), live: node.neighbors.to_vec(), proposal: None, color: None }
    }

    fn step(
        &self,
        _node: &NodeInfo<'_>,
        st: &mut TrialState,
        _round: usize,
        inbox: &[(Vertex, TrialMsg)],
        rng: &mut Stream,
    ) -> Step<TrialMsg> {
        use rand::Rng;
        let mut taken: Vec<Color> = Vec::new();
        for (from, m) in inbox {
            match *m {
                TrialMsg::Committed(c) => {
                    st.list.retain(|&x| x != c);
                    st.live.retain(|w| w != from);
                    taken.push(c);
                }
                TrialMsg::Proposal(c) => taken.push(c),
            }
        }
        debug_assert!(st.list.len() > st.live.len(), "list shorter than live degree + 1");
        if let Some(p) = st.proposal.take() {
            if !taken.contains(&p) {
                st.color = Some(p);
                return Step::halt(st.live.iter().map(|&w| (w, TrialMsg::Committed(p))).collect());
            }
        }
        if rng.gen_ratio(self.activity.num() as u32, self.activity.den() as u32) {
            let p = st.list[rng.gen_range(0..st.list.len())];
            st.proposal = Some(p);
            return Step::send(st.live.iter().map(|&w| (w, TrialMsg::Proposal(p))).collect());
        }
        Step::idle()
    }

    fn output(&self, _node: &NodeInfo<'_>, st: &TrialState) -> Option<Color> {
        st.color
    }
}

/// Colors every vertex of `g` from its list; needs `|L(v)| ≥ deg(v) + 1`.
pub fn solve_deg_plus(
    g: &Graph,
    lists: &ListAssignment,
    seed: u64,
    max_rounds: usize,
) -> Result<(PartialColoring, RoundStats), ListColorError> {
    solve_deg_plus_with(g, lists, Frac::new(1, 2), seed, max_rounds)
}

/// [`solve_deg_plus`] with an explicit proposal probability.
pub fn solve_deg_plus_with(
    g: &Graph,
    lists: &ListAssignment,
    activity: Frac,
    seed: u64,
    max_rounds: usize,
) -> Result<(PartialColoring, RoundStats), ListColorError> {
    assert!(activity.num() > 0 && activity.num() <= activity.den(), "activity must lie in (0, 1]");
    for v in g.vertices() {
        let size = lists.list(v).len();
        if size < g.degree(v) + 1 {
            return Err(ListColorError::SlackViolation {
                vertex: v,
                list_size: size,
                d_u: g.degree(v),
                d_g: g.degree(v),
                required: 1,
            });
        }
    }
    let out = sim::run(g, &ColorTrial { lists, activity }, max_rounds, seed).map_err(|e| match e {
        SimError::RoundLimit { max_rounds, unhalted } => ListColorError::RoundLimit { max_rounds, stuck: unhalted },
        SimError::NonNeighbor { .. } => unreachable!("color trials only address neighbors"),
    })?;
    let colors = out.outputs.into_iter().map(|c| Some(c.expect("halted nodes are colored"))).collect();
    Ok((PartialColoring::from_colors(colors, lists.palette), out.stats))
}

/// Summary of one extension step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtendReport {
    pub colored: usize,
    /// Smallest residual slack and where it occurred.
    pub min_slack: Option<(Vertex, i64)>,
    pub stats: RoundStats,
}

/// Extends `colored` to a total proper coloring with palette `palette`.
pub fn extend(
    g: &Graph,
    colored: &PartialColoring,
    palette: Color,
    required_slack: i64,
    seed: u64,
    max_rounds: usize,
) -> Result<(PartialColoring, ExtendReport), ListColorError> {
    let all: VertexSet = g.vertices().collect();
    extend_subset(g, colored, &all, palette, required_slack, seed, max_rounds)
}

/// Colors the uncolored vertices of `subset` only.
pub fn extend_subset(
    g: &Graph,
    colored: &PartialColoring,
    subset: &VertexSet,
    palette: Color,
    required_slack: i64,
    seed: u64,
    max_rounds: usize,
) -> Result<(PartialColoring, ExtendReport), ListColorError> {
    let required_slack = required_slack.max(1);
    let res = residual_on(g, colored, palette, subset)?;
    let mut out = colored.clone().with_palette(palette.max(colored.palette()));
    if res.sub.ids.is_empty() {
        return Ok((out, ExtendReport::default()));
    }
    let min_slack = res.min_slack();
    for (i, &s) in res.slack.iter().enumerate() {
        if s < required_slack {
            let v = res.sub.ids[i];
            return Err(ListColorError::SlackViolation {
                vertex: v,
                list_size: res.lists.lists[i].len(),
                d_u: res.sub.graph.degree(i as Vertex + 1),
                d_g: g.degree(v),
                required: required_slack,
            });
        }
    }
    let (local, stats) = solve_deg_plus(&res.sub.graph, &res.lists, seed, max_rounds)?;
    for (i, &v) in res.sub.ids.iter().enumerate() {
        out.set(v, local.get(i as Vertex + 1).expect("total"));
    }
    Ok((out, ExtendReport { colored: res.sub.ids.len(), min_slack, stats }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_proper;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (2..=leaves as Vertex + 1).map(|l| (1, l))).unwrap()
    }

    #[test]
    fn residual_examples() {
        let k4 = Graph::complete(4);
        let r = residual_lists(&k4, &PartialColoring::new(4, 4), 4).unwrap();
        assert!(r.slack.iter().all(|&s| s == 1));
        assert_eq!(r.lists.lists[0], [1, 2, 3, 4]);

        let s3 = star(3);
        let c = PartialColoring::from_colors(vec![None, Some(1), Some(1), Some(1)], 3);
        let r = residual_lists(&s3, &c, 3).unwrap();
        assert_eq!((r.lists.lists[0].clone(), r.slack[0]), (vec![2, 3], 2));
        assert_eq!(repeated_colors(&s3, 1, &c), 1);

        let k3 = Graph::complete(3);
        let c = PartialColoring::from_colors(vec![Some(1), None, None], 3);
        let r = residual_lists(&k3, &c, 3).unwrap();
        assert_eq!(r.lists.lists, [vec![2, 3], vec![2, 3]]);
        assert_eq!(r.slack, [1, 1]);

        let bad = PartialColoring::from_colors(vec![Some(1), Some(1), None], 3);
        assert_eq!(residual_lists(&k3, &bad, 3), Err(ListColorError::ImproperInput(1, 2)));
    }

    #[test]
    fn repeated_color_examples() {
        let s4 = star(4);
        let c = PartialColoring::from_colors(vec![None, Some(1), Some(1), Some(2), Some(2)], 2);
        assert_eq!(repeated_colors(&s4, 1, &c), 2);
        let distinct = PartialColoring::from_colors(vec![None, Some(1), Some(2), Some(3), Some(4)], 4);
        assert_eq!(repeated_colors(&s4, 1, &distinct), 0);
        let c5 = Graph::cycle(5);
        let c = PartialColoring::from_colors(vec![None, Some(3), None, None, Some(3)], 3);
        assert_eq!(repeated_colors(&c5, 1, &c), 1);
    }

    #[test]
    fn solve_examples() {
        let single = Graph::empty(1);
        let (c, _) = solve_deg_plus(&single, &ListAssignment::new(vec![vec![7]], 7), 1, 100).unwrap();
        assert_eq!(c.get(1), Some(7));

        let k4 = Graph::complete(4);
        let lists = ListAssignment::new(vec![vec![1, 2, 3, 4]; 4], 4);
        let (c, _) = solve_deg_plus(&k4, &lists, 5, 200).unwrap();
        assert!(is_proper(&k4, &c) && c.distinct_colors() == 4);

        let c5 = Graph::cycle(5);
        let lists = ListAssignment::new(vec![vec![1, 2, 3]; 5], 3);
        let mut total = 0;
        for seed in 0..200 {
            let (c, stats) = solve_deg_plus(&c5, &lists, seed, 500).unwrap();
            assert!(is_proper(&c5, &c) && c.is_total());
            total += stats.total();
        }
        assert!(total as f64 / 200.0 <= 10.0);
    }

    #[test]
    fn short_lists_are_rejected() {
        let k3 = Graph::complete(3);
        let lists = ListAssignment::new(vec![vec![1, 2]; 3], 2);
        assert!(matches!(solve_deg_plus(&k3, &lists, 0, 10), Err(ListColorError::SlackViolation { vertex: 1, .. })));
    }

    #[test]
    fn extend_examples() {
        let p3 = Graph::path(3);
        let full = PartialColoring::from_colors(vec![Some(1), Some(2), Some(1)], 2);
        assert_eq!(extend(&p3, &full, 2, 1, 0, 10).unwrap().0, full);

        let mid = PartialColoring::from_colors(vec![None, Some(1), None], 2);
        let (c, _) = extend(&p3, &mid, 2, 1, 3, 50).unwrap();
        assert_eq!(c.as_slice(), [Some(2), Some(1), Some(2)]);

        let k3 = Graph::complete(3);
        let err = extend(&k3, &PartialColoring::new(3, 2), 2, 1, 0, 10).unwrap_err();
        assert!(matches!(err, ListColorError::SlackViolation { vertex: 1, list_size: 2, d_u: 2, d_g: 2, .. }));
    }

    #[test]
    fn extend_subset_leaves_others_alone() {
        let p4 = Graph::path(4);
        let (c, rep) = extend_subset(&p4, &PartialColoring::new(4, 2), &VertexSet::from([1, 2]), 2, 1, 7, 50).unwrap();
        assert!(c.is_colored(1) && c.is_colored(2) && !c.is_colored(3) && !c.is_colored(4));
        assert_eq!(rep.colored, 2);
    }
}
