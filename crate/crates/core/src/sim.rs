//! A deterministic simulator of the synchronous LOCAL model.
//!
//! In round `t` every node that has not halted runs [`NodeProgram::step`]
//! on the messages its neighbors sent in round `t - 1`. Messages sent in a
//! node's halting step are still delivered; afterwards the node is silent.
//! A run that ends with every node halted at round `r` used `r` rounds of
//! communication.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use crate::graph::{Graph, GraphError, InducedSubgraph, Vertex, VertexSet};
use crate::rng::{self, Domain, Stream};

/// What a node knows about itself when it starts.
#[derive(Clone, Copy, Debug)]
pub struct NodeInfo<'g> {
    pub id: Vertex,
    pub neighbors: &'g [Vertex],
    pub n: usize,
    pub delta: usize,
}

impl NodeInfo<'_> {
    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }
}

/// Result of one step: messages to send and whether the node stops.
#[derive(Clone, Debug, PartialEq)]
pub struct Step<M> {
    pub outbox: Vec<(Vertex, M)>,
    pub halted: bool,
}

impl<M> Step<M> {
    pub fn send(outbox: Vec<(Vertex, M)>) -> Self {
        Step { outbox, halted: false }
    }

    pub fn halt(outbox: Vec<(Vertex, M)>) -> Self {
        Step { outbox, halted: true }
    }

    pub fn idle() -> Self {
        Step { outbox: Vec::new(), halted: false }
    }
}

/// A distributed algorithm in the LOCAL model.
///
/// `step` may read only its arguments; `rng` is the node's private stream
/// for this round.
pub trait NodeProgram {
    type State: Clone + PartialEq + Debug;
    type Msg: Clone + PartialEq + Debug;
    type Output;

    /// Phase name used in [`RoundStats`].
    fn name(&self) -> &'static str {
        "run"
    }

    fn init(&self, node: &NodeInfo<'_>) -> Self::State;

    fn step(
        &self,
        node: &NodeInfo<'_>,
        state: &mut Self::State,
        round: usize,
        inbox: &[(Vertex, Self::Msg)],
        rng: &mut Stream,
    ) -> Step<Self::Msg>;

    fn output(&self, node: &NodeInfo<'_>, state: &Self::State) -> Self::Output;
}

/// Round accounting. `phases` lists named phases in the order they first
/// ran; adding to an existing name accumulates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoundStats {
    pub phases: Vec<(String, usize)>,
    pub messages: u64,
    /// Halting round per vertex (index `v - 1`) of a single simulator run.
    /// Empty for stats assembled from several runs.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub halted_round: Vec<usize>,
}

impl RoundStats {
    pub fn total(&self) -> usize {
        self.phases.iter().map(|(_, r)| r).sum()
    }

    pub fn rounds(&self, phase: &str) -> usize {
        self.phases.iter().find(|(p, _)| p == phase).map_or(0, |(_, r)| *r)
    }

    pub fn add_phase(&mut self, name: &str, rounds: usize) {
        match self.phases.iter_mut().find(|(p, _)| p == name) {
            Some((_, r)) => *r += rounds,
            None => self.phases.push((name.to_string(), rounds)),
        }
    }

    /// Folds `other` in as a single phase called `name`.
    pub fn absorb(&mut self, name: &str, other: &RoundStats) {
        self.add_phase(name, other.total());
        self.messages += other.messages;
    }

    /// Folds `other` in keeping its phase names.
    pub fn merge(&mut self, other: &RoundStats) {
        for (p, r) in &other.phases {
            self.add_phase(p, *r);
        }
        self.messages += other.messages;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("{} vertices still running after {max_rounds} rounds", unhalted.len())]
    RoundLimit { max_rounds: usize, unhalted: VertexSet },
    #[error("vertex {from} addressed non-neighbor {to} in round {round}")]
    NonNeighbor { from: Vertex, to: Vertex, round: usize },
}

/// One line of an execution trace.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceRecord {
    pub round: usize,
    pub vertex: Vertex,
    pub received: usize,
    pub sent: usize,
    pub halted: bool,
}

pub struct RunOutput<O> {
    /// Output of vertex `v` at index `v - 1`.
    pub outputs: Vec<O>,
    pub stats: RoundStats,
}

/// Runs `prog` on `g` until every node halts.
pub fn run<P: NodeProgram>(g: &Graph, prog: &P, max_rounds: usize, seed: u64) -> Result<RunOutput<P::Output>, SimError> {
    run_traced(g, prog, max_rounds, seed, None)
}

/// [`run`] with an optional per-(round, vertex) trace sink.
pub fn run_traced<P: NodeProgram>(
    g: &Graph,
    prog: &P,
    max_rounds: usize,
    seed: u64,
    mut trace: Option<&mut dyn FnMut(TraceRecord)>,
) -> Result<RunOutput<P::Output>, SimError> {
    let n = g.n();
    let infos: Vec<NodeInfo<'_>> = g
        .vertices()
        .map(|v| NodeInfo { id: v, neighbors: g.neighbors(v), n, delta: g.delta() })
        .collect();
    let mut states: Vec<P::State> = infos.iter().map(|i| prog.init(i)).collect();
    let mut halted_round: Vec<Option<usize>> = vec![None; n];
    let mut inboxes: Vec<Vec<(Vertex, P::Msg)>> = vec![Vec::new(); n];
    let mut messages = 0u64;
    let mut round = 0;
    while halted_round.iter().any(Option::is_none) {
        if round > max_rounds {
            let unhalted = (0..n).filter(|&i| halted_round[i].is_none()).map(|i| i as Vertex + 1).collect();
            return Err(SimError::RoundLimit { max_rounds, unhalted });
        }
        let mut steps: Vec<Option<Step<P::Msg>>> = vec![None; n];
        let snapshot = (cfg!(debug_assertions) && round % 8 == 0).then(|| states.clone());
        for i in 0..n {
            if halted_round[i].is_some() {
                continue;
            }
            let mut rng = rng::stream(seed, Domain::Node, i as u64 + 1, round as u64);
            steps[i] = Some(prog.step(&infos[i], &mut states[i], round, &inboxes[i], &mut rng));
        }
        if let Some(snapshot) = snapshot {
            check_order_independence(prog, &infos, snapshot, &states, &inboxes, &steps, round, seed);
        }
        let mut next: Vec<Vec<(Vertex, P::Msg)>> = vec![Vec::new(); n];
        for i in 0..n {
            let Some(step) = steps[i].take() else { continue };
            let v = i as Vertex + 1;
            if let Some(t) = trace.as_deref_mut() {
                t(TraceRecord { round, vertex: v, received: inboxes[i].len(), sent: step.outbox.len(), halted: step.halted });
            }
            for (to, msg) in step.outbox {
                if !g.has_edge(v, to) {
                    return Err(SimError::NonNeighbor { from: v, to, round });
                }
                messages += 1;
                if halted_round[to as usize - 1].is_none() {
                    next[to as usize - 1].push((v, msg));
                }
            }
            if step.halted {
                halted_round[i] = Some(round);
            }
        }
        // Messages to nodes that halted this very round are dropped too.
        for (i, inbox) in next.iter_mut().enumerate() {
            if halted_round[i].is_some() {
                inbox.clear();
            }
            inbox.sort_by_key(|(from, _)| *from);
        }
        inboxes = next;
        round += 1;
    }
    let halted_round: Vec<usize> = halted_round.into_iter().map(|r| r.unwrap_or(0)).collect();
    let rounds = halted_round.iter().copied().max().unwrap_or(0);
    let outputs = infos.iter().zip(&states).map(|(i, s)| prog.output(i, s)).collect();
    let mut stats = RoundStats { phases: Vec::new(), messages, halted_round };
    stats.add_phase(prog.name(), rounds);
    Ok(RunOutput { outputs, stats })
}

/// Replays one round in descending id order from a snapshot and checks
/// that every node ends in the same state with the same outbox.
#[allow(clippy::too_many_arguments)]
fn check_order_independence<P: NodeProgram>(
    prog: &P,
    infos: &[NodeInfo<'_>],
    mut snapshot: Vec<P::State>,
    after: &[P::State],
    inboxes: &[Vec<(Vertex, P::Msg)>],
    steps: &[Option<Step<P::Msg>>],
    round: usize,
    seed: u64,
) {
    for i in (0..infos.len()).rev() {
        let Some(expected) = &steps[i] else { continue };
        let mut rng = rng::stream(seed, Domain::Node, i as u64 + 1, round as u64);
        let got = prog.step(&infos[i], &mut snapshot[i], round, &inboxes[i], &mut rng);
        assert!(got == *expected && snapshot[i] == after[i], "node {} is order-dependent in round {round}", i + 1);
    }
}

/// The subgraph induced by the ball of radius `radius` around `v`, with
/// original ids. This is exactly what `v` can know after `radius` rounds.
pub fn gather_ball(g: &Graph, v: Vertex, radius: usize) -> Result<InducedSubgraph, GraphError> {
    g.check(v)?;
    Ok(g.induced(&g.ball(v, radius)))
}

/// Node program that floods adjacency lists for `radius` rounds; each node
/// outputs its gathered ball.
pub struct BallGather {
    pub radius: usize,
}

impl NodeProgram for BallGather {
    /// Known (vertex, adjacency list) pairs, sorted by vertex.
    type State = Vec<(Vertex, Vec<Vertex>)>;
    type Msg = Vec<(Vertex, Vec<Vertex>)>;
    type Output = InducedSubgraph;

    fn name(&self) -> &'static str {
        "gather"
    }

    fn init(&self, node: &NodeInfo<'_>) -> Self::State {
        vec![(node.id, node.neighbors.to_vec())]
    }

    fn step(
        &self,
        node: &NodeInfo<'_>,
        state: &mut Self::State,
        round: usize,
        inbox: &[(Vertex, Self::Msg)],
        _rng: &mut Stream,
    ) -> Step<Self::Msg> {
        for (_, known) in inbox {
            for entry in known {
                if let Err(pos) = state.binary_search_by_key(&entry.0, |e| e.0) {
                    state.insert(pos, entry.clone());
                }
            }
        }
        if round == self.radius {
            return Step::halt(Vec::new());
        }
        Step::send(node.neighbors.iter().map(|&w| (w, state.clone())).collect())
    }

    fn output(&self, node: &NodeInfo<'_>, state: &Self::State) -> InducedSubgraph {
        // Known lists cover the ball; keep edges whose both ends are within
        // `radius` of this node.
        let ids: Vec<Vertex> = state.iter().map(|e| e.0).collect();
        let local = |x: Vertex| ids.binary_search(&x).ok().map(|i| i as Vertex + 1);
        let mut dist = vec![usize::MAX; ids.len()];
        let me = local(node.id).unwrap() as usize - 1;
        dist[me] = 0;
        let mut queue = alloc::collections::VecDeque::from([me]);
        while let Some(i) = queue.pop_front() {
            for &w in &state[i].1 {
                if let Some(j) = local(w) {
                    let j = j as usize - 1;
                    if dist[j] == usize::MAX {
                        dist[j] = dist[i] + 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        let keep: Vec<Vertex> = (0..ids.len()).filter(|&i| dist[i] <= self.radius).map(|i| ids[i]).collect();
        let local_keep = |x: Vertex| keep.binary_search(&x).ok().map(|i| i as Vertex + 1);
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            let entry = &state[ids.binary_search(&v).unwrap()];
            for &w in &entry.1 {
                if let Some(j) = local_keep(w) {
                    if j as usize > i + 1 {
                        edges.push((i as Vertex + 1, j));
                    }
                }
            }
        }
        InducedSubgraph { graph: Graph::from_edges(keep.len(), edges).expect("simple"), ids: keep }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Inactive,
    Undecided,
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LubyState {
    status: Status,
    live: Vec<Vertex>,
    value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LubyMsg {
    Hello,
    Value(u64),
    Joined,
    Removed,
}

/// Luby's maximal independent set restricted to an active vertex set.
///
/// Rounds cycle through three kinds: draw a value and send it; join if
/// the (value, id) pair is a strict local minimum; leave if a neighbor
/// joined. Round 0 lets active nodes discover their active neighbors.
pub struct LubyMis<'a> {
    pub active: &'a [bool],
}

impl NodeProgram for LubyMis<'_> {
    type State = LubyState;
    type Msg = LubyMsg;
    type Output = bool;

    fn name(&self) -> &'static str {
        "mis"
    }

    fn init(&self, node: &NodeInfo<'_>) -> LubyState {
        let status = if self.active[node.id as usize] { Status::Undecided } else { Status::Inactive };
        LubyState { status, live: Vec::new(), value: 0 }
    }

    fn step(
        &self,
        node: &NodeInfo<'_>,
        state: &mut LubyState,
        round: usize,
        inbox: &[(Vertex, LubyMsg)],
        rng: &mut Stream,
    ) -> Step<LubyMsg> {
        use rand::RngCore;
        if round == 0 {
            if state.status == Status::Inactive {
                return Step::halt(Vec::new());
            }
            return Step::send(node.neighbors.iter().map(|&w| (w, LubyMsg::Hello)).collect());
        }
        match round % 3 {
            1 => {
                if round == 1 {
                    state.live = inbox.iter().map(|(from, _)| *from).collect();
                } else {
                    state.live.retain(|w| !inbox.iter().any(|(from, m)| from == w && *m == LubyMsg::Removed));
                }
                state.value = rng.next_u64();
                Step::send(state.live.iter().map(|&w| (w, LubyMsg::Value(state.value))).collect())
            }
            2 => {
                let mine = (state.value, node.id);
                let wins = inbox.iter().all(|(from, m)| match m {
                    LubyMsg::Value(x) => mine < (*x, *from),
                    _ => true,
                });
                if wins {
                    state.status = Status::In;
                    Step::halt(state.live.iter().map(|&w| (w, LubyMsg::Joined)).collect())
                } else {
                    Step::idle()
                }
            }
            _ => {
                if inbox.iter().any(|(_, m)| *m == LubyMsg::Joined) {
                    state.status = Status::Out;
                    Step::halt(state.live.iter().map(|&w| (w, LubyMsg::Removed)).collect())
                } else {
                    Step::idle()
                }
            }
        }
    }

    fn output(&self, _node: &NodeInfo<'_>, state: &LubyState) -> bool {
        state.status == Status::In
    }
}

/// A maximal independent set of `g[active]`, computed by running
/// [`LubyMis`] through the simulator.
pub fn luby_mis(g: &Graph, active: &VertexSet, seed: u64) -> (VertexSet, RoundStats) {
    let mask = active.mask(g.n());
    // Each three-round iteration removes at least the global minimum, so
    // 3n + 3 rounds always suffice.
    let out = run(g, &LubyMis { active: &mask }, 3 * g.n() + 3, seed).expect("Luby's algorithm terminates");
    let mis = out.outputs.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as Vertex + 1).collect();
    (mis, out.stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct OwnId;

    impl NodeProgram for OwnId {
        type State = ();
        type Msg = ();
        type Output = Vertex;
        fn init(&self, _: &NodeInfo<'_>) {}
        fn step(&self, _: &NodeInfo<'_>, _: &mut (), _: usize, _: &[(Vertex, ())], _: &mut Stream) -> Step<()> {
            Step::halt(Vec::new())
        }
        fn output(&self, node: &NodeInfo<'_>, _: &()) -> Vertex {
            node.id
        }
    }

    struct Rogue;

    impl NodeProgram for Rogue {
        type State = ();
        type Msg = ();
        type Output = ();
        fn init(&self, _: &NodeInfo<'_>) {}
        fn step(&self, node: &NodeInfo<'_>, _: &mut (), _: usize, _: &[(Vertex, ())], _: &mut Stream) -> Step<()> {
            let target = if node.id == 1 { 3 } else { 1 };
            Step::halt(vec![(target, ())])
        }
        fn output(&self, _: &NodeInfo<'_>, _: &()) {}
    }

    fn is_mis(g: &Graph, active: &VertexSet, mis: &VertexSet) -> bool {
        let independent = g.edges().all(|(u, v)| !(mis.contains(u) && mis.contains(v)));
        let maximal = active.iter().all(|v| mis.contains(v) || g.neighbors(v).iter().any(|&w| mis.contains(w)));
        independent && maximal && mis.is_subset(active)
    }

    #[test]
    fn own_id_halts_at_round_zero() {
        let g = Graph::cycle(7);
        let out = run(&g, &OwnId, 10, 1).unwrap();
        assert_eq!(out.outputs, (1..=7).collect::<Vec<_>>());
        assert_eq!(out.stats.total(), 0);
    }

    #[test]
    fn ball_gather_on_a_path() {
        let g = Graph::path(10);
        let out = run(&g, &BallGather { radius: 2 }, 10, 1).unwrap();
        assert!(out.stats.halted_round.iter().all(|&r| r == 2));
        for v in g.vertices() {
            assert_eq!(out.outputs[v as usize - 1], gather_ball(&g, v, 2).unwrap());
        }
    }

    #[test]
    fn gather_ball_examples() {
        let single = gather_ball(&Graph::cycle(5), 3, 0).unwrap();
        assert_eq!((single.graph.n(), single.graph.m(), single.ids.clone()), (1, 0, vec![3]));
        assert_eq!(gather_ball(&Graph::complete(4), 2, 1).unwrap().graph, Graph::complete(4));
        let b = gather_ball(&Graph::cycle(6), 1, 2).unwrap();
        assert_eq!(b.ids, [1, 2, 3, 5, 6]);
        assert_eq!((b.graph.m(), b.graph.delta()), (4, 2));
        assert!(gather_ball(&Graph::cycle(6), 9, 1).is_err());
    }

    #[test]
    fn non_neighbor_messages_are_rejected() {
        let g = Graph::path(3);
        assert!(matches!(run(&g, &Rogue, 5, 0), Err(SimError::NonNeighbor { from: 1, to: 3, round: 0 })));
    }

    #[test]
    fn round_limit_is_reported() {
        let g = Graph::path(4);
        let err = run(&g, &BallGather { radius: 5 }, 2, 0).err().unwrap();
        assert_eq!(err, SimError::RoundLimit { max_rounds: 2, unhalted: VertexSet::from([1, 2, 3, 4]) });
    }

    #[test]
    fn luby_examples() {
        let c9 = Graph::cycle(9);
        let all: VertexSet = c9.vertices().collect();
        for seed in 0..20 {
            let (mis, stats) = luby_mis(&c9, &all, seed);
            assert!(is_mis(&c9, &all, &mis));
            assert_eq!(stats.halted_round.len(), 9);
        }
        let k5 = Graph::complete(5);
        assert_eq!(luby_mis(&k5, &k5.vertices().collect(), 4).0.len(), 1);
        let p4 = Graph::path(4);
        for seed in 0..20 {
            assert_eq!(luby_mis(&p4, &p4.vertices().collect(), seed).0.len(), 2);
        }
        let stable = VertexSet::from([1, 3, 5]);
        assert_eq!(luby_mis(&Graph::path(5), &stable, 2).0, stable);
    }

    #[test]
    fn runs_are_deterministic() {
        let g = Graph::cycle(30);
        let all: VertexSet = g.vertices().collect();
        assert_eq!(luby_mis(&g, &all, 9), luby_mis(&g, &all, 9));
    }

    #[test]
    fn far_edges_do_not_change_early_outputs() {
        // Outputs after r rounds depend on the radius-r ball only.
        let g = Graph::path(12);
        let h = g.without_edge(10, 11);
        let a = run(&g, &BallGather { radius: 3 }, 5, 0).unwrap();
        let b = run(&h, &BallGather { radius: 3 }, 5, 0).unwrap();
        for v in 1..=5 {
            assert_eq!(a.outputs[v - 1], b.outputs[v - 1]);
        }
    }
}
