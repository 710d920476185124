//! Parallel Moser–Tardos resampling for the variable-setting Local Lemma.
//!
//! Each phase evaluates every bad event, picks a maximal independent set of
//! the violated ones in the dependency graph, and resamples exactly the
//! variables those events read. The `k`-th sample of variable `i` always
//! comes from the stream keyed by `(seed, i, k)`, so a solve is a pure
//! function of its seed.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::rng::{self, Domain, Stream};
use crate::sim::{self, RoundStats};

pub type Sampler<'a, T> = Box<dyn Fn(&mut Stream) -> T + 'a>;
pub type Predicate<'a, T> = Box<dyn Fn(&Scoped<'_, T>) -> bool + 'a>;

/// Where an event lives when the instance is embedded in a host graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub vertex: Vertex,
    pub radius: usize,
}

pub struct Event<'a, T> {
    /// Sorted, duplicate-free variable indices.
    scope: Vec<usize>,
    predicate: Predicate<'a, T>,
    pub anchor: Option<Anchor>,
    /// Exact probability, when known in closed form.
    pub probability: Option<f64>,
}

impl<'a, T> Event<'a, T> {
    pub fn new(scope: impl IntoIterator<Item = usize>, predicate: impl Fn(&Scoped<'_, T>) -> bool + 'a) -> Self {
        let mut scope: Vec<usize> = scope.into_iter().collect();
        scope.sort_unstable();
        scope.dedup();
        Event { scope, predicate: Box::new(predicate), anchor: None, probability: None }
    }

    pub fn anchored(mut self, vertex: Vertex, radius: usize) -> Self {
        self.anchor = Some(Anchor { vertex, radius });
        self
    }

    pub fn with_probability(mut self, p: f64) -> Self {
        self.probability = Some(p);
        self
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    /// `true` iff the event holds (is violated) under `values`.
    pub fn holds(&self, values: &[T]) -> bool {
        (self.predicate)(&Scoped { values, scope: &self.scope })
    }
}

/// The view an event predicate gets: only variables in its scope.
pub struct Scoped<'v, T> {
    values: &'v [T],
    scope: &'v [usize],
}

impl<T> Scoped<'_, T> {
    /// Panics if `var` is outside the event's declared scope.
    pub fn get(&self, var: usize) -> &T {
        assert!(self.scope.binary_search(&var).is_ok(), "variable {var} read outside the event scope");
        &self.values[var]
    }

    /// Scoped values in ascending variable order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.scope.iter().map(|&i| (i, &self.values[i]))
    }
}

pub struct LllInstance<'a, T> {
    pub samplers: Vec<Sampler<'a, T>>,
    pub events: Vec<Event<'a, T>>,
}

impl<'a, T> LllInstance<'a, T> {
    pub fn new() -> Self {
        LllInstance { samplers: Vec::new(), events: Vec::new() }
    }

    pub fn add_variable(&mut self, sampler: impl Fn(&mut Stream) -> T + 'a) -> usize {
        self.samplers.push(Box::new(sampler));
        self.samplers.len() - 1
    }

    pub fn add_event(&mut self, event: Event<'a, T>) -> usize {
        assert!(event.scope.iter().all(|&v| v < self.samplers.len()), "event scope names an unknown variable");
        self.events.push(event);
        self.events.len() - 1
    }

    /// For each variable, the events that read it.
    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.samplers.len()];
        for (e, ev) in self.events.iter().enumerate() {
            for &v in &ev.scope {
                inc[v].push(e);
            }
        }
        inc
    }

    /// Dependency-graph neighbors of every event.
    pub fn dependency_lists(&self) -> Vec<Vec<usize>> {
        let inc = self.incidence();
        self.events
            .iter()
            .enumerate()
            .map(|(e, ev)| {
                let mut nb: Vec<usize> = ev.scope.iter().flat_map(|&v| inc[v].iter().copied()).filter(|&f| f != e).collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect()
    }

    pub fn sample(&self, var: usize, count: u64, seed: u64) -> T {
        (self.samplers[var])(&mut rng::stream(seed, Domain::Variable, var as u64, count))
    }

    /// Indices of events violated by `values`.
    pub fn violated(&self, values: &[T]) -> Vec<usize> {
        (0..self.events.len()).filter(|&e| self.events[e].holds(values)).collect()
    }
}

impl<T> Default for LllInstance<'_, T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Maximum number of other events an event shares a variable with.
pub fn dependency_degree<T>(inst: &LllInstance<'_, T>) -> usize {
    inst.dependency_lists().iter().map(Vec::len).max().unwrap_or(0)
}

/// The degree used in criteria: at least 2, as the criteria assume.
pub fn effective_degree<T>(inst: &LllInstance<'_, T>) -> usize {
    dependency_degree(inst).max(2)
}

/// Polynomial criterion `a · p · d^c < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Criterion {
    pub a: f64,
    pub c_exp: f64,
}

impl Criterion {
    /// `e · p · d² < 1`, the classical resampling bound.
    pub const CPS: Criterion = Criterion { a: core::f64::consts::E, c_exp: 2.0 };
    /// `2¹⁵ · p · d⁸ < 1`, the bound of the deterministic-network variant.
    pub const GHK: Criterion = Criterion { a: 32768.0, c_exp: 8.0 };

    pub fn value(&self, p: f64, d: usize) -> f64 {
        self.a * p * libm::pow(d as f64, self.c_exp)
    }
}

/// Where the event probability comes from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbabilitySource {
    /// Use the events' registered exact probabilities; fail if any is missing.
    Registered,
    Supplied(f64),
    /// Registered values where present, Monte-Carlo estimates elsewhere.
    Estimate { samples: u64, seed: u64 },
}

/// Default Monte-Carlo sample count.
pub const DEFAULT_ESTIMATE_SAMPLES: u64 = 100_000;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriterionReport {
    pub p: f64,
    pub p_estimated: bool,
    pub d_raw: usize,
    pub d: usize,
    pub value: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CriterionError {
    #[error("event {0} has no registered probability and sampling is disabled")]
    ProbabilityUnavailable(usize),
}

pub fn check_criterion<T>(
    inst: &LllInstance<'_, T>,
    crit: Criterion,
    source: ProbabilitySource,
) -> Result<CriterionReport, CriterionError> {
    let d_raw = dependency_degree(inst);
    let d = d_raw.max(2);
    let (p, p_estimated) = match source {
        ProbabilitySource::Supplied(p) => (p, false),
        ProbabilitySource::Registered => {
            let mut p: f64 = 0.0;
            for (e, ev) in inst.events.iter().enumerate() {
                p = p.max(ev.probability.ok_or(CriterionError::ProbabilityUnavailable(e))?);
            }
            (p, false)
        }
        ProbabilitySource::Estimate { samples, seed } => estimate_max_probability(inst, samples, seed),
    };
    let value = crit.value(p, d);
    Ok(CriterionReport { p, p_estimated, d_raw, d, value, holds: value < 1.0 })
}

fn estimate_max_probability<T>(inst: &LllInstance<'_, T>, samples: u64, seed: u64) -> (f64, bool) {
    let unknown: Vec<usize> = (0..inst.events.len()).filter(|&e| inst.events[e].probability.is_none()).collect();
    let mut p: f64 = inst.events.iter().filter_map(|e| e.probability).fold(0.0, f64::max);
    if unknown.is_empty() || samples == 0 {
        return (p, false);
    }
    let mut hits = vec![0u64; unknown.len()];
    for s in 0..samples {
        let values: Vec<T> = (0..inst.samplers.len())
            .map(|v| (inst.samplers[v])(&mut rng::stream(seed, Domain::Estimate, v as u64, s)))
            .collect();
        for (h, &e) in hits.iter_mut().zip(&unknown) {
            if inst.events[e].holds(&values) {
                *h += 1;
            }
        }
    }
    for h in hits {
        p = p.max(h as f64 / samples as f64);
    }
    (p, true)
}

/// A satisfying assignment and how it was reached.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T> {
    pub assignment: Vec<T>,
    /// Resampling phases (zero if the first sample already works).
    pub phases: usize,
    /// Total individual variable resamples.
    pub resamples: u64,
    /// LOCAL rounds when the events are host-anchored, else empty.
    pub stats: RoundStats,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LllError<T> {
    #[error("resampling did not finish within {phases} phases; {} events still violated", violated.len())]
    PhaseLimit { phases: usize, partial: Vec<T>, violated: Vec<usize> },
}

/// Samples every variable, then resamples until no event holds.
pub fn solve<T: Clone>(inst: &LllInstance<'_, T>, seed: u64, max_phases: usize) -> Result<Solution<T>, LllError<T>> {
    let initial: Vec<T> = (0..inst.samplers.len()).map(|v| inst.sample(v, 0, seed)).collect();
    solve_from(inst, initial, seed, max_phases)
}

/// Resampling from a given starting assignment. Resample counters start at
/// 1, so the starting assignment is taken to be sample 0 of each variable.
pub fn solve_from<T: Clone>(
    inst: &LllInstance<'_, T>,
    mut values: Vec<T>,
    seed: u64,
    max_phases: usize,
) -> Result<Solution<T>, LllError<T>> {
    assert_eq!(values.len(), inst.samplers.len());
    let deps = inst.dependency_lists();
    let inc = inst.incidence();
    let anchored = inst.events.iter().all(|e| e.anchor.is_some()) && !inst.events.is_empty();
    let radius = inst.events.iter().filter_map(|e| e.anchor.map(|a| a.radius)).max().unwrap_or(0);
    let mut counts = vec![0u64; values.len()];
    let mut is_violated: Vec<bool> = inst.events.iter().map(|e| e.holds(&values)).collect();
    let mut stats = RoundStats::default();
    let mut phases = 0;
    let mut resamples = 0u64;
    loop {
        let violated: Vec<usize> = (0..inst.events.len()).filter(|&e| is_violated[e]).collect();
        if anchored {
            // Every node learns its radius-r ball and evaluates its events.
            stats.add_phase("lll-evaluate", 2 * radius);
        }
        if violated.is_empty() {
            return Ok(Solution { assignment: values, phases, resamples, stats });
        }
        if phases == max_phases {
            return Err(LllError::PhaseLimit { phases, partial: values, violated });
        }
        let chosen = if anchored {
            let (mis, mis_stats) = luby_on_violated(&deps, &violated, rng::child_seed(seed, phases as u64));
            // One round of the dependency graph spans up to 2r host hops.
            stats.add_phase("lll-mis", 2 * radius * mis_stats.total());
            stats.messages += mis_stats.messages;
            mis
        } else {
            greedy_independent(&deps, &violated)
        };
        let mut touched = vec![false; inst.events.len()];
        for &e in &chosen {
            for &v in &inst.events[e].scope {
                counts[v] += 1;
                values[v] = inst.sample(v, counts[v], seed);
                resamples += 1;
                for &f in &inc[v] {
                    touched[f] = true;
                }
            }
        }
        for (e, t) in touched.iter().enumerate() {
            if *t {
                is_violated[e] = inst.events[e].holds(&values);
            }
        }
        phases += 1;
    }
}

fn greedy_independent(deps: &[Vec<usize>], violated: &[usize]) -> Vec<usize> {
    let mut blocked = vec![false; deps.len()];
    let mut chosen = Vec::new();
    for &e in violated {
        if !blocked[e] {
            chosen.push(e);
            for &f in &deps[e] {
                blocked[f] = true;
            }
        }
    }
    chosen
}

/// Luby's MIS on the dependency graph restricted to violated events.
fn luby_on_violated(deps: &[Vec<usize>], violated: &[usize], seed: u64) -> (Vec<usize>, RoundStats) {
    let mut local = vec![u32::MAX; deps.len()];
    for (i, &e) in violated.iter().enumerate() {
        local[e] = i as u32 + 1;
    }
    let edges = violated.iter().flat_map(|&e| {
        let local = &local;
        deps[e].iter().filter_map(move |&f| (local[f] != u32::MAX && local[f] > local[e]).then_some((local[e], local[f])))
    });
    let h = Graph::from_edges(violated.len(), edges).expect("dependency graph is simple");
    let all: VertexSet = h.vertices().collect();
    let (mis, stats) = sim::luby_mis(&h, &all, seed);
    (mis.iter().map(|i| violated[i as usize - 1]).collect(), stats)
}

/// Serializable instances built from named samplers and event shapes.
pub mod registry {
    use super::*;
    use alloc::string::String;

    #[derive(Clone, Debug, PartialEq, Eq)]
    #[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
    #[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
    pub enum SamplerSpec {
        UniformColor { palette: u32 },
        FairCoin,
        Permutation { len: usize },
    }

    #[derive(Clone, Debug, PartialEq, Eq, Hash)]
    #[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
    #[cfg_attr(feature = "serde", serde(untagged))]
    pub enum RegValue {
        Coin(bool),
        Color(u32),
        Permutation(Vec<u32>),
    }

    #[derive(Clone, Debug, PartialEq, Eq)]
    #[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
    #[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
    pub enum EventSpec {
        /// Violated iff every literal is false; literals are (coin, wanted).
        Clause { literals: Vec<(usize, bool)> },
        ValueIs { var: usize, value: RegValue },
        /// All listed color variables take the same value.
        AllEqual { vars: Vec<usize> },
    }

    #[derive(Clone, Debug, Default, PartialEq, Eq)]
    #[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
    pub struct InstanceSpec {
        pub variables: Vec<SamplerSpec>,
        pub events: Vec<EventSpec>,
    }

    #[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
    pub enum SpecError {
        #[error("event {event} refers to unknown variable {var}")]
        UnknownVariable { event: usize, var: usize },
        #[error("event {event}: {reason}")]
        Shape { event: usize, reason: String },
    }

    fn sampler(spec: &SamplerSpec) -> Sampler<'static, RegValue> {
        use rand::seq::SliceRandom;
        use rand::Rng;
        match *spec {
            SamplerSpec::UniformColor { palette } => Box::new(move |r: &mut Stream| RegValue::Color(r.gen_range(1..=palette))),
            SamplerSpec::FairCoin => Box::new(|r: &mut Stream| RegValue::Coin(r.gen_bool(0.5))),
            SamplerSpec::Permutation { len } => Box::new(move |r: &mut Stream| {
                let mut p: Vec<u32> = (1..=len as u32).collect();
                p.shuffle(r);
                RegValue::Permutation(p)
            }),
        }
    }

    fn factorial_inv(n: usize) -> f64 {
        (1..=n).fold(1.0, |acc, k| acc / k as f64)
    }

    impl InstanceSpec {
        pub fn build(&self) -> Result<LllInstance<'static, RegValue>, SpecError> {
            let mut inst = LllInstance::new();
            for s in &self.variables {
                inst.samplers.push(sampler(s));
            }
            for (i, e) in self.events.iter().enumerate() {
                let shape = |reason: &str| SpecError::Shape { event: i, reason: reason.into() };
                let check = |var: usize| {
                    self.variables.get(var).ok_or(SpecError::UnknownVariable { event: i, var })
                };
                let event = match e {
                    EventSpec::Clause { literals } => {
                        for &(v, _) in literals {
                            if *check(v)? != SamplerSpec::FairCoin {
                                return Err(shape("clause literals must be fair coins"));
                            }
                        }
                        let mut vars: Vec<usize> = literals.iter().map(|l| l.0).collect();
                        vars.sort_unstable();
                        vars.dedup();
                        if vars.len() != literals.len() {
                            return Err(shape("clause repeats a variable"));
                        }
                        let lits = literals.clone();
                        let p = libm::pow(0.5, lits.len() as f64);
                        Event::new(vars, move |s: &Scoped<'_, RegValue>| {
                            lits.iter().all(|&(v, want)| *s.get(v) != RegValue::Coin(want))
                        })
                        .with_probability(p)
                    }
                    EventSpec::ValueIs { var, value } => {
                        let p = match (check(*var)?, value) {
                            (SamplerSpec::FairCoin, RegValue::Coin(_)) => 0.5,
                            (SamplerSpec::UniformColor { palette }, RegValue::Color(c)) => {
                                if (1..=*palette).contains(c) { 1.0 / *palette as f64 } else { 0.0 }
                            }
                            (SamplerSpec::Permutation { len }, RegValue::Permutation(p)) => {
                                let mut sorted = p.clone();
                                sorted.sort_unstable();
                                if sorted == (1..=*len as u32).collect::<Vec<_>>() { factorial_inv(*len) } else { 0.0 }
                            }
                            _ => return Err(shape("value does not match the sampler kind")),
                        };
                        let (var, value) = (*var, value.clone());
                        Event::new([var], move |s: &Scoped<'_, RegValue>| *s.get(var) == value).with_probability(p)
                    }
                    EventSpec::AllEqual { vars } => {
                        let mut palettes = Vec::new();
                        for &v in vars {
                            match check(v)? {
                                SamplerSpec::UniformColor { palette } => palettes.push(*palette),
                                _ => return Err(shape("all-equal needs color variables")),
                            }
                        }
                        let mut sorted = vars.clone();
                        sorted.sort_unstable();
                        sorted.dedup();
                        if sorted.len() != vars.len() || vars.is_empty() {
                            return Err(shape("all-equal needs distinct variables"));
                        }
                        // Colors in the common range, each variable hitting it.
                        let common = *palettes.iter().min().unwrap();
                        let p = (common as f64) * palettes.iter().fold(1.0, |acc, &q| acc / q as f64);
                        let vs = vars.clone();
                        Event::new(sorted, move |s: &Scoped<'_, RegValue>| {
                            let first = s.get(vs[0]);
                            vs.iter().all(|&v| s.get(v) == first)
                        })
                        .with_probability(p)
                    }
                };
                inst.add_event(event);
            }
            Ok(inst)
        }
    }

    /// A ring of `clauses` clauses of width `width` over fair coins. Clause
    /// `j` reads variables `s·j .. s·j + width` (mod the variable count),
    /// with `s = ⌈width/2⌉`, so each clause meets only its two ring
    /// neighbors when `clauses ≥ 3`. Signs are drawn from `seed`.
    pub fn ring_cnf(clauses: usize, width: usize, seed: u64) -> InstanceSpec {
        use rand::Rng;
        let shift = width.div_ceil(2);
        let vars = (clauses * shift).max(width);
        let mut r = rng::stream(seed, Domain::Generator, 0, 0);
        let events = (0..clauses)
            .map(|j| EventSpec::Clause {
                literals: (0..width).map(|t| ((shift * j + t) % vars, r.gen_bool(0.5))).collect(),
            })
            .collect();
        InstanceSpec { variables: vec![SamplerSpec::FairCoin; vars], events }
    }
}

#[cfg(test)]
mod tests {
    use super::registry::*;
    use super::*;

    fn coin_instance(scopes: &[&[usize]], vars: usize) -> InstanceSpec {
        InstanceSpec {
            variables: vec![SamplerSpec::FairCoin; vars],
            events: scopes
                .iter()
                .map(|s| EventSpec::Clause { literals: s.iter().map(|&v| (v, true)).collect() })
                .collect(),
        }
    }

    #[test]
    fn dependency_degree_examples() {
        let disjoint = coin_instance(&[&[0], &[1], &[2]], 3).build().unwrap();
        assert_eq!(dependency_degree(&disjoint), 0);
        assert_eq!(effective_degree(&disjoint), 2);
        let shared = coin_instance(&[&[0, 1], &[0, 2], &[0, 3], &[0, 4]], 5).build().unwrap();
        assert_eq!(dependency_degree(&shared), 3);
        let chain = coin_instance(&[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5]], 6).build().unwrap();
        assert_eq!(dependency_degree(&chain), 2);
    }

    #[test]
    fn criterion_examples() {
        let inst = coin_instance(&[&[0]], 1).build().unwrap();
        let at = |p: f64, d: usize| Criterion::CPS.value(p, d) < 1.0;
        assert!(at(0.001, 3));
        assert!(!at(0.5, 4));
        assert!(at(0.0, 1000));
        let r = check_criterion(&inst, Criterion::CPS, ProbabilitySource::Registered).unwrap();
        assert_eq!((r.p, r.d, r.p_estimated), (0.5, 2, false));
        assert!(!r.holds);
        assert!(Criterion::GHK.value(1e-12, 4) < 1.0);
    }

    #[test]
    fn missing_probability_without_sampling_is_an_error() {
        let mut inst: LllInstance<'_, bool> = LllInstance::new();
        let v = inst.add_variable(|r| rand::Rng::gen_bool(r, 0.5));
        inst.add_event(Event::new([v], move |s| *s.get(v)));
        assert_eq!(
            check_criterion(&inst, Criterion::CPS, ProbabilitySource::Registered),
            Err(CriterionError::ProbabilityUnavailable(0))
        );
        let est = check_criterion(&inst, Criterion::CPS, ProbabilitySource::Estimate { samples: 20_000, seed: 1 }).unwrap();
        assert!(est.p_estimated && (est.p - 0.5).abs() < 0.02);
    }

    #[test]
    fn no_events_means_zero_phases() {
        let spec = InstanceSpec { variables: vec![SamplerSpec::FairCoin; 4], events: vec![] };
        let inst = spec.build().unwrap();
        let sol = solve(&inst, 3, 10).unwrap();
        assert_eq!(sol.phases, 0);
        let fresh: Vec<RegValue> = (0..4).map(|v| inst.sample(v, 0, 3)).collect();
        assert_eq!(sol.assignment, fresh);
    }

    #[test]
    fn single_coin_ends_tails() {
        let spec = InstanceSpec {
            variables: vec![SamplerSpec::FairCoin],
            events: vec![EventSpec::ValueIs { var: 0, value: RegValue::Coin(true) }],
        };
        let inst = spec.build().unwrap();
        for seed in 0..20 {
            assert_eq!(solve(&inst, seed, 200).unwrap().assignment, [RegValue::Coin(false)]);
        }
    }

    #[test]
    fn bounded_degree_cnf_is_solved() {
        // 60 width-6 clauses on a ring: d = 2, p = 1/64, e·p·d² ≈ 0.17.
        let spec = ring_cnf(60, 6, 4);
        let inst = spec.build().unwrap();
        let report = check_criterion(&inst, Criterion::CPS, ProbabilitySource::Registered).unwrap();
        assert!(report.holds && report.d_raw == 2);
        for seed in 0..50 {
            let sol = solve(&inst, seed, 1000).unwrap();
            assert!(inst.violated(&sol.assignment).is_empty());
        }
    }

    #[test]
    fn only_scoped_variables_change_in_a_phase() {
        let spec = ring_cnf(40, 6, 9);
        let inst = spec.build().unwrap();
        let start: Vec<RegValue> = (0..inst.samplers.len()).map(|v| inst.sample(v, 0, 1)).collect();
        let violated = inst.violated(&start);
        let touched: Vec<bool> = {
            let mut t = vec![false; start.len()];
            for &e in &violated {
                for &v in inst.events[e].scope() {
                    t[v] = true;
                }
            }
            t
        };
        let after = match solve_from(&inst, start.clone(), 1, 1) {
            Ok(sol) => sol.assignment,
            Err(LllError::PhaseLimit { partial, .. }) => partial,
        };
        for v in 0..start.len() {
            if !touched[v] {
                assert_eq!(start[v], after[v]);
            }
        }
    }

    #[test]
    fn anchored_instances_report_rounds() {
        let spec = ring_cnf(30, 6, 2);
        let built = spec.build().unwrap();
        let mut inst: LllInstance<'_, RegValue> = LllInstance::new();
        inst.samplers = built.samplers;
        for (i, e) in built.events.into_iter().enumerate() {
            inst.events.push(e.anchored(i as Vertex + 1, 1));
        }
        let sol = solve(&inst, 11, 1000).unwrap();
        assert!(inst.violated(&sol.assignment).is_empty());
        assert!(sol.stats.rounds("lll-evaluate") >= 2);
    }

    #[test]
    fn probabilities_of_registry_events() {
        let spec = InstanceSpec {
            variables: vec![
                SamplerSpec::UniformColor { palette: 4 },
                SamplerSpec::UniformColor { palette: 4 },
                SamplerSpec::Permutation { len: 3 },
            ],
            events: vec![
                EventSpec::AllEqual { vars: vec![0, 1] },
                EventSpec::ValueIs { var: 2, value: RegValue::Permutation(vec![2, 1, 3]) },
            ],
        };
        let inst = spec.build().unwrap();
        assert_eq!(inst.events[0].probability, Some(0.25));
        assert!((inst.events[1].probability.unwrap() - 1.0 / 6.0).abs() < 1e-12);
        let bad = InstanceSpec { variables: vec![SamplerSpec::FairCoin], events: vec![EventSpec::AllEqual { vars: vec![0] }] };
        assert!(bad.build().is_err());
    }
}
