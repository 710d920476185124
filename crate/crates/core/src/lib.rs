//! Synchronous LOCAL-model graph coloring.
//!
//! This crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs and a 64-bit seed; file formats, the command line
//! and any other IO live in the `localcolor` companion crate.
//!
//! Module map:
//!
//! * [`graph`], [`coloring`], [`matching`], [`clique`], [`exact`], [`iso`]:
//!   graph representation and the combinatorial primitives.
//! * [`sim`]: the round-based LOCAL simulator, ball gathering and Luby's MIS.
//! * [`lll`]: parallel Moser–Tardos resampling for the variable-setting LLL.
//! * [`listcolor`]: residual lists and randomized (deg+1)-list coloring.
//! * [`decomposition`]: the d-dense decomposition.
//! * [`sparse`], [`dense`], [`pipeline`]: the coloring engines and the
//!   clique-or-(Δ−εk)-coloring pipeline.
//! * [`reducers`]: c-reducers, hollow components and local certificates.
//! * [`lowerbound`]: the layered hard-instance family.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod clique;
pub mod coloring;
pub mod constants;
pub mod decomposition;
pub mod dense;
pub mod exact;
pub mod frac;
pub mod generators;
pub mod graph;
pub mod iso;
pub mod listcolor;
pub mod lll;
pub mod lowerbound;
pub mod matching;
pub mod pipeline;
pub mod reducers;
pub mod rng;
pub mod sim;
pub mod sparse;

pub use coloring::{is_proper, Color, PartialColoring};
pub use constants::ConstantsProfile;
pub use frac::Frac;
pub use graph::{k_delta, Graph, GraphError, InducedSubgraph, Vertex, VertexSet};
pub use sim::RoundStats;
