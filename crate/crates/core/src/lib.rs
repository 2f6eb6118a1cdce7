//! Min-cut entropy models of multipartite entanglement.
//!
//! Three model classes share one vocabulary of parties, subsystems and
//! entropy vectors:
//!
//! * [`graph`]: weighted graphs, entropies from max-flow/min-cut;
//! * [`hypergraph`]: weighted hypergraphs, entropies from exhaustive
//!   branch-and-bound over internal vertices;
//! * [`link`]: weighted loops whose linking is described combinatorially by a
//!   [`link::LinkingStructure`], entropies from loop min-cuts.
//!
//! On top of the models sit two provers: [`contraction`] verifies and searches
//! bitstring contraction maps for graphs and hypergraphs, and [`prop3`]
//! verifies cut-dependent contraction certificates on a concrete link model.
//!
//! All arithmetic is exact. Weights and coefficients are [`Rational`]s; the
//! min-cut solvers rescale weights to integers internally.

pub mod bits;
pub mod contraction;
pub mod entropy;
pub mod format;
pub mod generate;
mod error;
pub mod graph;
pub mod hypergraph;
pub mod inequality;
pub mod link;
mod maxflow;
pub mod party;
pub mod prop3;
pub mod rational;

pub use bits::{indicator_ik, weighted_hamming_norm, BitString, TritString};
pub use entropy::EntropyVector;
pub use error::{Error, Inconsistency, Result};
pub use graph::WeightedGraph;
pub use hypergraph::Hypergraph;
pub use inequality::{Evaluation, LinearInequality, Term};
pub use link::{LinkModel, LinkingStructure, LoopCutResult, LoopSet, LoopWeight};
pub use party::{Party, PartySet, Subsystem};
pub use rational::Rational;
