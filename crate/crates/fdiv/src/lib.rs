#![forbid(unsafe_code)]

//! Structural f-divergences on quantum circuit parameter spaces.
//!
//! This crate compares discrete probability measures over the parameters of a
//! variational quantum circuit, and over the unitaries those parameters produce,
//! using a symmetrized f-divergence that is renormalized through its own value
//! on swapped two-point measures.  The renormalized quantity (here called the
//! *structural divergence*) lives in `[0, 1]` for every generator, which makes
//! divergences with different scales directly comparable and turns abstract
//! trade-off inequalities into concrete, checkable numbers.
//!
//! The main capabilities, each with a runnable example under `examples/`:
//!
//! * divergence evaluation: directed and symmetrized f-divergences, total
//!   variation, triangular discrimination, and the structural divergence for a
//!   registry of built-in generators ([`divergence`], [`generator`]);
//! * measure handling: validated discrete measures, swapped binary pairs,
//!   stochastic coarse-graining, and push-forwards through circuits with
//!   global-phase-aware merging ([`measure`]);
//! * circuit simulation: dense statevector simulation of layered
//!   Pauli-generated circuits, costs, analytic gradients, and spectral
//!   summaries ([`operator`], [`circuit`]);
//! * bound verification: gradient and moment trade-off bounds, the measure
//!   constructions that saturate them, divergence thresholds for detecting
//!   barren plateaus and cost concentration, small-separation asymptotics, and
//!   a randomized infimum oracle ([`bounds`]).
//!
//! The `fdiv` binary exposes the same operations as subcommands that read
//! JSON measure/circuit files and emit deterministic CSV or JSON reports.

pub mod bounds;
pub mod circuit;
pub mod cli;
pub mod divergence;
mod error;
pub mod extended;
pub mod generator;
pub mod io;
pub mod measure;
pub mod operator;
pub mod random;
pub mod report;

pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use generator::{GeneratorKind, GeneratorSpec};
pub use measure::{DiscreteMeasure, DomainTag, ParameterPoint, StochasticMap};
