//! Deterministic toolkit for benchmarking shallow QAOA against classical
//! heuristics on MaxCut over random regular graphs.
//!
//! The crate is organised around one pipeline:
//!
//! 1. [`graph`] generates random regular instances and decomposes them into
//!    anchored edge neighbourhoods with canonical labels.
//! 2. [`tensor`] evaluates QAOA edge observables on those neighbourhoods by
//!    tensor-network contraction, so cost never scales with the host graph.
//! 3. [`qaoa`] combines per-class values into whole-graph expectations,
//!    fixed-angle tables, and concentration statistics.
//! 4. [`statevector`] is the dense simulator used to cross-check everything
//!    at small size.
//! 5. [`solvers`] and [`advantage`] supply the classical baselines and the
//!    shots-to-advantage model built on top of both sides.
//!
//! Every entry point that consumes randomness takes an explicit seed and is
//! reproducible bit-for-bit across runs and thread counts.

pub mod advantage;
pub mod config;
pub mod error;
pub mod graph;
pub mod qaoa;
pub mod rng;
pub mod solvers;
pub mod statevector;
pub mod tensor;

pub use advantage::{AdvantageQuery, CostDistributionModel, CycleStats, WhpBounds};
pub use config::EngineConfig;
pub use error::{Error, Result};
pub use graph::{AnchoredSubgraph, RegularGraph, SubgraphTally};
pub use qaoa::{ExpectationTable, FixedAngleSet};
pub use solvers::PerformanceProfile;
pub use statevector::StateVector;
pub use tensor::{ContractionOrder, QaoaAngles, TensorNetwork};
