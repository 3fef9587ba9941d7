//! Connected f-factors of dense graphs.
//!
//! For targets `f(v) >= ceil(n / 2.5)` the solver runs Tutte's f-factor
//! algorithm and, when the factor it finds splits into two components,
//! searches for a factor in which some cross pair sits at distance exactly 3.
//! The alternating-circuit module exposes the switching machinery behind that
//! search, and the oracle module gives brute-force ground truth for small
//! instances.

pub mod alternating;
pub mod cli;
pub mod distance;
pub mod error;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod solver;
pub mod tutte;

pub use error::{Error, Result};
pub use graph::{CutSide, Distance, Edge, EdgeSet, Graph, VertexSet};
pub use solver::{solve, solve_from_factor, ConnectedFactorResult, Outcome, SolveOptions};
pub use tutte::{DegreeSpec, Factor};
