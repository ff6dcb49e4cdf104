//! Gomory-Hu trees of hidden unweighted graphs through metered cut queries.
//!
//! The hidden graph is only reachable through [`oracle::CutOracle`], which
//! counts every cut evaluation. Everything else is built from those answers:
//! sparsifiers, expander decompositions, star contractions, isolating cuts,
//! single-source minimum cuts and finally the tree itself. The [`exact`]
//! module holds query-free solvers used both internally on recovered graphs
//! and as brute-force references.

pub mod error;
pub mod graph;
pub mod isolating;
pub mod exact;
pub mod expander;
pub mod friendly;
pub mod gomory_hu;
pub mod oracle;
pub mod seed;
pub mod single_source;
pub mod sparsify;
pub mod star;

#[cfg(test)]
mod testkit;

pub use error::{Error, Result};
pub use graph::{CutSet, Graph, Scaled, WeightedGraph};
pub use seed::Seed;
