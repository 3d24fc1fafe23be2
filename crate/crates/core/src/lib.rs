//! Combinatorics laboratory for (r-1)-matchings and (r-1)-covers of
//! random r-uniform hypergraphs.
//!
//! The crate is organised by subsystem:
//!
//! * [`graph`]: r-graphs, shadows, co-degrees, partitions, tight
//!   connectivity, rooted trees and the `H_r(n, p)` sampler.
//! * [`matching`] and [`oracle`]: greedy (r-1)-matchings, validators,
//!   the heavy-set fractional matching value and exact branch-and-bound
//!   oracles for `nu` and `tau`.
//! * [`branching`]: Galton-Watson trees, decreasing-weight trees, the
//!   survival recursion and Binomial/Poisson total variation.
//! * [`cover`]: partition-based (r-1)-cover constructions.
//! * [`bounds`]: closed-form densities, exact `zeta_1` via Stirling
//!   numbers, finite checks and the minimax ratio table.

pub mod bounds;
pub mod branching;
pub mod cover;
mod error;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{RGraph, VSet};
