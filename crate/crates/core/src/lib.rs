//! Exact outcome ranks and dominance testing for acyclic CP-nets.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`model`]: the validated [`CpNet`] representation and [`Outcome`] encoding,
//! - [`rank`]: ancestor sets, descendent path counts, outcome ranks and
//!   least-rank-improvement bounds, all in exact rational arithmetic,
//! - [`oracle`]: the explicit preference graph, used as ground truth on small nets,
//! - [`ordering`]: rank-induced consistent orderings of outcome sets,
//! - [`dominance`]: the dominance query search tree with rank, penalty and
//!   suffix pruning.
//!
//! Text formats, random generation and the benchmark harness live in the
//! `cpnet` crate.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dominance;
pub mod fixtures;
pub mod model;
pub mod oracle;
pub mod ordering;
pub mod rank;

pub use dominance::{
    DominanceEngine, DominanceError, LeafStrategy, Measures, PenaltyTable, PruningConfig, SearchNode, SearchResult,
    ZeroTraversalReason,
};
pub use model::{CpNet, CptRow, ModelError, Outcome, PreferenceMode, RawNet, ValidationReport};
pub use oracle::{Entailment, OracleError, OrderingViolation, PreferenceGraph};
pub use ordering::{ConsistentOrdering, ConstraintSet, OrderingError, RankedOutcome, TieGroup};
pub use rank::{LeastRankTable, Rank, RankError, Ranker, VariableStats};

/// Default cap on the number of outcomes the oracle and full orderings may enumerate.
pub const DEFAULT_ENUMERATION_BUDGET: usize = 4096;
