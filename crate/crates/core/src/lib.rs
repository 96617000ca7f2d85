//! Exact cost allocation for transferable-utility games.
//!
//! * [`game`]: games over bitmask [`Coalition`]s, allocations and structural
//!   checks (subadditivity, submodularity, monotonicity).
//! * [`lp`]: a dense simplex solver over exact rationals.
//! * [`relaxations`]: the almost-core optimum, the core, and the least /
//!   weak / multiplicative ε-cores, the γ-core, the cost of stability and the
//!   extended core.
//! * [`separation`]: almost-core separation reduced to core separation.
//! * [`mst`]: minimum cost spanning tree games, their monotonization, the
//!   Prim-order core allocation and the 2-approximation for the
//!   nonnegative almost-core maximum.

pub mod catalog;
pub mod coalition;
pub mod error;
pub mod game;
pub mod generate;
pub mod lp;
pub mod mst;
pub mod rational;
pub mod relaxations;
pub mod separation;

pub use coalition::Coalition;
pub use error::{Error, Result, ENUMERATION_LIMIT};
pub use game::{Allocation, Game, Sense, Verdict};
pub use lp::{LpProblem, LpSolution, Relation};
pub use mst::{AlgRunTrace, GraphInstance, TieBreak};
pub use rational::Rational;
pub use relaxations::RelaxationReport;
pub use separation::{SeparationResult, Violation};
