//! Behavioural equivalences and pseudometrics on finite labelled Markov
//! processes (LMPs), computed in exact rational arithmetic.
//!
//! An LMP is a finite state set together with, per action, a subprobability
//! transition distribution out of each state. This crate provides:
//!
//! - epsilon-simulation and epsilon-bisimulation relations, decided by
//!   max-flow feasibility and synthesised by greatest-fixpoint refinement
//!   ([`bisim`]);
//! - the epsilon-distance `d*` (infimum slack under which two states are
//!   epsilon-bisimilar), bracketed by bisection ([`metricfix`]);
//! - the Levy-Prokhorov lifting of a state pseudometric to subdistributions
//!   and the induced functional on state pseudometrics ([`lpmetric`]);
//! - epsilon-coupling certificates and their span-style verification
//!   ([`bisim`]);
//! - a Kantorovich (optimal transport) baseline for comparison
//!   ([`flow`], [`metricfix`]).
//!
//! All probabilities and distances are exact rationals; no floating point
//! enters any computation. The crate is `no_std` (with `alloc`): IO, file
//! formats and the command-line front end live in the companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bisim;
pub mod flow;
pub mod lpmetric;
pub mod metric;
pub mod metricfix;
pub mod model;
pub mod rational;
pub mod relation;
pub mod subdist;

pub use metric::{MetricViolation, PseudoMetric};
pub use model::{ActionId, Lmp, LmpBuildError, StateId};
pub use rational::Rat;
pub use relation::Relation;
pub use subdist::{DistributionError, SubDistribution};

use core::fmt;

/// Error returned by the brute-force oracles when a support is too large
/// to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportTooLarge {
    pub size: usize,
    pub max: usize,
}

impl fmt::Display for SupportTooLarge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "support of size {} exceeds the oracle limit {}", self.size, self.max)
    }
}
