//! Simulation and analysis of nested quantum coin-flipping frameworks under
//! channel noise.
//!
//! A framework is an ordered chain of single-shot coin-flipping protocols
//! ("elements"). When the active element hits a blinding area, where one party
//! cannot tell cheating apart from channel noise, the next element is run.
//! If the last element also hits a blinding area the framework fails.
//!
//! The crate is split into:
//!
//! - [`quantum`]: small dense density-operator toolkit (channels, POVMs,
//!   error rates).
//! - [`elements`]: per-element security signatures and their noisy cheat
//!   probabilities.
//! - [`engine`]: the nested framework as a sampled state machine, plus a
//!   deterministic parallel Monte Carlo estimator.
//! - [`analytics`]: closed-form nested cheat probabilities, justice error,
//!   the ideal-element table and noise sweeps.
//! - [`fairness`]: fair two-level compositions with a perfect second element.
//! - [`config`] and [`cli`]: scenario files and the command-line front end.

pub mod analytics;
pub mod cli;
pub mod config;
pub mod elements;
pub mod engine;
mod error;
pub mod fairness;
pub mod format;
pub mod quantum;

pub use error::{Error, Result};
