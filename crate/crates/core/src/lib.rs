//! Bounds on how many mutually orthogonal states a finite-length unitary
//! evolution can pass through, in terms of the width of its frequency
//! distribution.
//!
//! - [`analytic`]: closed-form bounds for equally spaced states.
//! - [`orthogonality`] and [`lp`]: orthogonality of states at given times as
//!   linear constraints on the probability weights, and a simplex solver.
//! - [`optimize`]: numeric minimum widths and the experiments built on them.
//! - [`sampling`]: sinc reconstruction of maximally distinct evolutions.
//! - [`cli`]: the command-line front end.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod exec;
pub mod lp;
pub mod optimize;
pub mod orthogonality;
pub mod sampling;
pub mod spectrum;

pub use error::{Error, Result};
pub use exec::Execution;
pub use optimize::{ExperimentResult, SearchOptions};
pub use spectrum::{Center, FrequencyGrid, StateTimes, WeightDistribution, WidthKind, WidthSpec};
