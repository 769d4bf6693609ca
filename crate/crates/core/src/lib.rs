//! Simulation and exact analysis of the discrete-time contact process and
//! branching random walk on small-world and big-world graphs.
//!
//! The crate is organized around three concerns:
//!
//! - [`topology`]: the four graph families (small world, big world, comb,
//!   K_M) and their locality diagnostics. The infinite graphs exist only
//!   as canonical addresses; adjacency is computed on demand.
//! - [`dynamics`]: one-step kernels and stopping-time runners, driven by
//!   counter-based trial streams so that every trajectory is a pure
//!   function of (seed, experiment, replicate).
//! - [`analysis`]: closed-form critical values, the birth-and-death chain
//!   machinery behind the strong-survival bound, and Monte Carlo
//!   estimators with confidence intervals.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod fx;
pub mod params;
pub mod rng;
pub mod stats;
pub mod topology;

pub use error::{Error, Result};
pub use params::ModelParams;
