//! Discrete-time contact process and branching random walk on any
//! supported graph family, with stopping-time runners.

pub mod run;
pub mod state;
pub mod step;

pub use run::{
    brw_trajectory, cp_trajectory, run_all_ones, run_sigma, run_tau, run_tau_from_origin,
    DEFAULT_GUARD_CAP,
};
pub use state::{
    single_particle, singleton, total_particles, BrwState, InfectionState, StopKind, StopOutcome,
    TrajectoryPoint,
};
pub use step::{brw_step, cp_step};
