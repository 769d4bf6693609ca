//! Process state and stopping-time outcomes.

use crate::fx;
use serde::Serialize;
use std::fmt;

/// Contact-process state: the set of infected sites. A site that receives
/// at least one infection is infected exactly once.
pub type InfectionState<S> = fx::Set<S>;

/// Branching-random-walk state: site -> particle count, counts >= 1.
pub type BrwState<S> = fx::Map<S, u64>;

pub fn singleton<S: Clone + Eq + std::hash::Hash>(site: S) -> InfectionState<S> {
    let mut s = fx::set_with_capacity(1);
    s.insert(site);
    s
}

pub fn single_particle<S: Clone + Eq + std::hash::Hash>(site: S) -> BrwState<S> {
    let mut s = fx::map_with_capacity(1);
    s.insert(site, 1);
    s
}

pub fn total_particles<S>(state: &BrwState<S>) -> u64 {
    state.values().sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StopKind {
    /// State empty at `time`.
    Extinct,
    /// Origin infected at `time >= 1`.
    Returned,
    /// Horizon reached with the process alive.
    Censored,
}

impl fmt::Display for StopKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopKind::Extinct => "extinct",
            StopKind::Returned => "returned",
            StopKind::Censored => "censored",
        })
    }
}

/// Result of running a process to a stopping time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StopOutcome {
    pub kind: StopKind,
    pub time: u64,
}

/// One row of a trajectory dump.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrajectoryPoint {
    pub t: u64,
    pub population: u64,
    pub origin_infected: bool,
}
