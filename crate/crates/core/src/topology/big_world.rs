//! The infinite big-world graph, materialized lazily through addresses.
//!
//! No global graph object exists: the graph is infinite, and dynamics only
//! ever touch the infected set and its frontier, so adjacency is computed
//! on demand from canonical addresses.

use super::address::BigWorldAddress;
use crate::error::Result;

/// Enumerate the nonzero L-infinity ball offsets `0 < ||y||_inf <= m` in
/// lexicographic order.
pub fn ball_offsets(m: u32, d: u32) -> Vec<Vec<i64>> {
    let m = m as i64;
    let mut out = Vec::new();
    let mut current = vec![-m; d as usize];
    loop {
        if current.iter().any(|&c| c != 0) {
            out.push(current.clone());
        }
        // odometer increment
        let mut i = d as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < m {
                current[i] += 1;
                for c in current.iter_mut().skip(i + 1) {
                    *c = -m;
                }
                break;
            }
        }
    }
}

/// Short-range neighbors of `a`: same sign and prefix, last offset shifted
/// by every `y` with `0 < ||y||_inf <= m`. Exactly `(2m+1)^d - 1` entries.
pub fn big_world_short_neighbors(a: &BigWorldAddress, m: u32, d: u32) -> Vec<BigWorldAddress> {
    debug_assert_eq!(a.dim(), d);
    ball_offsets(m, d)
        .iter()
        .map(|y| a.with_last_shifted(y))
        .collect()
}

/// The long-range partner (append / drop / sign-flip rule).
pub fn big_world_long_neighbor(a: &BigWorldAddress) -> BigWorldAddress {
    a.long_neighbor()
}

/// All neighbors, short-range first, long-range partner last.
pub fn big_world_neighbors(a: &BigWorldAddress, m: u32, d: u32) -> Vec<BigWorldAddress> {
    let mut v = big_world_short_neighbors(a, m, d);
    v.push(a.long_neighbor());
    v
}

/// Number of vertices within graph distance `k` of the origin, counting
/// both short- and long-range edges. Used for the good-site bound.
pub fn big_world_ball_size(m: u32, d: u32, k: u32) -> Result<u64> {
    let origin = BigWorldAddress::origin(d);
    let mut seen = crate::fx::set_with_capacity(64);
    seen.insert(origin.clone());
    let mut frontier = vec![origin];
    for _ in 0..k {
        let mut next = Vec::new();
        for a in &frontier {
            for b in big_world_neighbors(a, m, d) {
                if seen.insert(b.clone()) {
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.len() as u64)
}

/// The big world as a stepping target for the dynamics.
#[derive(Clone, Debug)]
pub struct BigWorld {
    m: u32,
    d: u32,
    offsets: Vec<Vec<i64>>,
}

impl BigWorld {
    pub fn new(m: u32, d: u32) -> Self {
        BigWorld {
            m,
            d,
            offsets: ball_offsets(m, d),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub(crate) fn offset(&self, i: usize) -> &[i64] {
        &self.offsets[i]
    }
}
