//! Graph families: small world S^R_m, big world B_m, comb C_m, and the
//! comparison graph K_M.

pub mod address;
pub mod big_world;
pub mod comb;
pub mod km;
pub mod small_world;

pub use address::{BigWorldAddress, Sign};
pub use big_world::{
    ball_offsets, big_world_ball_size, big_world_long_neighbor, big_world_neighbors,
    big_world_short_neighbors, BigWorld,
};
pub use comb::{classify_comb_vertex, comb_neighbors, is_comb_vertex, Comb, CombVertex};
pub use km::{km_neighbors, KmAddress};
pub use small_world::{make_small_world, small_world_neighbors, SmallWorldGraph};

use crate::rng::{bounded, mix};
use std::fmt::Debug;
use std::hash::Hash;

/// A graph family the dynamics can step on.
///
/// Alpha-mass targets are indexed lazily in canonical channel order
/// (0 = self, then short-range offsets lexicographically): the stepping
/// loop draws the Bernoulli trial first and only constructs the target
/// site on success, which keeps address allocation off the hot path.
pub trait SiteGraph {
    type Site: Clone + Eq + Hash + Ord + Debug;

    fn origin(&self) -> Self::Site;

    /// `(m, d)` this graph was built with; must match the ModelParams.
    fn radius_spec(&self) -> (u32, u32);

    /// Number of alpha-mass channels at `site`: `(2m+1)^d` in general,
    /// 0 on comb teeth.
    fn alpha_target_count(&self, site: &Self::Site) -> u64;

    /// Target of alpha channel `idx < alpha_target_count(site)`.
    fn alpha_target(&self, site: &Self::Site, idx: u64) -> Self::Site;

    fn long_neighbor(&self, site: &Self::Site) -> Self::Site;

    /// Stable key identifying `site` in trial streams.
    fn site_key(&self, site: &Self::Site) -> u64;

    /// Uniform random site from a 64-bit word; `None` on infinite graphs.
    fn uniform_site(&self, word: u64) -> Option<Self::Site>;

    /// Number of vertices; `None` on infinite graphs.
    fn vertex_count(&self) -> Option<u64>;
}

impl SiteGraph for BigWorld {
    type Site = BigWorldAddress;

    fn origin(&self) -> BigWorldAddress {
        BigWorldAddress::origin(self.d())
    }

    fn radius_spec(&self) -> (u32, u32) {
        (self.m(), self.d())
    }

    fn alpha_target_count(&self, _site: &BigWorldAddress) -> u64 {
        (2 * self.m() as u64 + 1).pow(self.d())
    }

    fn alpha_target(&self, site: &BigWorldAddress, idx: u64) -> BigWorldAddress {
        if idx == 0 {
            site.clone()
        } else {
            site.with_last_shifted(self.offset(idx as usize - 1))
        }
    }

    fn long_neighbor(&self, site: &BigWorldAddress) -> BigWorldAddress {
        site.long_neighbor()
    }

    fn site_key(&self, site: &BigWorldAddress) -> u64 {
        site.site_key()
    }

    fn uniform_site(&self, _word: u64) -> Option<BigWorldAddress> {
        None
    }

    fn vertex_count(&self) -> Option<u64> {
        None
    }
}

impl SiteGraph for Comb {
    type Site = BigWorldAddress;

    fn origin(&self) -> BigWorldAddress {
        BigWorldAddress::origin(self.d())
    }

    fn radius_spec(&self) -> (u32, u32) {
        (self.m(), self.d())
    }

    /// Spine sites carry the full alpha mass; teeth and `-(0)` carry none.
    fn alpha_target_count(&self, site: &BigWorldAddress) -> u64 {
        match classify_comb_vertex(site) {
            Some(CombVertex::Spine) => (2 * self.m() as u64 + 1).pow(self.d()),
            _ => 0,
        }
    }

    fn alpha_target(&self, site: &BigWorldAddress, idx: u64) -> BigWorldAddress {
        if idx == 0 {
            site.clone()
        } else {
            site.with_last_shifted(self.offset(idx as usize - 1))
        }
    }

    fn long_neighbor(&self, site: &BigWorldAddress) -> BigWorldAddress {
        site.long_neighbor()
    }

    fn site_key(&self, site: &BigWorldAddress) -> u64 {
        site.site_key()
    }

    fn uniform_site(&self, _word: u64) -> Option<BigWorldAddress> {
        None
    }

    fn vertex_count(&self) -> Option<u64> {
        None
    }
}

impl SiteGraph for SmallWorldGraph {
    type Site = u32;

    fn origin(&self) -> u32 {
        0
    }

    fn radius_spec(&self) -> (u32, u32) {
        (self.m(), self.d())
    }

    fn alpha_target_count(&self, _site: &u32) -> u64 {
        (2 * self.m() as u64 + 1).pow(self.d())
    }

    fn alpha_target(&self, site: &u32, idx: u64) -> u32 {
        if idx == 0 {
            *site
        } else {
            self.short_neighbor_at(*site, idx as usize - 1)
        }
    }

    fn long_neighbor(&self, site: &u32) -> u32 {
        self.matched_partner(*site)
    }

    fn site_key(&self, site: &u32) -> u64 {
        mix(*site as u64 ^ 0xF1EA_5EED_0BAD_C0DE)
    }

    fn uniform_site(&self, word: u64) -> Option<u32> {
        Some(bounded(word, self.vertex_count()) as u32)
    }

    fn vertex_count(&self) -> Option<u64> {
        Some(SmallWorldGraph::vertex_count(self))
    }
}
