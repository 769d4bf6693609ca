//! The small world: a d-dimensional torus with L-infinity short-range
//! edges plus a uniform random perfect matching giving every vertex
//! exactly one long-range partner.

use super::address::BigWorldAddress;
use super::big_world::ball_offsets;
use crate::error::{Error, Result};
use crate::fx;
use crate::rng::{mix, SeqRng};

const MATCHING_SALT: u64 = 0x8CB9_2BA7_2F3D_8DD7;

/// `(Z mod R)^d` with short-range radius `m` and a fixed-point-free
/// involutive perfect matching `pi` as the long-range edges.
#[derive(Clone, Debug)]
pub struct SmallWorldGraph {
    side: u32,
    m: u32,
    d: u32,
    seed: u64,
    matching: Vec<u32>,
    offsets: Vec<Vec<i64>>,
}

/// Uniformly random perfect matching on the torus vertices, generated
/// deterministically from `seed` by pairing a Fisher–Yates shuffle.
///
/// Requires `R` even (so a perfect matching exists) and `R >= 2m + 2`
/// (so short-range balls do not wrap onto themselves).
pub fn make_small_world(side: u32, m: u32, d: u32, seed: u64) -> Result<SmallWorldGraph> {
    if m == 0 || d == 0 {
        return Err(Error::invalid_parameter("m and d must be >= 1"));
    }
    if side % 2 != 0 {
        return Err(Error::invalid_parameter(format!(
            "R must be even to admit a perfect matching, got {side}"
        )));
    }
    if side < 2 * m + 2 {
        return Err(Error::invalid_parameter(format!(
            "R must be at least 2m+2 = {} so short-range balls do not wrap, got {side}",
            2 * m + 2
        )));
    }
    let n = (side as u64)
        .checked_pow(d)
        .filter(|&n| n <= u32::MAX as u64)
        .ok_or_else(|| {
            Error::invalid_parameter(format!(
                "R^d = {side}^{d} does not fit in addressable memory"
            ))
        })?;

    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut rng = SeqRng::new(mix(seed ^ MATCHING_SALT));
    rng.shuffle(&mut order);
    let mut matching = vec![0u32; n as usize];
    for pair in order.chunks_exact(2) {
        matching[pair[0] as usize] = pair[1];
        matching[pair[1] as usize] = pair[0];
    }

    Ok(SmallWorldGraph {
        side,
        m,
        d,
        seed,
        matching,
        offsets: ball_offsets(m, d),
    })
}

/// Short-range neighbors (the torus L-infinity ball minus the vertex, in
/// lexicographic offset order) and the matched long-range partner. The
/// partner may coincide with a short-range neighbor: that is a parallel
/// edge, and both infection channels apply independently.
pub fn small_world_neighbors(g: &SmallWorldGraph, v: u32) -> Result<(Vec<u32>, u32)> {
    if (v as u64) >= g.vertex_count() {
        return Err(Error::invalid_argument(format!(
            "vertex {v} out of range for R^d = {}",
            g.vertex_count()
        )));
    }
    Ok((g.short_neighbors(v), g.matched_partner(v)))
}

impl SmallWorldGraph {
    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn vertex_count(&self) -> u64 {
        (self.side as u64).pow(self.d)
    }

    pub fn matching(&self) -> &[u32] {
        &self.matching
    }

    pub fn matched_partner(&self, v: u32) -> u32 {
        self.matching[v as usize]
    }

    fn coords(&self, v: u32) -> Vec<i64> {
        let mut rest = v as u64;
        let side = self.side as u64;
        let mut c = vec![0i64; self.d as usize];
        for i in (0..self.d as usize).rev() {
            c[i] = (rest % side) as i64;
            rest /= side;
        }
        c
    }

    fn encode(&self, coords: &[i64]) -> u32 {
        let side = self.side as i64;
        let mut v: u64 = 0;
        for &c in coords {
            v = v * side as u64 + c.rem_euclid(side) as u64;
        }
        v as u32
    }

    /// Torus translate of `v` by offset `y`.
    pub fn translate(&self, v: u32, y: &[i64]) -> u32 {
        let mut c = self.coords(v);
        for (ci, yi) in c.iter_mut().zip(y) {
            *ci += yi;
        }
        self.encode(&c)
    }

    pub fn short_neighbors(&self, v: u32) -> Vec<u32> {
        self.offsets.iter().map(|y| self.translate(v, y)).collect()
    }

    pub(crate) fn short_neighbor_at(&self, v: u32, i: usize) -> u32 {
        self.translate(v, &self.offsets[i])
    }

    /// Diagnostic: matched pairs that are also short-range neighbors.
    /// The matching is allowed to produce them (parallel edges).
    pub fn parallel_edge_pairs(&self) -> u64 {
        let m = self.m as i64;
        let side = self.side as i64;
        let mut count = 0;
        for v in 0..self.vertex_count() as u32 {
            let w = self.matched_partner(v);
            if w <= v {
                continue;
            }
            let cv = self.coords(v);
            let cw = self.coords(w);
            let near = cv.iter().zip(&cw).all(|(a, b)| {
                let diff = (a - b).rem_euclid(side);
                diff <= m || side - diff <= m
            });
            if near {
                count += 1;
            }
        }
        count
    }

    /// True iff the ball of combined (short + long) radius `k` around `x`
    /// is identical to the big-world ball: the covering map that anchors
    /// the big-world origin at `x` is injective on the radius-`k` ball.
    /// Equivalently, no cycle of length <= 2k passes through `x`.
    pub fn is_ball_treelike(&self, x: u32, k: u32) -> bool {
        let origin = BigWorldAddress::origin(self.d);
        let mut cover: fx::Map<BigWorldAddress, u32> = fx::map_with_capacity(64);
        let mut used: fx::Set<u32> = fx::set_with_capacity(64);
        cover.insert(origin.clone(), x);
        used.insert(x);
        let mut frontier = vec![origin];
        for _ in 0..k {
            let mut next = Vec::new();
            for addr in frontier {
                let base = cover[&addr];
                let push = |n_addr: BigWorldAddress,
                            n_vertex: u32,
                            cover: &mut fx::Map<BigWorldAddress, u32>,
                            used: &mut fx::Set<u32>,
                            next: &mut Vec<BigWorldAddress>|
                 -> bool {
                    match cover.get(&n_addr) {
                        Some(&seen) => seen == n_vertex,
                        None => {
                            if !used.insert(n_vertex) {
                                return false; // two addresses cover one vertex
                            }
                            cover.insert(n_addr.clone(), n_vertex);
                            next.push(n_addr);
                            true
                        }
                    }
                };
                for y in &self.offsets {
                    let n_addr = addr.with_last_shifted(y);
                    let n_vertex = self.translate(base, y);
                    if !push(n_addr, n_vertex, &mut cover, &mut used, &mut next) {
                        return false;
                    }
                }
                let n_addr = addr.long_neighbor();
                let n_vertex = self.matched_partner(base);
                if !push(n_addr, n_vertex, &mut cover, &mut used, &mut next) {
                    return false;
                }
            }
            frontier = next;
        }
        true
    }

    /// Serialize as a header line `R m d seed` followed by the matching,
    /// one integer per line.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.matching.len() * 8 + 32);
        s.push_str(&format!(
            "{} {} {} {}\n",
            self.side, self.m, self.d, self.seed
        ));
        for &w in &self.matching {
            s.push_str(&format!("{w}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "expected header 'R m d seed', got {header:?}"
            )));
        }
        let side: u32 = fields[0]
            .parse()
            .map_err(|e| Error::Parse(format!("bad R: {e}")))?;
        let m: u32 = fields[1]
            .parse()
            .map_err(|e| Error::Parse(format!("bad m: {e}")))?;
        let d: u32 = fields[2]
            .parse()
            .map_err(|e| Error::Parse(format!("bad d: {e}")))?;
        let seed: u64 = fields[3]
            .parse()
            .map_err(|e| Error::Parse(format!("bad seed: {e}")))?;
        if side % 2 != 0 || side < 2 * m + 2 || m == 0 || d == 0 {
            return Err(Error::Parse("invalid graph header parameters".into()));
        }
        let n = (side as u64).pow(d);
        let mut matching = Vec::with_capacity(n as usize);
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            matching.push(
                line.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad matching entry: {e}")))?,
            );
        }
        if matching.len() as u64 != n {
            return Err(Error::Parse(format!(
                "matching has {} entries, expected {n}",
                matching.len()
            )));
        }
        for (v, &w) in matching.iter().enumerate() {
            if w as u64 >= n || w as usize == v || matching[w as usize] as usize != v {
                return Err(Error::Parse(format!(
                    "matching is not a fixed-point-free involution at vertex {v}"
                )));
            }
        }
        Ok(SmallWorldGraph {
            side,
            m,
            d,
            seed,
            matching,
            offsets: ball_offsets(m, d),
        })
    }
}
