//! The comb: the big world restricted to `{+(z), +(z,0), -(0)}`.
//!
//! Spine sites `+(z)` keep their full short-range neighborhood and hang a
//! tooth below; teeth and `-(0)` have no short-range neighbors and carry
//! no alpha mass, matching the two-level structure whose largest eigenvalue
//! determines the branching random walk critical value.

use super::address::{BigWorldAddress, Sign};
use super::big_world::ball_offsets;
use crate::error::{Error, Result};

/// Classification of a comb vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombVertex {
    /// `+(z)`: level-1 positive site.
    Spine,
    /// `+(z, 0)` with `z != 0`.
    Tooth,
    /// `-(0)`: the tooth of the origin.
    MinusOrigin,
}

pub fn classify_comb_vertex(a: &BigWorldAddress) -> Option<CombVertex> {
    match (a.sign(), a.level()) {
        (Sign::Plus, 1) => Some(CombVertex::Spine),
        (Sign::Plus, 2) if a.last_offset_is_zero() => Some(CombVertex::Tooth),
        (Sign::Minus, 1) if a.last_offset_is_zero() => Some(CombVertex::MinusOrigin),
        _ => None,
    }
}

pub fn is_comb_vertex(a: &BigWorldAddress) -> bool {
    classify_comb_vertex(a).is_some()
}

/// Neighbors of a comb vertex within the comb. Spine sites list their
/// `(2m+1)^d - 1` short-range neighbors followed by the long-range
/// partner; teeth and `-(0)` have exactly their long-range partner.
pub fn comb_neighbors(a: &BigWorldAddress, m: u32, d: u32) -> Result<Vec<BigWorldAddress>> {
    if a.dim() != d {
        return Err(Error::invalid_argument(format!(
            "address dimension {} does not match d = {d}",
            a.dim()
        )));
    }
    match classify_comb_vertex(a) {
        Some(CombVertex::Spine) => {
            let mut v: Vec<BigWorldAddress> = ball_offsets(m, d)
                .iter()
                .map(|y| a.with_last_shifted(y))
                .collect();
            v.push(a.long_neighbor());
            Ok(v)
        }
        Some(CombVertex::Tooth) | Some(CombVertex::MinusOrigin) => Ok(vec![a.long_neighbor()]),
        None => Err(Error::invalid_argument(format!("{a} is not a comb vertex"))),
    }
}

/// The comb as a stepping target for the dynamics.
#[derive(Clone, Debug)]
pub struct Comb {
    m: u32,
    d: u32,
    offsets: Vec<Vec<i64>>,
}

impl Comb {
    pub fn new(m: u32, d: u32) -> Self {
        Comb {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::big_world::big_world_neighbors;

    fn addr(s: &str) -> BigWorldAddress {
        s.parse().unwrap()
    }

    #[test]
    fn spine_neighbors() {
        let n = comb_neighbors(&addr("+(1)"), 1, 1).unwrap();
        assert_eq!(n, vec![addr("+(0)"), addr("+(2)"), addr("+(1;0)")]);
    }

    #[test]
    fn origin_tooth_is_minus_zero() {
        let n = comb_neighbors(&addr("+(0)"), 1, 1).unwrap();
        assert_eq!(n, vec![addr("+(-1)"), addr("+(1)"), addr("-(0)")]);
        assert_eq!(
            comb_neighbors(&addr("-(0)"), 1, 1).unwrap(),
            vec![addr("+(0)")]
        );
    }

    #[test]
    fn teeth_have_degree_one() {
        assert_eq!(
            comb_neighbors(&addr("+(3;0)"), 1, 1).unwrap(),
            vec![addr("+(3)")]
        );
    }

    #[test]
    fn non_comb_vertices_are_rejected() {
        for s in ["+(1;2)", "-(1)", "+(1;0;2)", "-(0;0)"] {
            let a: BigWorldAddress = match s.parse() {
                Ok(a) => a,
                Err(_) => continue, // some are invalid addresses outright
            };
            assert!(comb_neighbors(&a, 1, 1).is_err(), "{s} accepted");
        }
    }

    #[test]
    fn comb_equals_big_world_restriction() {
        // For every comb vertex, comb neighbors = big-world neighbors
        // intersected with the comb vertex set.
        for m in 1..=3u32 {
            for z in -50i64..=50 {
                let mut vertices = vec![BigWorldAddress::new(Sign::Plus, vec![z], 1).unwrap()];
                if z != 0 {
                    vertices.push(BigWorldAddress::new(Sign::Plus, vec![z, 0], 1).unwrap());
                } else {
                    vertices.push(BigWorldAddress::new(Sign::Minus, vec![0], 1).unwrap());
                }
                for a in vertices {
                    let mut expected: Vec<BigWorldAddress> = big_world_neighbors(&a, m, 1)
                        .into_iter()
                        .filter(is_comb_vertex)
                        .collect();
                    let mut actual = comb_neighbors(&a, m, 1).unwrap();
                    expected.sort();
                    actual.sort();
                    assert_eq!(actual, expected, "mismatch at {a}, m={m}");
                }
            }
        }
    }
}
