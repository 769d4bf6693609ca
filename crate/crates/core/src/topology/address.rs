//! Canonical vertex names on the infinite big-world graph.

use crate::error::{Error, Result};
use crate::rng::mix;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A big-world vertex `±(z_1, ..., z_n)`: a sign and a nonempty sequence
/// of d-dimensional integer offsets with `z_j != 0` for every `j < n`.
/// The offsets are stored flattened as `n * d` coordinates.
///
/// Addresses are canonical: two vertices are equal iff sign and the full
/// offset sequence agree. A stable 64-bit key is precomputed at
/// construction for hashing and for keying infection trials.
#[derive(Clone, Debug)]
pub struct BigWorldAddress {
    sign: Sign,
    dim: u32,
    coords: Vec<i64>,
    key: u64,
}

fn address_key(sign: Sign, dim: u32, coords: &[i64]) -> u64 {
    let mut h: u64 = match sign {
        Sign::Plus => 0x2B,
        Sign::Minus => 0x2D,
    };
    h = mix(h ^ (dim as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for &c in coords {
        h = mix(h ^ (c as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
    }
    h
}

impl BigWorldAddress {
    /// Validate and build an address from flattened coordinates.
    pub fn new(sign: Sign, coords: Vec<i64>, dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid_argument("address dimension must be >= 1"));
        }
        if coords.is_empty() || coords.len() % dim as usize != 0 {
            return Err(Error::invalid_argument(format!(
                "address needs a nonempty whole number of {dim}-dimensional offsets, got {} coordinates",
                coords.len()
            )));
        }
        let level = coords.len() / dim as usize;
        for j in 0..level - 1 {
            let block = &coords[j * dim as usize..(j + 1) * dim as usize];
            if block.iter().all(|&c| c == 0) {
                return Err(Error::invalid_argument(format!(
                    "interior offset z_{} must be nonzero",
                    j + 1
                )));
            }
        }
        let key = address_key(sign, dim, &coords);
        Ok(BigWorldAddress {
            sign,
            dim,
            coords,
            key,
        })
    }

    /// The origin `+(0)` in dimension `d`.
    pub fn origin(dim: u32) -> Self {
        let coords = vec![0i64; dim as usize];
        let key = address_key(Sign::Plus, dim, &coords);
        BigWorldAddress {
            sign: Sign::Plus,
            dim,
            coords,
            key,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Number of offsets `n >= 1`.
    pub fn level(&self) -> usize {
        self.coords.len() / self.dim as usize
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn offset(&self, j: usize) -> &[i64] {
        &self.coords[j * self.dim as usize..(j + 1) * self.dim as usize]
    }

    pub fn last_offset(&self) -> &[i64] {
        self.offset(self.level() - 1)
    }

    pub fn last_offset_is_zero(&self) -> bool {
        self.last_offset().iter().all(|&c| c == 0)
    }

    /// Stable key for keyed trial streams and fast hashing.
    pub fn site_key(&self) -> u64 {
        self.key
    }

    /// Same sign and prefix, last offset shifted by `y` (len d).
    pub fn with_last_shifted(&self, y: &[i64]) -> Self {
        debug_assert_eq!(y.len(), self.dim as usize);
        let mut coords = self.coords.clone();
        let base = coords.len() - self.dim as usize;
        for (i, &dy) in y.iter().enumerate() {
            coords[base + i] += dy;
        }
        let key = address_key(self.sign, self.dim, &coords);
        BigWorldAddress {
            sign: self.sign,
            dim: self.dim,
            coords,
            key,
        }
    }

    /// The long-range partner: append a zero offset if `z_n != 0`, drop
    /// the last offset if `z_n = 0` and `n > 1`, flip sign at `±(0)`.
    /// This map is a fixed-point-free involution.
    pub fn long_neighbor(&self) -> Self {
        let d = self.dim as usize;
        if !self.last_offset_is_zero() {
            let mut coords = Vec::with_capacity(self.coords.len() + d);
            coords.extend_from_slice(&self.coords);
            coords.extend(std::iter::repeat(0i64).take(d));
            let key = address_key(self.sign, self.dim, &coords);
            BigWorldAddress {
                sign: self.sign,
                dim: self.dim,
                coords,
                key,
            }
        } else if self.level() > 1 {
            let coords = self.coords[..self.coords.len() - d].to_vec();
            let key = address_key(self.sign, self.dim, &coords);
            BigWorldAddress {
                sign: self.sign,
                dim: self.dim,
                coords,
                key,
            }
        } else {
            let sign = self.sign.flipped();
            let key = address_key(sign, self.dim, &self.coords);
            BigWorldAddress {
                sign,
                dim: self.dim,
                coords: self.coords.clone(),
                key,
            }
        }
    }
}

impl PartialEq for BigWorldAddress {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
            && self.sign == other.sign
            && self.dim == other.dim
            && self.coords == other.coords
    }
}

impl Eq for BigWorldAddress {}

impl Hash for BigWorldAddress {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.key);
    }
}

impl PartialOrd for BigWorldAddress {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigWorldAddress {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sign
            .cmp(&other.sign)
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

/// Textual form `+(z1;...;zn)` with each `zi` a comma-separated d-tuple,
/// e.g. `+(2,0;1,-1)` for d = 2.
impl fmt::Display for BigWorldAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", if self.sign == Sign::Plus { '+' } else { '-' })?;
        for j in 0..self.level() {
            if j > 0 {
                write!(f, ";")?;
            }
            for (i, c) in self.offset(j).iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
        }
        write!(f, ")")
    }
}

impl FromStr for BigWorldAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, rest) = match s.chars().next() {
            Some('+') => (Sign::Plus, &s[1..]),
            Some('-') => (Sign::Minus, &s[1..]),
            _ => {
                return Err(Error::Parse(format!(
                    "address must start with + or -: {s:?}"
                )))
            }
        };
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("address offsets must be parenthesized: {s:?}")))?;
        let mut coords = Vec::new();
        let mut dim = None;
        for tuple in inner.split(';') {
            let parts: Vec<&str> = tuple.split(',').collect();
            match dim {
                None => dim = Some(parts.len()),
                Some(d) if d != parts.len() => {
                    return Err(Error::Parse(format!(
                        "inconsistent offset dimensions in {s:?}"
                    )))
                }
                _ => {}
            }
            for p in parts {
                coords.push(
                    p.trim()
                        .parse::<i64>()
                        .map_err(|e| Error::Parse(format!("bad coordinate {p:?} in {s:?}: {e}")))?,
                );
            }
        }
        let dim = dim.unwrap_or(0) as u32;
        BigWorldAddress::new(sign, coords, dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(s: &str) -> BigWorldAddress {
        s.parse().unwrap()
    }

    #[test]
    fn display_round_trip() {
        for s in ["+(0)", "-(0)", "+(2;0)", "-(3;-1;0)", "+(2,0;1,-1)"] {
            assert_eq!(addr(s).to_string(), s);
        }
    }

    #[test]
    fn interior_zero_offsets_are_rejected() {
        assert!("+(0;1)".parse::<BigWorldAddress>().is_err());
        assert!("+(1;0;2)".parse::<BigWorldAddress>().is_err());
        assert!("+(1;0)".parse::<BigWorldAddress>().is_ok());
        assert!("+(0,1;1,-1)".parse::<BigWorldAddress>().is_ok());
        assert!("+(0,0;1,-1)".parse::<BigWorldAddress>().is_err());
    }

    #[test]
    fn long_neighbor_three_cases() {
        assert_eq!(addr("+(2)").long_neighbor(), addr("+(2;0)"));
        assert_eq!(addr("+(2;0)").long_neighbor(), addr("+(2)"));
        assert_eq!(addr("+(0)").long_neighbor(), addr("-(0)"));
        assert_eq!(addr("-(0)").long_neighbor(), addr("+(0)"));
        assert_eq!(addr("-(5;3)").long_neighbor(), addr("-(5;3;0)"));
    }

    #[test]
    fn origin_is_plus_zero() {
        assert_eq!(BigWorldAddress::origin(1), addr("+(0)"));
        assert_eq!(BigWorldAddress::origin(2).to_string(), "+(0,0)");
    }

    #[test]
    fn level_counts_offsets() {
        assert_eq!(addr("+(0)").level(), 1);
        assert_eq!(addr("+(2;0)").level(), 2);
        assert_eq!(addr("+(2,0;1,-1)").level(), 2);
    }
}
