//! The comparison graph K_M: copies of Z^d replaced by complete graphs on
//! M = (2m+1)^d vertices, with the root stripped of short-range neighbors.
//! Its simple random walk projects onto a birth-and-death chain on the
//! nonnegative integers through the state map `phi`.

use crate::error::{Error, Result};

/// A K_M vertex `(z_1, ..., z_n)` with `z_1 = 0`, `0 <= z_j < M`, and
/// `z_j != 0` for `1 < j < n`. The root is `(0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KmAddress {
    offsets: Vec<u32>,
}

impl KmAddress {
    pub fn new(offsets: Vec<u32>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::invalid_argument(
                "K_M address needs at least one offset",
            ));
        }
        if offsets[0] != 0 {
            return Err(Error::invalid_argument(
                "K_M address must start with z_1 = 0",
            ));
        }
        let n = offsets.len();
        for (j, &z) in offsets.iter().enumerate() {
            if j > 0 && j < n - 1 && z == 0 {
                return Err(Error::invalid_argument(format!(
                    "interior offset z_{} must be nonzero",
                    j + 1
                )));
            }
        }
        Ok(KmAddress { offsets })
    }

    pub fn root() -> Self {
        KmAddress { offsets: vec![0] }
    }

    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    pub fn level(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_root(&self) -> bool {
        self.offsets.len() == 1
    }

    fn last(&self) -> u32 {
        *self.offsets.last().unwrap()
    }

    /// Birth-and-death chain state: the root maps to 0; for `n >= 2`,
    /// `(z_1,...,z_{n-1},0)` maps to `2n-3` and `(z_1,...,z_n)` with
    /// `z_n != 0` maps to `2n-2`.
    pub fn phi(&self) -> u64 {
        let n = self.level() as u64;
        if n == 1 {
            0
        } else if self.last() == 0 {
            2 * n - 3
        } else {
            2 * n - 2
        }
    }

    /// Long-range partner. The root attaches to `(0, 0)`; elsewhere the
    /// append/drop rule of the big world applies.
    pub fn long_neighbor(&self) -> Self {
        if self.is_root() || self.last() != 0 {
            let mut offsets = self.offsets.clone();
            offsets.push(0);
            KmAddress { offsets }
        } else {
            KmAddress {
                offsets: self.offsets[..self.offsets.len() - 1].to_vec(),
            }
        }
    }

    /// The other `M - 1` vertices of this vertex's complete-graph copy.
    /// The root has none.
    pub fn short_neighbors(&self, m_sites: u32) -> Vec<KmAddress> {
        if self.is_root() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(m_sites as usize - 1);
        for w in 0..m_sites {
            if w != self.last() {
                let mut offsets = self.offsets.clone();
                *offsets.last_mut().unwrap() = w;
                out.push(KmAddress { offsets });
            }
        }
        out
    }

    fn validate_against(&self, m_sites: u32) -> Result<()> {
        if m_sites < 2 {
            return Err(Error::invalid_argument("K_M needs M >= 2"));
        }
        if let Some(&z) = self.offsets.iter().find(|&&z| z >= m_sites) {
            return Err(Error::invalid_argument(format!(
                "offset {z} out of range for M = {m_sites}"
            )));
        }
        Ok(())
    }
}

/// All neighbors of `a` in K_M: the complete-copy co-members (none for the
/// root) followed by the long-range partner.
pub fn km_neighbors(a: &KmAddress, m_sites: u32) -> Result<Vec<KmAddress>> {
    a.validate_against(m_sites)?;
    let mut v = a.short_neighbors(m_sites);
    v.push(a.long_neighbor());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn km(offsets: &[u32]) -> KmAddress {
        KmAddress::new(offsets.to_vec()).unwrap()
    }

    #[test]
    fn root_has_single_neighbor_with_phi_one() {
        let n = km_neighbors(&KmAddress::root(), 5).unwrap();
        assert_eq!(n, vec![km(&[0, 0])]);
        assert_eq!(n[0].phi(), 1);
    }

    #[test]
    fn copy_co_members_map_to_two() {
        // The root's partner (0,0) has co-members (0,w), w != 0, all at state 2.
        let n = km_neighbors(&km(&[0, 0]), 5).unwrap();
        assert_eq!(n.len(), 5);
        let (shorts, long) = n.split_at(4);
        for s in shorts {
            assert_eq!(s.phi(), 2);
        }
        assert_eq!(long[0], KmAddress::root());
    }

    #[test]
    fn non_root_degree_is_m() {
        for a in [km(&[0, 0]), km(&[0, 3]), km(&[0, 2, 0]), km(&[0, 2, 4])] {
            assert_eq!(km_neighbors(&a, 5).unwrap().len(), 5);
        }
    }

    #[test]
    fn phi_changes_by_at_most_one_across_edges() {
        let m_sites = 4;
        let mut frontier = vec![KmAddress::root()];
        let mut seen = std::collections::HashSet::new();
        seen.insert(frontier[0].clone());
        for _ in 0..5 {
            let mut next = Vec::new();
            for a in &frontier {
                for b in km_neighbors(a, m_sites).unwrap() {
                    let da = a.phi() as i64;
                    let db = b.phi() as i64;
                    assert!((da - db).abs() <= 1, "{:?} -> {:?}", a, b);
                    if seen.insert(b.clone()) {
                        next.push(b);
                    }
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn validity_rules() {
        assert!(KmAddress::new(vec![]).is_err());
        assert!(KmAddress::new(vec![1]).is_err());
        assert!(KmAddress::new(vec![0, 0, 2]).is_err());
        assert!(KmAddress::new(vec![0, 2, 0]).is_ok());
        assert!(km_neighbors(&km(&[0, 3]), 3).is_err()); // offset out of range
    }

    #[test]
    fn long_neighbor_is_involution() {
        for a in [KmAddress::root(), km(&[0, 0]), km(&[0, 3]), km(&[0, 2, 0])] {
            assert_eq!(a.long_neighbor().long_neighbor(), a);
        }
    }
}
