//! Oracle-backed matroids: concrete families (uniform, partition, graphic,
//! linear over GF(p)) and wrappers (truncation, free extension, restriction).
//!
//! Handles are immutable after construction and usable concurrently. All rank
//! and independence evaluation goes through [`Scanner`], which supports
//! incremental feeding so batched query patterns stay cheap.

pub mod gf;
pub mod scanner;
pub mod union_find;

use std::sync::Arc;

pub use scanner::Scanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MatroidHandle {
    desc: Desc,
    ground: Arc<Vec<usize>>,
    universe: usize,
}

#[derive(Debug, Clone)]
enum Desc {
    Uniform {
        k: usize,
    },
    Partition {
        block_of: Arc<Vec<Option<usize>>>,
        caps: Arc<Vec<usize>>,
    },
    Graphic {
        num_vertices: usize,
        edges: Arc<Vec<(usize, usize)>>,
    },
    Linear {
        p: u64,
        cols: Arc<Vec<Vec<u64>>>,
    },
    Truncate {
        inner: Arc<MatroidHandle>,
        k: usize,
    },
    FreeExtend {
        inner: Arc<MatroidHandle>,
        base_universe: usize,
    },
    Restrict {
        inner: Arc<MatroidHandle>,
        member: Arc<Vec<bool>>,
    },
}

impl MatroidHandle {
    pub fn uniform(n: usize, k: usize) -> Self {
        MatroidHandle {
            desc: Desc::Uniform { k },
            ground: Arc::new((0..n).collect()),
            universe: n,
        }
    }

    /// Blocks must cover every element of `0..n` exactly once.
    pub fn partition(n: usize, blocks: &[Vec<usize>], capacities: &[usize]) -> Result<Self> {
        if blocks.len() != capacities.len() {
            return Err(Error::input(
                "partition: blocks and capacities differ in length",
            ));
        }
        let mut block_of = vec![None; n];
        for (b, members) in blocks.iter().enumerate() {
            for &e in members {
                if e >= n {
                    return Err(Error::input(format!("partition: element {e} out of range")));
                }
                if block_of[e].is_some() {
                    return Err(Error::input(format!(
                        "partition: element {e} in two blocks"
                    )));
                }
                block_of[e] = Some(b);
            }
        }
        if let Some(e) = block_of.iter().position(|b| b.is_none()) {
            return Err(Error::input(format!(
                "partition: element {e} not in any block"
            )));
        }
        Ok(MatroidHandle {
            desc: Desc::Partition {
                block_of: Arc::new(block_of),
                caps: Arc::new(capacities.to_vec()),
            },
            ground: Arc::new((0..n).collect()),
            universe: n,
        })
    }

    /// Element `i` is edge `i`.
    pub fn graphic(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        for &(u, v) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::input("graphic: edge endpoint out of range"));
            }
        }
        Ok(MatroidHandle {
            desc: Desc::Graphic {
                num_vertices,
                edges: Arc::new(edges.to_vec()),
            },
            ground: Arc::new((0..edges.len()).collect()),
            universe: edges.len(),
        })
    }

    /// Element `i` is column `i`; all columns share a dimension, `p` prime.
    pub fn linear(p: u64, columns: &[Vec<u64>]) -> Result<Self> {
        if !(2..1 << 31).contains(&p) {
            return Err(Error::input("linear: p must be a prime below 2^31"));
        }
        let dim = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != dim) {
            return Err(Error::input("linear: ragged column dimensions"));
        }
        let cols = columns
            .iter()
            .map(|c| c.iter().map(|&x| x % p).collect())
            .collect();
        Ok(MatroidHandle {
            desc: Desc::Linear {
                p,
                cols: Arc::new(cols),
            },
            ground: Arc::new((0..columns.len()).collect()),
            universe: columns.len(),
        })
    }

    pub fn truncate(&self, k: usize) -> Self {
        MatroidHandle {
            desc: Desc::Truncate {
                inner: Arc::new(self.clone()),
                k,
            },
            ground: Arc::clone(&self.ground),
            universe: self.universe,
        }
    }

    /// Direct sum with a free matroid of `d` fresh elements; the new ids are
    /// appended after the current universe so existing ids stay stable.
    pub fn free_extend(&self, d: usize) -> Self {
        let mut ground: Vec<usize> = self.ground.as_ref().clone();
        ground.extend(self.universe..self.universe + d);
        MatroidHandle {
            desc: Desc::FreeExtend {
                inner: Arc::new(self.clone()),
                base_universe: self.universe,
            },
            ground: Arc::new(ground),
            universe: self.universe + d,
        }
    }

    /// Restrict the ground set to `subset` (ids keep their meaning).
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let mut member = vec![false; self.universe];
        let mut ground: Vec<usize> = Vec::with_capacity(subset.len());
        for &e in subset {
            if e >= self.universe || !self.in_ground(e) {
                return Err(Error::input(format!(
                    "restrict: element {e} not in ground set"
                )));
            }
            if !member[e] {
                member[e] = true;
                ground.push(e);
            }
        }
        ground.sort_unstable();
        Ok(MatroidHandle {
            desc: Desc::Restrict {
                inner: Arc::new(self.clone()),
                member: Arc::new(member),
            },
            ground: Arc::new(ground),
            universe: self.universe,
        })
    }

    /// Sorted element ids of the ground set.
    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    pub fn ground_size(&self) -> usize {
        self.ground.len()
    }

    /// Exclusive upper bound on element ids (for dense per-element arrays).
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn in_ground(&self, e: usize) -> bool {
        match &self.desc {
            Desc::Restrict { member, .. } => e < self.universe && member[e],
            _ if self.ground.len() == self.universe => e < self.universe,
            _ => self.ground.binary_search(&e).is_ok(),
        }
    }

    pub fn scanner(&self) -> Scanner<'_> {
        match &self.desc {
            Desc::Uniform { k } => Scanner::Uniform { k: *k, count: 0 },
            Desc::Partition { block_of, caps } => Scanner::Partition {
                block_of,
                caps,
                counts: vec![0; caps.len()],
            },
            Desc::Graphic {
                num_vertices,
                edges,
            } => Scanner::Graphic {
                edges,
                uf: union_find::UnionFind::new(*num_vertices),
            },
            Desc::Linear { p, cols } => {
                let dim = cols.first().map_or(0, |c| c.len());
                Scanner::Linear {
                    cols,
                    basis: gf::ReducedBasis::new(*p, dim),
                }
            }
            Desc::Truncate { inner, k } => Scanner::Truncate {
                inner: Box::new(inner.scanner()),
                k: *k,
                rank: 0,
            },
            Desc::FreeExtend {
                inner,
                base_universe,
            } => Scanner::FreeExtend {
                inner: Box::new(inner.scanner()),
                base_universe: *base_universe,
            },
            Desc::Restrict { inner, member } => Scanner::Restrict {
                inner: Box::new(inner.scanner()),
                member,
            },
        }
    }

    /// Rank evaluation without ledger accounting (input validation, debug
    /// assertions, and test oracles only — algorithm code must count queries).
    pub fn raw_rank(&self, set: &[usize]) -> usize {
        self.scanner().insert_all(set)
    }

    pub fn raw_independent(&self, set: &[usize]) -> bool {
        let mut sc = self.scanner();
        set.iter().all(|&e| sc.insert(e))
    }

    /// Rank of the whole matroid, uncounted.
    pub fn raw_matroid_rank(&self) -> usize {
        self.raw_rank(&self.ground)
    }

    pub fn check_subset(&self, set: &[usize]) -> Result<()> {
        for &e in set {
            if !self.in_ground(e) {
                return Err(Error::input(format!("element {e} outside ground set")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> MatroidHandle {
        MatroidHandle::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn uniform_independence() {
        let m = MatroidHandle::uniform(4, 2);
        assert!(m.raw_independent(&[0, 1]));
        assert!(!m.raw_independent(&[0, 1, 2]));
    }

    #[test]
    fn graphic_triangle() {
        let m = triangle();
        assert!(!m.raw_independent(&[0, 1, 2]));
        assert_eq!(m.raw_rank(&[0, 1, 2]), 2);
    }

    #[test]
    fn linear_gf2() {
        let m = MatroidHandle::linear(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(!m.raw_independent(&[0, 1, 2]));
        assert_eq!(m.raw_rank(&[0, 1, 2]), 2);
    }

    #[test]
    fn partition_rank() {
        let m = MatroidHandle::partition(4, &[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap();
        assert_eq!(m.raw_rank(&[0, 1, 2]), 2);
        assert!(!m.raw_independent(&[0, 1]));
    }

    #[test]
    fn truncation_caps_rank() {
        let m = MatroidHandle::uniform(5, 5).truncate(3);
        assert_eq!(m.raw_rank(&[0, 1, 2, 3, 4]), 3);
        let t1 = triangle().truncate(1);
        assert!(!t1.raw_independent(&[0, 1]));
    }

    #[test]
    fn free_extension_dummies() {
        let m = MatroidHandle::uniform(2, 1).free_extend(2);
        assert!(m.raw_independent(&[2, 3]));
        assert!(m.raw_independent(&[0, 2, 3]));
        assert!(!m.raw_independent(&[0, 1]));
        assert_eq!(m.ground(), &[0, 1, 2, 3]);
    }

    #[test]
    fn restriction_inherits() {
        let m = MatroidHandle::partition(4, &[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap();
        let r = m.restrict(&[0, 2]).unwrap();
        assert_eq!(r.raw_rank(&[0, 2]), 2);
        assert!(r.restrict(&[1]).is_err() || !r.in_ground(1));
    }

    #[test]
    fn restrict_rejects_foreign_elements() {
        let m = MatroidHandle::uniform(3, 2);
        assert!(m.restrict(&[5]).is_err());
    }
}
