//! Incremental rank evaluation.
//!
//! A `Scanner` consumes elements one at a time and reports whether each one
//! increased the rank of the set fed so far. Feeding a set `S` element by
//! element yields `rank(S)` as the number of `true` answers, and `S` is
//! independent iff every answer was `true`. Oracle batch helpers use scanners
//! so that chains of related queries (prefixes, single-element swaps) are
//! evaluated in time proportional to the elements touched, not re-evaluated
//! from scratch per query.

use super::gf::ReducedBasis;
use super::union_find::UnionFind;

#[derive(Debug, Clone)]
pub enum Scanner<'a> {
    Uniform {
        k: usize,
        count: usize,
    },
    Partition {
        block_of: &'a [Option<usize>],
        caps: &'a [usize],
        counts: Vec<u32>,
    },
    Graphic {
        edges: &'a [(usize, usize)],
        uf: UnionFind,
    },
    Linear {
        cols: &'a [Vec<u64>],
        basis: ReducedBasis,
    },
    Truncate {
        inner: Box<Scanner<'a>>,
        k: usize,
        rank: usize,
    },
    FreeExtend {
        inner: Box<Scanner<'a>>,
        base_universe: usize,
    },
    Restrict {
        inner: Box<Scanner<'a>>,
        member: &'a [bool],
    },
}

impl<'a> Scanner<'a> {
    /// Feed `e`; returns true iff the rank of the accumulated set grew.
    pub fn insert(&mut self, e: usize) -> bool {
        match self {
            Scanner::Uniform { k, count } => {
                if *count < *k {
                    *count += 1;
                    true
                } else {
                    false
                }
            }
            Scanner::Partition {
                block_of,
                caps,
                counts,
            } => {
                let b = block_of[e].expect("element outside every block");
                if (counts[b] as usize) < caps[b] {
                    counts[b] += 1;
                    true
                } else {
                    false
                }
            }
            Scanner::Graphic { edges, uf } => {
                let (u, v) = edges[e];
                uf.union(u, v)
            }
            Scanner::Linear { cols, basis } => basis.insert(&cols[e]),
            Scanner::Truncate { inner, k, rank } => {
                if *rank < *k && inner.insert(e) {
                    *rank += 1;
                    true
                } else {
                    false
                }
            }
            Scanner::FreeExtend {
                inner,
                base_universe,
            } => {
                if e >= *base_universe {
                    true
                } else {
                    inner.insert(e)
                }
            }
            Scanner::Restrict { inner, member } => {
                debug_assert!(member[e], "element outside restricted ground set");
                inner.insert(e)
            }
        }
    }

    /// Would `insert(e)` return true? Does not change the accumulated set
    /// (path compression inside union-find aside).
    pub fn probe(&mut self, e: usize) -> bool {
        match self {
            Scanner::Uniform { k, count } => *count < *k,
            Scanner::Partition {
                block_of,
                caps,
                counts,
            } => {
                let b = block_of[e].expect("element outside every block");
                (counts[b] as usize) < caps[b]
            }
            Scanner::Graphic { edges, uf } => {
                let (u, v) = edges[e];
                !uf.connected(u, v)
            }
            Scanner::Linear { cols, basis } => basis.probe(&cols[e]),
            Scanner::Truncate { inner, k, rank } => *rank < *k && inner.probe(e),
            Scanner::FreeExtend {
                inner,
                base_universe,
            } => e >= *base_universe || inner.probe(e),
            Scanner::Restrict { inner, member } => {
                debug_assert!(member[e], "element outside restricted ground set");
                inner.probe(e)
            }
        }
    }

    /// Feed a whole set; returns its rank.
    pub fn insert_all(&mut self, set: &[usize]) -> usize {
        set.iter().filter(|&&e| self.insert(e)).count()
    }
}
