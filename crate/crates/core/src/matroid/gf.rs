//! Arithmetic over the prime field GF(p), p < 2^31, and an incremental
//! row-reduced basis used for linear matroid rank queries.

pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

/// Row-reduced set of vectors over GF(p). Each stored vector is normalized to
/// have a leading 1 at its pivot position, and every stored vector is zero at
/// the pivots of the others.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    p: u64,
    dim: usize,
    rows: Vec<(usize, Vec<u64>)>, // (pivot, vector)
}

impl ReducedBasis {
    pub fn new(p: u64, dim: usize) -> Self {
        ReducedBasis {
            p,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64]) {
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for j in 0..self.dim {
                    v[j] = sub(v[j], mul(c, row[j], self.p), self.p);
                }
            }
        }
    }

    /// Does `v` lie outside the current span?
    pub fn probe(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().any(|&x| x != 0)
    }

    /// Insert `v` if it extends the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pivot) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let scale = inv(w[pivot], self.p);
        for x in w.iter_mut() {
            *x = mul(*x, scale, self.p);
        }
        // keep earlier rows reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != 0 {
                for j in 0..self.dim {
                    row[j] = sub(row[j], mul(c, w[j], self.p), self.p);
                }
            }
        }
        self.rows.push((pivot, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_rank() {
        // columns (1,0), (0,1), (1,1) over GF(2): rank 2
        let mut b = ReducedBasis::new(2, 2);
        assert!(b.insert(&[1, 0]));
        assert!(b.insert(&[0, 1]));
        assert!(!b.insert(&[1, 1]));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn gf7_probe_matches_insert() {
        let p = 7;
        let vecs = [[1, 2, 3], [2, 4, 6], [0, 1, 5], [3, 3, 3]];
        let mut b = ReducedBasis::new(p, 3);
        for v in &vecs {
            let free = b.probe(v);
            assert_eq!(free, b.insert(v));
        }
        assert_eq!(b.rank(), 3);
    }
}
