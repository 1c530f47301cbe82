//! Exhaustive reference oracle for small instances.

use crate::error::{Error, Result};
use crate::matroid::MatroidHandle;

#[derive(Debug, Clone)]
pub struct BruteResult {
    pub max_size: usize,
    pub size_witness: Vec<usize>,
    /// Maximum w(S) over all common independent S (0 when unweighted).
    pub max_weight: i64,
    pub weight_witness: Vec<usize>,
}

/// Enumerate every subset of the ground set. Hard-capped at 20 elements.
pub fn brute_force_intersection(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    w: Option<&[i64]>,
) -> Result<BruteResult> {
    let ground = m1.ground();
    let n = ground.len();
    if n > 20 {
        return Err(Error::input(format!(
            "brute force refuses n = {n} > 20 elements"
        )));
    }
    let mut best = BruteResult {
        max_size: 0,
        size_witness: Vec::new(),
        max_weight: 0,
        weight_witness: Vec::new(),
    };
    let mut subset = Vec::with_capacity(n);
    for mask in 0u32..(1 << n) {
        subset.clear();
        subset.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| ground[i]));
        if !m1.raw_independent(&subset) || !m2.raw_independent(&subset) {
            continue;
        }
        if subset.len() > best.max_size {
            best.max_size = subset.len();
            best.size_witness = subset.clone();
        }
        if let Some(w) = w {
            let weight: i64 = subset.iter().map(|&e| w[e]).sum();
            if weight > best.max_weight {
                best.max_weight = weight;
                best.weight_witness = subset.clone();
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate;

    #[test]
    fn uniform_pair() {
        let m = MatroidHandle::uniform(4, 2);
        let res = brute_force_intersection(&m, &m, None).unwrap();
        assert_eq!(res.max_size, 2);
    }

    #[test]
    fn perfect_matching_3x3() {
        let (m1, m2) = generate::bipartite(3, 3, 1.0, 0).matroids().unwrap();
        assert_eq!(
            brute_force_intersection(&m1, &m2, None).unwrap().max_size,
            3
        );
    }

    #[test]
    fn weighted_2x2() {
        let (m1, m2) = generate::bipartite(2, 2, 1.0, 0).matroids().unwrap();
        let res = brute_force_intersection(&m1, &m2, Some(&[5, 1, 1, 4])).unwrap();
        assert_eq!(res.max_weight, 9);
    }

    #[test]
    fn refuses_large_instances() {
        let m = MatroidHandle::uniform(21, 3);
        assert!(brute_force_intersection(&m, &m, None).is_err());
    }
}
