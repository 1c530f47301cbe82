//! Max-weight basis primitives: sequential greedy, the 1-round rank-query
//! algorithm, and bucketed independence-query algorithms with
//! O(sqrt(r) log(n/r)) round behavior.

use crate::error::{Error, Result};
use crate::ledger::{batch_prefix_ranks, chain_independence, QueryLedger, Scan};
use crate::matroid::MatroidHandle;

/// Deterministic scan order: weight descending, preferred membership
/// descending, id ascending. Realizes the "prefer elements of the old basis"
/// tie-break exactly, without perturbing weights.
pub fn tie_break_order(elements: &[usize], w: &[i64], prefer: &[bool]) -> Vec<usize> {
    let mut order: Vec<usize> = elements.to_vec();
    order.sort_by_key(|&e| (std::cmp::Reverse(w[e]), std::cmp::Reverse(prefer[e]), e));
    order
}

pub fn prefer_mask(universe: usize, prefer: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; universe];
    for &e in prefer {
        mask[e] = true;
    }
    mask
}

/// Greedy max-weight basis: exactly n independence queries, returns the
/// TieBreakOrder-lexicographically greedy w-maximum basis, sorted by id.
pub fn greedy_max_weight_basis(
    m: &MatroidHandle,
    w: &[i64],
    prefer: &[bool],
    ledger: &mut QueryLedger,
) -> Vec<usize> {
    let order = tie_break_order(m.ground(), w, prefer);
    ledger.count_independence(order.len() as u64);
    let mut sc = m.scanner();
    let mut basis: Vec<usize> = order.into_iter().filter(|&e| sc.insert(e)).collect();
    basis.sort_unstable();
    basis
}

/// 1-round rank-query algorithm: query all prefixes of the
/// tie-break order in one batch and keep the rank-increase elements.
pub fn parallel_basis_rank(
    m: &MatroidHandle,
    w: &[i64],
    prefer: &[bool],
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    if !ledger.is_parallel() {
        return Err(Error::LedgerMode(
            "parallel-rank basis requires parallel-sim mode".into(),
        ));
    }
    let order = tie_break_order(m.ground(), w, prefer);
    if order.is_empty() {
        return Ok(Vec::new());
    }
    let ranks = batch_prefix_ranks(m, &order, ledger)?;
    let mut basis = Vec::new();
    let mut prev = 0usize;
    for (e, &r) in order.iter().zip(&ranks) {
        if r > prev {
            basis.push(*e);
        }
        prev = r;
    }
    basis.sort_unstable();
    Ok(basis)
}

fn bucket_size(r_hat: usize) -> usize {
    (r_hat as f64).sqrt().ceil() as usize
}

/// Bucketed independence-query basis construction. Each round splits the
/// undecided elements into buckets of size ~sqrt(r_hat) and queries all
/// within-bucket prefixes on top of the current independent set S; either S
/// grows by a full bucket or each failing bucket discards one spanned
/// element. The rank estimate r_hat doubles whenever |S| catches up with it.
pub fn parallel_basis_independence(
    m: &MatroidHandle,
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    if !ledger.is_parallel() {
        return Err(Error::LedgerMode(
            "parallel-independence basis requires parallel-sim mode".into(),
        ));
    }
    let mut s: Vec<usize> = Vec::new();
    let mut pending: Vec<usize> = m.ground().to_vec();
    let mut r_hat = 1usize;
    while !pending.is_empty() {
        while s.len() >= r_hat {
            r_hat *= 2;
        }
        let b = bucket_size(r_hat);
        ledger.begin_round()?;
        let base = Scan::of(m, &s);
        let mut grow: Option<(usize, usize)> = None; // (start, len) of first fully independent bucket
        let mut rejected: Vec<usize> = Vec::new();
        for (i, bucket) in pending.chunks(b).enumerate() {
            let answers = chain_independence(&base, bucket, ledger);
            match answers.iter().position(|ok| !ok) {
                None => {
                    if grow.is_none() {
                        grow = Some((i * b, bucket.len()));
                    }
                }
                Some(k) => rejected.push(i * b + k),
            }
        }
        let mut drop = vec![false; pending.len()];
        if let Some((start, len)) = grow {
            for j in start..start + len {
                s.push(pending[j]);
                drop[j] = true;
            }
        }
        for j in rejected {
            drop[j] = true;
        }
        pending = pending
            .iter()
            .enumerate()
            .filter(|(j, _)| !drop[*j])
            .map(|(_, &e)| e)
            .collect();
    }
    s.sort_unstable();
    Ok(s)
}

/// Max-weight basis with independence queries in O(sqrt(r) log(n/r)) rounds.
///
/// Elements are processed in tie-break order, chunked into buckets of size
/// ~sqrt(r_hat). The first bucket's clean prefix is accepted (its undecided
/// predecessors are exactly the chain elements already queried with it), and
/// every bucket's first failing element is rejected for good: it is spanned
/// by a subset of its predecessors, so the greedy scan would skip it too.
/// The result therefore equals `greedy_max_weight_basis` exactly.
pub fn parallel_max_weight_basis_independence(
    m: &MatroidHandle,
    w: &[i64],
    prefer: &[bool],
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    if !ledger.is_parallel() {
        return Err(Error::LedgerMode(
            "parallel-independence basis requires parallel-sim mode".into(),
        ));
    }
    let order = tie_break_order(m.ground(), w, prefer);
    let mut s: Vec<usize> = Vec::new();
    let mut pending = order;
    let mut r_hat = 1usize;
    while !pending.is_empty() {
        while s.len() >= r_hat {
            r_hat *= 2;
        }
        let b = bucket_size(r_hat);
        ledger.begin_round()?;
        let base = Scan::of(m, &s);
        let mut drop = vec![false; pending.len()];
        for (i, bucket) in pending.chunks(b).enumerate() {
            let answers = chain_independence(&base, bucket, ledger);
            let first_fail = answers.iter().position(|ok| !ok);
            if i == 0 {
                let upto = first_fail.unwrap_or(bucket.len());
                for (j, &e) in bucket.iter().enumerate().take(upto) {
                    s.push(e);
                    drop[j] = true;
                }
                if let Some(k) = first_fail {
                    drop[k] = true;
                }
            } else if let Some(k) = first_fail {
                drop[i * b + k] = true;
            }
        }
        pending = pending
            .iter()
            .enumerate()
            .filter(|(j, _)| !drop[*j])
            .map(|(_, &e)| e)
            .collect();
    }
    s.sort_unstable();
    Ok(s)
}

/// Which max-weight basis subroutine an algorithm plugs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFinder {
    Greedy,
    ParallelRank,
    ParallelIndependence,
}

pub fn find_max_weight_basis(
    m: &MatroidHandle,
    w: &[i64],
    prefer: &[bool],
    finder: BasisFinder,
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    match finder {
        BasisFinder::Greedy => {
            if ledger.is_parallel() {
                return Err(Error::LedgerMode(
                    "greedy basis finder requires sequential mode".into(),
                ));
            }
            Ok(greedy_max_weight_basis(m, w, prefer, ledger))
        }
        BasisFinder::ParallelRank => parallel_basis_rank(m, w, prefer, ledger),
        BasisFinder::ParallelIndependence => {
            parallel_max_weight_basis_independence(m, w, prefer, ledger)
        }
    }
}

pub fn set_weight(set: &[usize], w: &[i64]) -> i64 {
    set.iter().map(|&e| w[e]).sum()
}

/// Exchange certificate for w-maximality of a basis: no feasible swap
/// strictly improves the weight, and no element extends the basis. Uncounted;
/// used by tests and runtime assertions.
pub fn is_max_weight_basis(m: &MatroidHandle, basis: &[usize], w: &[i64]) -> bool {
    let full = Scan::of(m, basis);
    if !full.independent {
        return false;
    }
    let in_basis = prefer_mask(m.universe(), basis);
    let outside: Vec<usize> = m
        .ground()
        .iter()
        .copied()
        .filter(|&e| !in_basis[e])
        .collect();
    // maximality
    {
        let mut sc = m.scanner();
        for &e in basis {
            sc.insert(e);
        }
        for &y in &outside {
            if sc.probe(y) {
                return false;
            }
        }
    }
    for (i, &x) in basis.iter().enumerate() {
        let mut without: Vec<usize> = basis.to_vec();
        without.remove(i);
        let mut sc = m.scanner();
        for &e in &without {
            sc.insert(e);
        }
        for &y in &outside {
            if w[y] > w[x] && sc.probe(y) {
                return false;
            }
        }
    }
    true
}

/// A maximal common independent set by ascending-id greedy: at most 2n
/// independence queries, size at least r/2.
pub fn greedy_maximal_common(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    ledger: &mut QueryLedger,
) -> Vec<usize> {
    debug_assert_eq!(m1.ground(), m2.ground());
    let mut s1 = m1.scanner();
    let mut s2 = m2.scanner();
    let mut out = Vec::new();
    for &e in m1.ground() {
        ledger.count_independence(1);
        if !s1.probe(e) {
            continue;
        }
        ledger.count_independence(1);
        if s2.probe(e) {
            s1.insert(e);
            s2.insert(e);
            out.push(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::MatroidHandle;

    fn triangle() -> MatroidHandle {
        MatroidHandle::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn greedy_triangle_brute_force() {
        // spanning trees of the triangle: {0,1}, {0,2}, {1,2}; weights 5,3,3
        let m = triangle();
        let w = vec![5, 3, 3];
        let prefer = vec![false; 3];
        let mut l = QueryLedger::sequential();
        let b = greedy_max_weight_basis(&m, &w, &prefer, &mut l);
        assert_eq!(b, vec![0, 1]);
        assert_eq!(set_weight(&b, &w), 8);
        assert_eq!(l.independence_queries, 3);
    }

    #[test]
    fn greedy_preference_order() {
        let m = MatroidHandle::uniform(3, 2);
        let w = vec![1, 1, 1];
        let prefer = prefer_mask(3, &[2]);
        let mut l = QueryLedger::sequential();
        let b = greedy_max_weight_basis(&m, &w, &prefer, &mut l);
        assert_eq!(b, vec![0, 2]);
    }

    #[test]
    fn parallel_rank_matches_greedy_one_round() {
        let m = triangle();
        let w = vec![5, 3, 3];
        let prefer = vec![false; 3];
        let mut seq = QueryLedger::sequential();
        let g = greedy_max_weight_basis(&m, &w, &prefer, &mut seq);
        let mut par = QueryLedger::parallel_sim();
        let p = parallel_basis_rank(&m, &w, &prefer, &mut par).unwrap();
        assert_eq!(g, p);
        assert_eq!(par.rounds, 1);
        assert_eq!(par.rank_queries, 3);
    }

    #[test]
    fn parallel_rank_singleton() {
        let m = MatroidHandle::uniform(1, 1);
        let mut l = QueryLedger::parallel_sim();
        let b = parallel_basis_rank(&m, &[0], &[false], &mut l).unwrap();
        assert_eq!(b, vec![0]);
        assert_eq!(l.rank_queries, 1);
    }

    #[test]
    fn bucketed_basis_sizes() {
        let mut l = QueryLedger::parallel_sim();
        let m = MatroidHandle::uniform(16, 4);
        let b = parallel_basis_independence(&m, &mut l).unwrap();
        assert_eq!(b.len(), 4);

        // K4: 6 edges, spanning tree size 3
        let k4 =
            MatroidHandle::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let mut l2 = QueryLedger::parallel_sim();
        let t = parallel_basis_independence(&k4, &mut l2).unwrap();
        assert_eq!(t.len(), 3);
        assert!(k4.raw_independent(&t));
    }

    #[test]
    fn weighted_bucketed_matches_greedy() {
        let m = triangle();
        let w = vec![5, 3, 3];
        let prefer = vec![false; 3];
        let mut l = QueryLedger::parallel_sim();
        let b = parallel_max_weight_basis_independence(&m, &w, &prefer, &mut l).unwrap();
        assert_eq!(b, vec![0, 1]);
    }

    #[test]
    fn zero_weight_consistency() {
        let m = MatroidHandle::partition(6, &[vec![0, 1, 2], vec![3, 4, 5]], &[2, 1]).unwrap();
        let w = vec![0i64; 6];
        let prefer = vec![false; 6];
        let mut a = QueryLedger::parallel_sim();
        let mut b = QueryLedger::parallel_sim();
        let rank_b = parallel_basis_rank(&m, &w, &prefer, &mut a).unwrap();
        let ind_b = parallel_max_weight_basis_independence(&m, &w, &prefer, &mut b).unwrap();
        assert_eq!(rank_b, ind_b);
    }

    #[test]
    fn greedy_common_uniform() {
        let m = MatroidHandle::uniform(4, 2);
        let mut l = QueryLedger::sequential();
        let s = greedy_maximal_common(&m, &m, &mut l);
        assert_eq!(s, vec![0, 1]);
        assert!(l.independence_queries <= 8);
    }

    #[test]
    fn greedy_common_empty_ground() {
        let m = MatroidHandle::uniform(0, 0);
        let mut l = QueryLedger::sequential();
        assert!(greedy_maximal_common(&m, &m, &mut l).is_empty());
    }

    #[test]
    fn exchange_certificate() {
        let m = triangle();
        assert!(is_max_weight_basis(&m, &[0, 1], &[5, 3, 3]));
        assert!(!is_max_weight_basis(&m, &[1, 2], &[5, 3, 3]));
    }
}
