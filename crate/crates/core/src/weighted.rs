//! Weighted matroid intersection via weight splitting: the weighted auction
//! (Phase 1), weighted exchange-graph augmentation with a potential-based
//! dual update (Phase 2), and the scaling driver.
//!
//! All weights are fixed-point integers in units of 1/2^K where K is the
//! number of scales, so every ±ζ adjustment and π update is exact.

use std::collections::BinaryHeap;

use crate::auction::pair_bases;
use crate::basis::{is_max_weight_basis, prefer_mask, set_weight, tie_break_order, BasisFinder};
use crate::error::{Error, Result};
use crate::exact::{exact_parallel, exact_sequential, parallel_params, OracleKind};
use crate::ledger::{QueryLedger, Scan};
use crate::matroid::MatroidHandle;

/// A ζ-approximate weight split: w(e) ≤ w1(e) + w2(e) ≤ w(e) + ζ for all e.
#[derive(Debug, Clone)]
pub struct WeightSplit {
    pub w1: Vec<i64>,
    pub w2: Vec<i64>,
    pub zeta: i64,
}

impl WeightSplit {
    /// Check ζ-approximateness against `w` over `ground` for the given ζ.
    pub fn is_approximate(&self, w: &[i64], ground: &[usize], zeta: i64) -> bool {
        ground.iter().all(|&e| {
            let sum = self.w1[e] + self.w2[e];
            w[e] <= sum && sum <= w[e] + zeta
        })
    }
}

#[derive(Debug, Clone)]
pub struct ScaleState {
    pub split: WeightSplit,
    /// A common basis that is w1-maximum in M1 and w2-maximum in M2.
    pub s: Vec<usize>,
    pub scale: u32,
}

#[allow(clippy::too_many_arguments)]
fn assert_weighted_invariants(
    w: &[i64],
    w1_start: &[i64],
    split: &WeightSplit,
    prices: &[i64],
    s1: &[usize],
    s2: &[usize],
    ground: &[usize],
    universe: usize,
) -> Result<()> {
    let in_s1 = prefer_mask(universe, s1);
    let in_s2 = prefer_mask(universe, s2);
    for &e in ground {
        let sum = split.w1[e] + split.w2[e];
        if !(w[e] <= sum && sum <= w[e] + split.zeta) {
            return Err(Error::internal(format!(
                "split not zeta-approximate at {e}"
            )));
        }
        // bookkeeping identity: floor(p/2) counts the w1 adjustments exactly
        let q = (w1_start[e] - split.w1[e]) / split.zeta;
        if q * split.zeta != w1_start[e] - split.w1[e] || q != prices[e] / 2 {
            return Err(Error::internal(format!(
                "price/adjustment bookkeeping violated at {e}"
            )));
        }
        if in_s2[e] && !in_s1[e] && prices[e] != 0 {
            return Err(Error::internal(format!(
                "nonzero price on S2\\S1 element {e}"
            )));
        }
    }
    Ok(())
}

/// Phase 1: the weighted auction. Takes a 2ζ-approximate split, returns a
/// ζ-approximate split with S_i a w_i-maximum basis in M_i and
/// |S1 ∩ S2| ≥ r − (3εr + Δ).
#[allow(clippy::too_many_arguments)]
pub fn run_weighted_auction(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    w: &[i64],
    split_in: &WeightSplit,
    zeta: i64,
    inv_eps: u64,
    delta: u64,
    finder: BasisFinder,
    ledger: &mut QueryLedger,
) -> Result<(WeightSplit, Vec<usize>, Vec<usize>)> {
    if zeta < 1 || delta < 1 || inv_eps < 1 {
        return Err(Error::input("zeta, eps and delta must be positive"));
    }
    if !split_in.is_approximate(w, m1.ground(), 2 * zeta) {
        return Err(Error::input("input split is not 2*zeta-approximate"));
    }
    let universe = m1.universe();
    let ground = m1.ground();
    let n = ground.len() as u64;
    let cap = 2 * inv_eps as i64;

    let mut prices = vec![0i64; universe];
    let w1_start = split_in.w1.clone();
    let mut split = WeightSplit {
        w1: split_in.w1.clone(),
        w2: ground.iter().fold(vec![0i64; universe], |mut acc, &e| {
            acc[e] = w[e] - split_in.w1[e];
            acc
        }),
        zeta,
    };
    let none = vec![false; universe];
    let (mut s1, mut s2) = pair_bases(m1, &split.w1, &none, m2, &split.w2, &none, finder, ledger)?;

    let iter_limit = n * cap as u64 / delta + 1;
    let mut iterations = 0u64;
    loop {
        let in_s2 = prefer_mask(universe, &s2);
        let x: Vec<usize> = s1
            .iter()
            .copied()
            .filter(|&e| !in_s2[e] && prices[e] < cap)
            .collect();
        if (x.len() as u64) < delta {
            assert_weighted_invariants(w, &w1_start, &split, &prices, &s1, &s2, ground, universe)?;
            return Ok((split, s1, s2));
        }
        if iterations >= iter_limit {
            return Err(Error::internal(
                "weighted auction exceeded its iteration bound",
            ));
        }
        for &e in &x {
            prices[e] += 1;
            if split.w1[e] + split.w2[e] == w[e] {
                split.w2[e] += zeta;
            } else {
                split.w1[e] -= zeta;
            }
        }
        let prefer1 = prefer_mask(universe, &s1);
        let prefer2 = prefer_mask(universe, &s2);
        let (n1, n2) = pair_bases(
            m1, &split.w1, &prefer1, m2, &split.w2, &prefer2, finder, ledger,
        )?;
        s1 = n1;
        s2 = n2;
        iterations += 1;
        assert_weighted_invariants(w, &w1_start, &split, &prices, &s1, &s2, ground, universe)?;
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum ArcKind {
    /// y → x with y ∉ S1, x ∈ S1: exchange S1 − x + y.
    M1,
    /// x → y with x ∈ S2, y ∉ S2: exchange S2 − x + y.
    M2,
}

struct Arc {
    to: usize,
    len: i64,
    kind: ArcKind,
}

/// Uncounted check that `basis` attains the greedy optimum weight for `wt`.
fn assert_wi_maximum(m: &MatroidHandle, basis: &[usize], wt: &[i64], label: &str) -> Result<()> {
    let order = tie_break_order(m.ground(), wt, &vec![false; m.universe()]);
    let mut sc = m.scanner();
    let best: i64 = order
        .into_iter()
        .filter(|&e| sc.insert(e))
        .map(|e| wt[e])
        .sum();
    let scan = Scan::of(m, basis);
    if !scan.independent || set_weight(basis, wt) != best {
        return Err(Error::internal(format!(
            "{label} is not a max-weight basis"
        )));
    }
    Ok(())
}

/// Phase 2 step: build the weighted exchange graph in one query batch, shift
/// the split by the shortest-path potential π, and exchange along a shortest
/// fewest-arc path. Grows |S1 ∩ S2| by exactly 1 and keeps w1 + w2 fixed
/// per element.
pub fn weighted_augment_step(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    split: &WeightSplit,
    s1: &[usize],
    s2: &[usize],
    ledger: &mut QueryLedger,
) -> Result<(WeightSplit, Vec<usize>, Vec<usize>)> {
    let universe = m1.universe();
    let ground = m1.ground();
    let in_s1 = prefer_mask(universe, s1);
    let in_s2 = prefer_mask(universe, s2);
    let out1: Vec<usize> = ground.iter().copied().filter(|&e| !in_s1[e]).collect();
    let out2: Vec<usize> = ground.iter().copied().filter(|&e| !in_s2[e]).collect();
    let sources: Vec<usize> = s2.iter().copied().filter(|&e| !in_s1[e]).collect();
    let sinks: Vec<usize> = s1.iter().copied().filter(|&e| !in_s2[e]).collect();
    if sources.is_empty() || sinks.is_empty() {
        return Err(Error::input("augment step requires S1 != S2"));
    }

    if ledger.is_parallel() {
        ledger.begin_round()?;
    }
    let mut adj: Vec<Vec<Arc>> = (0..universe).map(|_| Vec::new()).collect();
    // y -> x arcs (y outside S1, x in S1, S1 - x + y independent in M1)
    for (i, &x) in s1.iter().enumerate() {
        let mut without = s1.to_vec();
        without.remove(i);
        let base = Scan::of(m1, &without);
        for (&y, ok) in out1
            .iter()
            .zip(crate::ledger::star_independence(&base, &out1, ledger))
        {
            if ok {
                let len = split.w1[x] - split.w1[y];
                if len < 0 {
                    return Err(Error::internal(
                        "negative M1 exchange arc: S1 not w1-maximum",
                    ));
                }
                adj[y].push(Arc {
                    to: x,
                    len,
                    kind: ArcKind::M1,
                });
            }
        }
    }
    // x -> y arcs (x in S2, y outside S2, S2 - x + y independent in M2)
    for (i, &x) in s2.iter().enumerate() {
        let mut without = s2.to_vec();
        without.remove(i);
        let base = Scan::of(m2, &without);
        for (&y, ok) in out2
            .iter()
            .zip(crate::ledger::star_independence(&base, &out2, ledger))
        {
            if ok {
                let len = split.w2[x] - split.w2[y];
                if len < 0 {
                    return Err(Error::internal(
                        "negative M2 exchange arc: S2 not w2-maximum",
                    ));
                }
                adj[x].push(Arc {
                    to: y,
                    len,
                    kind: ArcKind::M2,
                });
            }
        }
    }

    // Dijkstra from all sources, ordered by (distance, hops, id).
    const INF: i64 = i64::MAX / 4;
    let mut dist = vec![(INF, u32::MAX); universe];
    let mut prev: Vec<Option<(usize, ArcKind)>> = vec![None; universe];
    let mut heap: BinaryHeap<std::cmp::Reverse<(i64, u32, usize)>> = BinaryHeap::new();
    for &y in &sources {
        dist[y] = (0, 0);
        heap.push(std::cmp::Reverse((0, 0, y)));
    }
    while let Some(std::cmp::Reverse((d, h, v))) = heap.pop() {
        if (d, h) != dist[v] {
            continue;
        }
        for arc in &adj[v] {
            let cand = (d + arc.len, h + 1);
            if cand < dist[arc.to] {
                dist[arc.to] = cand;
                prev[arc.to] = Some((v, arc.kind));
                heap.push(std::cmp::Reverse((cand.0, cand.1, arc.to)));
            }
        }
    }
    let sink = sinks
        .iter()
        .copied()
        .filter(|&x| dist[x].0 < INF)
        .min_by_key(|&x| (dist[x].0, dist[x].1, x))
        .ok_or_else(|| {
            Error::Infeasible("no augmenting path: matroids share no common basis".into())
        })?;
    let d_star = dist[sink].0;

    // potential update: w1 -= pi, w2 += pi with pi(v) = min(d(v), d(sink))
    let mut split_next = split.clone();
    for &e in ground {
        let pi = dist[e].0.min(d_star);
        split_next.w1[e] -= pi;
        split_next.w2[e] += pi;
    }

    // Arc kinds strictly alternate after the first arc (only S1 ∩ S2 nodes
    // have M2-arcs out after an M1-arc in, and vice versa), but a source in
    // S2 ∖ S1 may start with either kind. Applying each arc's own exchange
    // covers all four end parities uniformly.
    let mut arcs: Vec<(usize, usize, ArcKind)> = Vec::new();
    let mut v = sink;
    while let Some((u, kind)) = prev[v] {
        arcs.push((u, v, kind));
        v = u;
    }
    arcs.reverse();
    let mut flip1 = prefer_mask(universe, s1);
    let mut flip2 = prefer_mask(universe, s2);
    for &(u, v, kind) in &arcs {
        match kind {
            ArcKind::M1 => {
                flip1[v] = false;
                flip1[u] = true;
            }
            ArcKind::M2 => {
                flip2[u] = false;
                flip2[v] = true;
            }
        }
    }
    let s1_next: Vec<usize> = ground.iter().copied().filter(|&e| flip1[e]).collect();
    let s2_next: Vec<usize> = ground.iter().copied().filter(|&e| flip2[e]).collect();

    let grown = s1_next.iter().filter(|&&e| flip2[e]).count();
    let had = s1.iter().filter(|&&e| in_s2[e]).count();
    if grown != had + 1 || s1_next.len() != s1.len() || s2_next.len() != s2.len() {
        return Err(Error::internal(
            "weighted exchange did not grow the intersection by 1",
        ));
    }
    assert_wi_maximum(m1, &s1_next, &split_next.w1, "S1 after augment")?;
    assert_wi_maximum(m2, &s2_next, &split_next.w2, "S2 after augment")?;
    #[cfg(debug_assertions)]
    if ground.len() <= 14 {
        debug_assert!(is_max_weight_basis(m1, &s1_next, &split_next.w1));
        debug_assert!(is_max_weight_basis(m2, &s2_next, &split_next.w2));
    }
    Ok((split_next, s1_next, s2_next))
}

/// One scale of the driver: Phase 1 (weighted auction) then Phase 2
/// (augmentation until S1 = S2).
#[allow(clippy::too_many_arguments)]
pub fn refine_scale(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    w: &[i64],
    split_2z: &WeightSplit,
    s_2z: &[usize],
    zeta: i64,
    inv_eps: u64,
    delta: u64,
    finder: BasisFinder,
    ledger: &mut QueryLedger,
) -> Result<ScaleState> {
    debug_assert!(m1.raw_independent(s_2z) && m2.raw_independent(s_2z));
    let (mut split, mut s1, mut s2) =
        run_weighted_auction(m1, m2, w, split_2z, zeta, inv_eps, delta, finder, ledger)?;
    let sums: Vec<i64> = (0..m1.universe())
        .map(|e| split.w1[e] + split.w2[e])
        .collect();
    let mut steps = 0usize;
    while s1 != s2 {
        if steps > s1.len() + 1 {
            return Err(Error::internal("phase 2 exceeded its augmentation bound"));
        }
        let (next_split, next_s1, next_s2) =
            weighted_augment_step(m1, m2, &split, &s1, &s2, ledger)?;
        split = next_split;
        s1 = next_s1;
        s2 = next_s2;
        steps += 1;
    }
    if (0..m1.universe()).any(|e| split.w1[e] + split.w2[e] != sums[e]) {
        return Err(Error::internal("phase 2 changed a per-element weight sum"));
    }
    Ok(ScaleState {
        split,
        s: s1,
        scale: 0,
    })
}

#[derive(Debug, Clone)]
pub struct WeightedResult {
    pub solution: Vec<usize>,
    pub weight: i64,
    pub scales: u32,
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Number of scales the driver runs: K = ceil(log2(W(2r+1))) + 1, so that
/// the final ζ = W/2^K is below 1/(2r).
pub fn scale_count(w_max: u64, r: u64) -> u32 {
    ceil_log2(w_max * (2 * r + 1)) + 1
}

/// Maximum-weight common independent set by scaling. Sequential ledgers use
/// the greedy basis finder; parallel-sim ledgers use the oracle-appropriate
/// parallel finder with the same per-scale (ε, Δ) as the parallel exact
/// algorithm.
pub fn weighted_intersection(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    w: &[i64],
    oracle: OracleKind,
    ledger: &mut QueryLedger,
) -> Result<WeightedResult> {
    if m1.ground() != m2.ground() {
        return Err(Error::input("matroids must share a ground set"));
    }
    if m1.universe() != m2.universe() {
        return Err(Error::input("matroids must share an element-id universe"));
    }
    if w.len() < m1.universe() {
        return Err(Error::input(
            "weight vector shorter than the element universe",
        ));
    }
    if m1.ground().iter().any(|&e| w[e] < 0) {
        return Err(Error::input(
            "negative weights are not supported; shift them to apply",
        ));
    }

    let unweighted = if ledger.is_parallel() {
        exact_parallel(m1, m2, oracle, ledger)?
    } else {
        exact_sequential(m1, m2, ledger)?
    };
    let r = unweighted.len();
    let w_max = m1.ground().iter().map(|&e| w[e]).max().unwrap_or(0);
    if r == 0 || w_max == 0 {
        let weight = set_weight(&unweighted, w);
        return Ok(WeightedResult {
            solution: unweighted,
            weight,
            scales: 0,
        });
    }

    // reduction: rank-r truncation plus r zero-weight dummies, so the
    // matroids share a common basis and every common independent set extends
    // to one of equal weight
    let r1 = m1.truncate(r).free_extend(r).truncate(r);
    let r2 = m2.truncate(r).free_extend(r).truncate(r);
    let base_universe = m1.universe();
    let universe = r1.universe();
    let k = scale_count(w_max as u64, r as u64);

    // fixed-point weights in units of 1/2^k; dummies weigh 0
    let mut wf = vec![0i64; universe];
    for &e in m1.ground() {
        wf[e] = w[e] << k;
    }
    let w_top = w_max << k;

    let finder = if ledger.is_parallel() {
        match oracle {
            OracleKind::Rank => BasisFinder::ParallelRank,
            OracleKind::Independence => BasisFinder::ParallelIndependence,
        }
    } else {
        BasisFinder::Greedy
    };
    let n_reduced = r1.ground_size() as u64;
    let (inv_eps, delta) = parallel_params(n_reduced, r as u64, oracle);

    // trivial W-approximate split; the unweighted solution padded with
    // dummies is a common basis, and any basis is optimal for it
    let mut state = ScaleState {
        split: WeightSplit {
            w1: vec![w_top; universe],
            w2: vec![0; universe],
            zeta: w_top,
        },
        s: {
            let mut s = unweighted;
            s.extend(base_universe..base_universe + (r - s.len().min(r)));
            s
        },
        scale: 0,
    };
    for scale in 1..=k {
        let zeta = w_top >> scale;
        state = refine_scale(
            &r1,
            &r2,
            &wf,
            &state.split.clone(),
            &state.s.clone(),
            zeta,
            inv_eps,
            delta,
            finder,
            ledger,
        )?;
        state.scale = scale;
    }

    let solution: Vec<usize> = state
        .s
        .iter()
        .copied()
        .filter(|&e| e < base_universe)
        .collect();
    let weight = set_weight(&solution, w);
    Ok(WeightedResult {
        solution,
        weight,
        scales: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bipartite_2x2() -> (MatroidHandle, MatroidHandle) {
        // element 2i + j = edge (row i, col j)
        let m1 = MatroidHandle::partition(4, &[vec![0, 1], vec![2, 3]], &[1, 1]).unwrap();
        let m2 = MatroidHandle::partition(4, &[vec![0, 2], vec![1, 3]], &[1, 1]).unwrap();
        (m1, m2)
    }

    #[test]
    fn zero_weight_auction_degenerates() {
        let m = MatroidHandle::uniform(6, 3);
        let w = vec![0i64; 6];
        let split = WeightSplit {
            w1: vec![0; 6],
            w2: vec![0; 6],
            zeta: 4,
        };
        let mut l = QueryLedger::sequential();
        let (out, s1, s2) =
            run_weighted_auction(&m, &m, &w, &split, 4, 2, 1, BasisFinder::Greedy, &mut l).unwrap();
        assert_eq!(s1, s2);
        assert!(out.is_approximate(&w, &[0, 1, 2, 3, 4, 5], 4));
    }

    #[test]
    fn rejects_bad_input_split() {
        let m = MatroidHandle::uniform(2, 1);
        let w = vec![3i64, 3];
        let split = WeightSplit {
            w1: vec![0, 0],
            w2: vec![0, 0],
            zeta: 1,
        };
        let mut l = QueryLedger::sequential();
        // w1 + w2 = 0 < w: not 2*zeta-approximate
        assert!(
            run_weighted_auction(&m, &m, &w, &split, 1, 2, 1, BasisFinder::Greedy, &mut l).is_err()
        );
    }

    #[test]
    fn augment_step_single_swap() {
        // uniform(3,2) twice: S1 = {0,2}, S2 = {0,1}, zero weights; one swap
        let m = MatroidHandle::uniform(3, 2);
        let split = WeightSplit {
            w1: vec![0; 3],
            w2: vec![0; 3],
            zeta: 1,
        };
        let mut l = QueryLedger::sequential();
        let (next, s1, s2) =
            weighted_augment_step(&m, &m, &split, &[0, 2], &[0, 1], &mut l).unwrap();
        assert_eq!(s1, s2);
        for e in 0..3 {
            assert_eq!(next.w1[e] + next.w2[e], 0);
        }
    }

    #[test]
    fn weighted_bipartite_optimum() {
        // weights 5, 1 / 1, 4: best matching takes (0,0) and (1,1) for 9
        let (m1, m2) = bipartite_2x2();
        let w = vec![5i64, 1, 1, 4];
        let mut l = QueryLedger::sequential();
        let res = weighted_intersection(&m1, &m2, &w, OracleKind::Rank, &mut l).unwrap();
        assert_eq!(res.weight, 9);
        assert_eq!(res.solution, vec![0, 3]);
    }

    #[test]
    fn equal_weights_reach_w_times_r() {
        let (m1, m2) = bipartite_2x2();
        let w = vec![7i64; 4];
        let mut l = QueryLedger::sequential();
        let res = weighted_intersection(&m1, &m2, &w, OracleKind::Rank, &mut l).unwrap();
        assert_eq!(res.weight, 14);
    }

    #[test]
    fn scale_count_example() {
        // W = 16, r = 4: ceil(log2(16 * 9)) + 1 = 9
        assert_eq!(scale_count(16, 4), 9);
        let m = MatroidHandle::uniform(8, 4);
        let mut w = vec![1i64; 8];
        w[0] = 16;
        let mut l = QueryLedger::sequential();
        let res = weighted_intersection(&m, &m, &w, OracleKind::Rank, &mut l).unwrap();
        assert_eq!(res.scales, 9);
        assert_eq!(res.weight, 16 + 3);
    }

    #[test]
    fn zero_weights_short_circuit() {
        let (m1, m2) = bipartite_2x2();
        let w = vec![0i64; 4];
        let mut l = QueryLedger::sequential();
        let res = weighted_intersection(&m1, &m2, &w, OracleKind::Rank, &mut l).unwrap();
        assert_eq!(res.weight, 0);
        assert_eq!(res.scales, 0);
    }

    #[test]
    fn negative_weights_rejected() {
        let m = MatroidHandle::uniform(2, 1);
        let mut l = QueryLedger::sequential();
        assert!(weighted_intersection(&m, &m, &[-1, 2], OracleKind::Rank, &mut l).is_err());
    }

    #[test]
    fn parallel_mode_matches_sequential() {
        let (m1, m2) = bipartite_2x2();
        let w = vec![5i64, 1, 1, 4];
        for oracle in [OracleKind::Rank, OracleKind::Independence] {
            let mut l = QueryLedger::parallel_sim();
            let res = weighted_intersection(&m1, &m2, &w, oracle, &mut l).unwrap();
            assert_eq!(res.weight, 9);
            assert!(l.rounds > 0);
        }
    }

    #[test]
    fn triangle_vs_partition_refine() {
        let g = MatroidHandle::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = MatroidHandle::partition(3, &[vec![0], vec![1, 2]], &[1, 2]).unwrap();
        let w = vec![3i64, 5, 2];
        let mut l = QueryLedger::sequential();
        let res = weighted_intersection(&g, &p, &w, OracleKind::Rank, &mut l).unwrap();
        // brute force: {0,1} -> 8 is the best common independent set
        assert_eq!(res.weight, 8);
    }
}
