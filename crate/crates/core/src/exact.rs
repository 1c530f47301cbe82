//! Exchange-graph construction and augmentation, a sequential exact solver,
//! and the parallel exact pipeline (auction warm start + augmentation on
//! truncated matroids, one fiber per rank guess).

use crate::auction::{run_auction, AuctionParams, DualCertificate};
use crate::basis::{greedy_maximal_common, prefer_mask, BasisFinder};
use crate::error::{Error, Result};
use crate::ledger::{star_independence, QueryLedger, Scan};
use crate::matroid::MatroidHandle;
use crate::ratio::iroot_ceil;

/// The exchange graph of a common independent set S, plus a virtual source
/// and sink. Arcs: source→y if S+y ∈ I1; x→y (x ∈ S, y ∉ S) if S−x+y ∈ I1;
/// y→x (y ∉ S, x ∈ S) if S−x+y ∈ I2; y→sink if S+y ∈ I2.
pub struct ExchangeGraph {
    pub s: Vec<usize>,
    pub outside: Vec<usize>,
    /// y ∉ S with S+y independent in M1.
    pub sources: Vec<usize>,
    /// y ∉ S with S+y independent in M2.
    pub sinks: Vec<usize>,
    /// Out-arcs among real elements, indexed by element id; lists ascending.
    pub adj: Vec<Vec<usize>>,
    universe: usize,
}

/// One batch of exactly 2(n−|S|)(|S|+1) independence queries; +1 round in
/// parallel-sim mode.
pub fn build_exchange_graph(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    s: &[usize],
    ledger: &mut QueryLedger,
) -> Result<ExchangeGraph> {
    m1.check_subset(s)?;
    m2.check_subset(s)?;
    if !m1.raw_independent(s) || !m2.raw_independent(s) {
        return Err(Error::input(
            "exchange graph requires a common independent set",
        ));
    }
    let universe = m1.universe();
    let in_s = prefer_mask(universe, s);
    let outside: Vec<usize> = m1.ground().iter().copied().filter(|&e| !in_s[e]).collect();
    if ledger.is_parallel() {
        ledger.begin_round()?;
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); universe];
    let base1 = Scan::of(m1, s);
    let base2 = Scan::of(m2, s);
    let sources: Vec<usize> = outside
        .iter()
        .zip(star_independence(&base1, &outside, ledger))
        .filter(|(_, ok)| *ok)
        .map(|(&y, _)| y)
        .collect();
    let sinks: Vec<usize> = outside
        .iter()
        .zip(star_independence(&base2, &outside, ledger))
        .filter(|(_, ok)| *ok)
        .map(|(&y, _)| y)
        .collect();

    for (i, &x) in s.iter().enumerate() {
        let mut without: Vec<usize> = s.to_vec();
        without.remove(i);
        let b1 = Scan::of(m1, &without);
        for (&y, ok) in outside.iter().zip(star_independence(&b1, &outside, ledger)) {
            if ok {
                adj[x].push(y);
            }
        }
        let b2 = Scan::of(m2, &without);
        for (&y, ok) in outside.iter().zip(star_independence(&b2, &outside, ledger)) {
            if ok {
                adj[y].push(x);
            }
        }
    }
    Ok(ExchangeGraph {
        s: s.to_vec(),
        outside,
        sources,
        sinks,
        adj,
        universe,
    })
}

impl ExchangeGraph {
    /// Shortest source→sink path (interior node sequence), tie-broken to the
    /// lexicographically smallest. No oracle queries.
    pub fn shortest_path(&self) -> Option<Vec<usize>> {
        // distance-to-sink by reverse BFS
        const INF: usize = usize::MAX;
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.universe];
        for (v, outs) in self.adj.iter().enumerate() {
            for &w in outs {
                rev[w].push(v);
            }
        }
        let mut dt = vec![INF; self.universe];
        let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for &y in &self.sinks {
            dt[y] = 0;
            queue.push_back(y);
        }
        while let Some(v) = queue.pop_front() {
            for &u in &rev[v] {
                if dt[u] == INF {
                    dt[u] = dt[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        let len = self.sources.iter().map(|&y| dt[y]).min()?;
        if len == INF {
            return None;
        }
        let mut v = *self.sources.iter().filter(|&&y| dt[y] == len).min()?;
        let mut path = vec![v];
        while dt[v] > 0 {
            v = self.adj[v]
                .iter()
                .copied()
                .filter(|&w| dt[w] == dt[v] - 1)
                .min()
                .expect("BFS distances admit a successor");
            path.push(v);
        }
        Some(path)
    }

    /// Elements reachable from the virtual source (used for the dual cut).
    pub fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.universe];
        let mut stack: Vec<usize> = Vec::new();
        for &y in &self.sources {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// When no augmenting path exists, the reachability cut is a tight dual:
    /// A = unreachable elements, B = reachable, rank1(A) + rank2(B) = |S|.
    pub fn dual_cut(&self, ground: &[usize]) -> DualCertificate {
        let reach = self.reachable_from_source();
        let a = ground.iter().copied().filter(|&e| !reach[e]).collect();
        let b = ground.iter().copied().filter(|&e| reach[e]).collect();
        DualCertificate { a, b }
    }
}

fn apply_path(s: &[usize], path: &[usize], universe: usize) -> Vec<usize> {
    let mut flip = prefer_mask(universe, s);
    for &v in path {
        flip[v] = !flip[v];
    }
    (0..universe).filter(|&e| flip[e]).collect()
}

/// One augmentation step: a new common independent set one larger,
/// or `None` when S is already maximum. The exchanged set is re-checked with
/// 2 counted independence queries.
pub fn augment(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    s: &[usize],
    ledger: &mut QueryLedger,
) -> Result<Option<Vec<usize>>> {
    let g = build_exchange_graph(m1, m2, s, ledger)?;
    match g.shortest_path() {
        None => Ok(None),
        Some(path) => {
            let next = apply_path(s, &path, m1.universe());
            if next.len() != s.len() + 1
                || !m1.is_independent(&next, ledger)
                || !m2.is_independent(&next, ledger)
            {
                return Err(Error::internal(
                    "augmenting path produced an invalid exchange",
                ));
            }
            Ok(Some(next))
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub solution: Vec<usize>,
    pub dual: DualCertificate,
}

/// Reference exact solver: greedy warm start, then repeated shortest-path
/// augmentation; the final failed search yields a tight dual certificate.
pub fn exact_sequential_certified(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    ledger: &mut QueryLedger,
) -> Result<ExactResult> {
    if m1.ground() != m2.ground() {
        return Err(Error::input("matroids must share a ground set"));
    }
    let mut s = greedy_maximal_common(m1, m2, ledger);
    loop {
        let g = build_exchange_graph(m1, m2, &s, ledger)?;
        match g.shortest_path() {
            Some(path) => {
                let next = apply_path(&s, &path, m1.universe());
                if next.len() != s.len() + 1
                    || !m1.is_independent(&next, ledger)
                    || !m2.is_independent(&next, ledger)
                {
                    return Err(Error::internal(
                        "augmenting path produced an invalid exchange",
                    ));
                }
                s = next;
            }
            None => {
                let dual = g.dual_cut(m1.ground());
                debug_assert_eq!(m1.raw_rank(&dual.a) + m2.raw_rank(&dual.b), s.len());
                return Ok(ExactResult { solution: s, dual });
            }
        }
    }
}

pub fn exact_sequential(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    exact_sequential_certified(m1, m2, ledger).map(|r| r.solution)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Rank,
    Independence,
}

/// Auction parameters for the rank guess r̃: eps = n^{1/3} r̃^{-2/3} and
/// Δ = ⌈n^{1/3} r̃^{1/3}⌉ (rank oracle), eps = n^{1/3} r̃^{-1/2} and
/// Δ = ⌈n^{1/3} r̃^{1/2}⌉ (independence oracle), computed exactly as
/// (T = ⌈1/eps⌉, Δ) in integers.
pub fn parallel_params(n: u64, r_guess: u64, oracle: OracleKind) -> (u64, u64) {
    match oracle {
        OracleKind::Rank => {
            let t = iroot_ceil(((r_guess as u128).pow(2)).div_ceil(n.max(1) as u128), 3).max(1);
            let delta = iroot_ceil(n as u128 * r_guess as u128, 3).max(1);
            (t, delta)
        }
        OracleKind::Independence => {
            let t = iroot_ceil(
                ((r_guess as u128).pow(3)).div_ceil((n.max(1) as u128).pow(2)),
                6,
            )
            .max(1);
            let delta = iroot_ceil((n as u128).pow(2) * (r_guess as u128).pow(3), 6).max(1);
            (t, delta)
        }
    }
}

fn fiber_pipeline(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    r_guess: usize,
    oracle: OracleKind,
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    let t1 = m1.truncate(r_guess);
    let t2 = m2.truncate(r_guess);
    let n = m1.ground_size() as u64;
    let (t, delta) = parallel_params(n, r_guess as u64, oracle);
    let params = AuctionParams::from_inv_eps(t, delta)?;
    let finder = match oracle {
        OracleKind::Rank => BasisFinder::ParallelRank,
        OracleKind::Independence => BasisFinder::ParallelIndependence,
    };
    let state = run_auction(&t1, &t2, params, finder, ledger)?;
    let mut s = state.solution();
    while let Some(next) = augment(&t1, &t2, &s, ledger)? {
        s = next;
    }
    Ok(s)
}

/// Parallel exact algorithm: one fiber per rank guess r̃ ∈ {0..n}, each
/// running auction + augmentation on both matroids truncated to r̃, merged
/// under the group max rule. Fibers with r̃ > 2r are cut off at the round
/// index where the r̃ = 2r fiber halts. A final exchange-graph round on the
/// original matroids certifies maximality and yields the tight dual.
pub fn exact_parallel_certified(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    oracle: OracleKind,
    ledger: &mut QueryLedger,
) -> Result<ExactResult> {
    if !ledger.is_parallel() {
        return Err(Error::LedgerMode(
            "exact_parallel requires parallel-sim mode".into(),
        ));
    }
    if m1.ground() != m2.ground() {
        return Err(Error::input("matroids must share a ground set"));
    }
    let n = m1.ground_size();
    let mut best: Vec<usize> = Vec::new();
    let mut subs: Vec<QueryLedger> = Vec::new();
    let mut r_known: Option<usize> = None;
    for r_guess in 0..=n {
        if let Some(r) = r_known {
            if r_guess > 2 * r {
                // terminated fiber: runs only until the r̃ = 2r fiber's halt round
                let cutoff = subs[2 * r].rounds;
                let mut sub = ledger.fork().with_round_cap(cutoff);
                match fiber_pipeline(m1, m2, r_guess, oracle, &mut sub) {
                    Ok(s) => {
                        if s.len() > best.len() {
                            best = s;
                        }
                    }
                    Err(Error::Timeout(_)) => sub.rounds = cutoff,
                    Err(e) => return Err(e),
                }
                subs.push(sub);
                continue;
            }
        }
        let mut sub = ledger.fork();
        let s = fiber_pipeline(m1, m2, r_guess, oracle, &mut sub)?;
        subs.push(sub);
        if s.len() > best.len() {
            best = s;
        }
        if r_known.is_none() && best.len() < r_guess {
            r_known = Some(best.len());
        }
    }
    ledger.absorb_group(&subs);

    let g = build_exchange_graph(m1, m2, &best, ledger)?;
    if g.shortest_path().is_some() {
        return Err(Error::internal("parallel exact returned a non-maximum set"));
    }
    Ok(ExactResult {
        solution: best,
        dual: g.dual_cut(m1.ground()),
    })
}

pub fn exact_parallel(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    oracle: OracleKind,
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    exact_parallel_certified(m1, m2, oracle, ledger).map(|r| r.solution)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bipartite(rows: usize, cols: usize) -> (MatroidHandle, MatroidHandle) {
        let n = rows * cols;
        let left: Vec<Vec<usize>> = (0..rows)
            .map(|i| (0..cols).map(|j| cols * i + j).collect())
            .collect();
        let right: Vec<Vec<usize>> = (0..cols)
            .map(|j| (0..rows).map(|i| cols * i + j).collect())
            .collect();
        (
            MatroidHandle::partition(n, &left, &vec![1; rows]).unwrap(),
            MatroidHandle::partition(n, &right, &vec![1; cols]).unwrap(),
        )
    }

    #[test]
    fn empty_set_graph_shape() {
        let (m1, m2) = bipartite(2, 2);
        let mut l = QueryLedger::sequential();
        let g = build_exchange_graph(&m1, &m2, &[], &mut l).unwrap();
        assert_eq!(g.sources, vec![0, 1, 2, 3]);
        assert_eq!(g.sinks, vec![0, 1, 2, 3]);
        assert!(g.adj.iter().all(|a| a.is_empty()));
        assert_eq!(l.independence_queries, 8); // 2 * (4 - 0) * (0 + 1)
    }

    #[test]
    fn path_exists_iff_larger_matching() {
        // 2x2 bipartite, S = {edge (0,0)}: a 2-matching exists, so a path must
        let (m1, m2) = bipartite(2, 2);
        let mut l = QueryLedger::sequential();
        let g = build_exchange_graph(&m1, &m2, &[0], &mut l).unwrap();
        assert!(g.shortest_path().is_some());

        // restrict to row 0 edges only: no 2-matching, S = {0} is maximum
        let sub1 = m1.restrict(&[0, 1]).unwrap();
        let sub2 = m2.restrict(&[0, 1]).unwrap();
        let g2 = build_exchange_graph(&sub1, &sub2, &[0], &mut l).unwrap();
        assert!(g2.shortest_path().is_none());
    }

    #[test]
    fn query_count_formula() {
        let m1 = MatroidHandle::uniform(20, 10);
        let m2 = MatroidHandle::uniform(20, 10);
        let s: Vec<usize> = (0..5).collect();
        let mut l = QueryLedger::parallel_sim();
        build_exchange_graph(&m1, &m2, &s, &mut l).unwrap();
        assert_eq!(l.independence_queries, 2 * (20 - 5) * (5 + 1));
        assert_eq!(l.rounds, 1);
    }

    #[test]
    fn rejects_dependent_set() {
        let m1 = MatroidHandle::uniform(4, 1);
        let m2 = MatroidHandle::uniform(4, 4);
        let mut l = QueryLedger::sequential();
        assert!(build_exchange_graph(&m1, &m2, &[0, 1], &mut l).is_err());
    }

    #[test]
    fn augment_from_empty_picks_smallest() {
        let (m1, m2) = bipartite(2, 2);
        let mut l = QueryLedger::sequential();
        let s = augment(&m1, &m2, &[], &mut l).unwrap().unwrap();
        assert_eq!(s, vec![0]);
    }

    #[test]
    fn repeated_augment_reaches_perfect_matching() {
        let (m1, m2) = bipartite(3, 3);
        let mut l = QueryLedger::sequential();
        let mut s: Vec<usize> = Vec::new();
        while let Some(next) = augment(&m1, &m2, &s, &mut l).unwrap() {
            assert_eq!(next.len(), s.len() + 1);
            s = next;
        }
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn sequential_identical_matroids() {
        let m =
            MatroidHandle::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let mut l = QueryLedger::sequential();
        assert_eq!(exact_sequential(&m, &m, &mut l).unwrap().len(), 3);
    }

    #[test]
    fn sequential_uniform_cap() {
        let k4 =
            MatroidHandle::graphic(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let u = MatroidHandle::uniform(6, 2);
        let mut l = QueryLedger::sequential();
        assert_eq!(exact_sequential(&k4, &u, &mut l).unwrap().len(), 2);
    }

    #[test]
    fn sequential_dual_is_tight() {
        let (m1, m2) = bipartite(3, 3);
        let mut l = QueryLedger::sequential();
        let res = exact_sequential_certified(&m1, &m2, &mut l).unwrap();
        assert_eq!(res.solution.len(), 3);
        assert_eq!(m1.raw_rank(&res.dual.a) + m2.raw_rank(&res.dual.b), 3);
        let mut cover: Vec<usize> = res
            .dual
            .a
            .iter()
            .chain(res.dual.b.iter())
            .copied()
            .collect();
        cover.sort_unstable();
        cover.dedup();
        assert_eq!(cover.len(), 9);
    }

    #[test]
    fn parallel_params_example() {
        // n = 512, r̃ = 64: eps = 512^{1/3} 64^{-2/3} = 1/2, delta = 32
        let (t, delta) = parallel_params(512, 64, OracleKind::Rank);
        assert_eq!(t, 2);
        assert_eq!(delta, 32);
    }

    #[test]
    fn parallel_matches_sequential_both_oracles() {
        let (m1, m2) = bipartite(3, 4);
        let mut seq = QueryLedger::sequential();
        let want = exact_sequential(&m1, &m2, &mut seq).unwrap().len();
        for oracle in [OracleKind::Rank, OracleKind::Independence] {
            let mut par = QueryLedger::parallel_sim();
            let res = exact_parallel_certified(&m1, &m2, oracle, &mut par).unwrap();
            assert_eq!(res.solution.len(), want);
            assert!(m1.raw_independent(&res.solution) && m2.raw_independent(&res.solution));
            assert_eq!(
                m1.raw_rank(&res.dual.a) + m2.raw_rank(&res.dual.b),
                res.solution.len()
            );
            assert!(par.rounds > 0);
        }
    }

    #[test]
    fn parallel_zero_rank() {
        let m1 = MatroidHandle::uniform(4, 0);
        let m2 = MatroidHandle::uniform(4, 4);
        let mut l = QueryLedger::parallel_sim();
        assert!(exact_parallel(&m1, &m2, OracleKind::Rank, &mut l)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn parallel_requires_parallel_mode() {
        let m = MatroidHandle::uniform(3, 2);
        let mut l = QueryLedger::sequential();
        assert!(exact_parallel(&m, &m, OracleKind::Rank, &mut l).is_err());
    }
}
