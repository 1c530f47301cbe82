//! The batched auction algorithm for matroid intersection, dual-certificate
//! extraction, and the two sequential approximation wrappers.
//!
//! Prices and weights are integers; the price cap is P = 2*ceil(1/eps), so
//! the only role eps plays at runtime is through T = ceil(1/eps).

use crate::basis::{find_max_weight_basis, greedy_maximal_common, prefer_mask, BasisFinder};
use crate::error::{Error, Result};
use crate::ledger::{run_parallel_group, QueryLedger};
use crate::matroid::MatroidHandle;
use crate::ratio::Ratio;

#[derive(Debug, Clone, Copy)]
pub struct AuctionParams {
    /// T = ceil(1/eps); price cap is 2T.
    pub inv_eps: u64,
    pub delta: u64,
}

impl AuctionParams {
    pub fn from_eps(eps: Ratio, delta: u64) -> Result<Self> {
        if !eps.is_proper() {
            return Err(Error::input("eps must lie in (0,1)"));
        }
        Self::from_inv_eps(eps.ceil_inv(), delta)
    }

    pub fn from_inv_eps(inv_eps: u64, delta: u64) -> Result<Self> {
        if inv_eps < 1 {
            return Err(Error::input("ceil(1/eps) must be at least 1"));
        }
        if delta < 1 {
            return Err(Error::input("delta must be at least 1"));
        }
        Ok(AuctionParams { inv_eps, delta })
    }

    pub fn price_cap(&self) -> i64 {
        2 * self.inv_eps as i64
    }

    /// Additive slack the dual certificate is guaranteed to satisfy:
    /// rank1(A) + rank2(B) <= |S| + floor(r_upper/T) + (delta - 1).
    pub fn certified_slack(&self, r_upper: u64) -> u64 {
        r_upper / self.inv_eps + self.delta - 1
    }
}

#[derive(Debug, Clone)]
pub struct AuctionState {
    pub prices: Vec<i64>,
    pub w1: Vec<i64>,
    pub w2: Vec<i64>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub iterations: u64,
    ground: Vec<usize>,
}

impl AuctionState {
    /// S = S1 ∩ S2, the returned common independent set.
    pub fn solution(&self) -> Vec<usize> {
        intersect_sorted(&self.s1, &self.s2)
    }

    pub fn ground(&self) -> &[usize] {
        &self.ground
    }
}

pub fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Recompute both bases. In parallel-sim mode the two computations are
/// independent, so they share adaptive rounds under the max rule.
#[allow(clippy::too_many_arguments)]
pub(crate) fn pair_bases(
    m1: &MatroidHandle,
    w1: &[i64],
    prefer1: &[bool],
    m2: &MatroidHandle,
    w2: &[i64],
    prefer2: &[bool],
    finder: BasisFinder,
    ledger: &mut QueryLedger,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if ledger.is_parallel() {
        let fibers: Vec<crate::ledger::Fiber<'_, Vec<usize>>> = vec![
            Box::new(move |sub| find_max_weight_basis(m1, w1, prefer1, finder, sub)),
            Box::new(move |sub| find_max_weight_basis(m2, w2, prefer2, finder, sub)),
        ];
        let mut out = run_parallel_group(ledger, fibers)?;
        let s2 = out.pop().unwrap();
        let s1 = out.pop().unwrap();
        Ok((s1, s2))
    } else {
        Ok((
            find_max_weight_basis(m1, w1, prefer1, finder, ledger)?,
            find_max_weight_basis(m2, w2, prefer2, finder, ledger)?,
        ))
    }
}

fn check_invariants(state: &AuctionState, cap: i64, universe: usize) -> Result<()> {
    let in_s1 = prefer_mask(universe, &state.s1);
    let in_s2 = prefer_mask(universe, &state.s2);
    for &e in &state.ground {
        let (p, w1, w2) = (state.prices[e], state.w1[e], state.w2[e]);
        if !(0..=cap).contains(&p) {
            return Err(Error::internal(format!("price of {e} outside [0, P]: {p}")));
        }
        if !(w1 + w2 == 0 || w1 + w2 == 1) {
            return Err(Error::internal(format!("w1+w2 of {e} not in {{0,1}}")));
        }
        if !(w1 <= 0 && w2 >= 0) {
            return Err(Error::internal(format!("weight signs violated at {e}")));
        }
        if w1 != -(p / 2) || w2 != (p + 1) / 2 {
            return Err(Error::internal(format!(
                "price/weight bookkeeping violated at {e}"
            )));
        }
        // Claim: p(S2 \ S1) = 0 after each iteration.
        if in_s2[e] && !in_s1[e] && (p != 0 || w2 != 0) {
            return Err(Error::internal(format!(
                "nonzero price on S2\\S1 element {e}"
            )));
        }
    }
    Ok(())
}

/// Run the batched auction. Returns the final state; `state.solution()` is a
/// common independent set of size at least r - (eps*r + delta).
pub fn run_auction(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    params: AuctionParams,
    finder: BasisFinder,
    ledger: &mut QueryLedger,
) -> Result<AuctionState> {
    if m1.ground() != m2.ground() {
        return Err(Error::input("matroids must share a ground set"));
    }
    let universe = m1.universe();
    let ground = m1.ground().to_vec();
    let n = ground.len() as u64;
    let cap = params.price_cap();

    let zeros = vec![0i64; universe];
    let none = vec![false; universe];
    let (s1, s2) = pair_bases(m1, &zeros, &none, m2, &zeros, &none, finder, ledger)?;
    let mut state = AuctionState {
        prices: vec![0; universe],
        w1: vec![0; universe],
        w2: vec![0; universe],
        s1,
        s2,
        iterations: 0,
        ground,
    };

    let iter_limit = n * cap as u64 / params.delta + 1;
    loop {
        let in_s2 = prefer_mask(universe, &state.s2);
        let x: Vec<usize> = state
            .s1
            .iter()
            .copied()
            .filter(|&e| !in_s2[e] && state.prices[e] < cap)
            .collect();
        if (x.len() as u64) < params.delta {
            check_invariants(&state, cap, universe)?;
            return Ok(state);
        }
        if state.iterations >= iter_limit {
            return Err(Error::internal("auction exceeded its iteration bound"));
        }
        for &e in &x {
            state.prices[e] += 1;
            if state.w1[e] + state.w2[e] == 0 {
                state.w2[e] += 1;
            } else {
                state.w1[e] -= 1;
            }
        }
        let prefer1 = prefer_mask(universe, &state.s1);
        let prefer2 = prefer_mask(universe, &state.s2);
        let (s1, s2) = pair_bases(
            m1, &state.w1, &prefer1, m2, &state.w2, &prefer2, finder, ledger,
        )?;
        state.s1 = s1;
        state.s2 = s2;
        state.iterations += 1;
        check_invariants(&state, cap, universe)?;
        #[cfg(debug_assertions)]
        {
            debug_assert!(
                crate::basis::greedy_max_weight_basis(
                    m1,
                    &state.w1,
                    &prefer1,
                    &mut QueryLedger::sequential()
                ) == state.s1,
                "S1 is not the tie-break greedy w1-maximum basis"
            );
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Extract the dual pair (A, B) from a terminated auction run. No oracle
/// queries: pure bookkeeping over the final weights.
pub fn extract_dual(state: &AuctionState, params: &AuctionParams) -> DualCertificate {
    let t_range = params.inv_eps as i64;
    let s = state.solution();
    let mut bucket = vec![0u64; t_range as usize];
    for &e in &s {
        let t = -state.w1[e];
        if t < t_range {
            bucket[t as usize] += 1;
        }
    }
    let t = (0..t_range as usize)
        .min_by_key(|&t| bucket[t])
        .unwrap_or(0) as i64;
    let a: Vec<usize> = state
        .ground
        .iter()
        .copied()
        .filter(|&e| state.w1[e] >= -t)
        .collect();
    let b: Vec<usize> = state
        .ground
        .iter()
        .copied()
        .filter(|&e| state.w2[e] > t)
        .collect();
    DualCertificate { a, b }
}

/// Slack actually certified by this run's dual: the size of the smallest
/// w1-level bucket of S plus the at most delta - 1 leftover X elements.
pub fn observed_slack(state: &AuctionState, params: &AuctionParams) -> u64 {
    let s = state.solution();
    let mut bucket = vec![0u64; params.inv_eps as usize];
    for &e in &s {
        let t = -state.w1[e];
        if t < params.inv_eps as i64 {
            bucket[t as usize] += 1;
        }
    }
    bucket.iter().copied().min().unwrap_or(0) + params.delta - 1
}

/// Additive approximation: |S| >= r - eps*n using
/// O(n/eps^2) independence queries. The internal run uses eps/2 so the
/// exported guarantee absorbs the delta term.
pub fn additive_approx(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    eps: Ratio,
    ledger: &mut QueryLedger,
) -> Result<(AuctionState, AuctionParams)> {
    if !eps.is_proper() {
        return Err(Error::input("eps must lie in (0,1)"));
    }
    let n = m1.ground_size() as u64;
    let half = eps.halve();
    let delta = half.mul_floor(n).max(1);
    let params = AuctionParams::from_eps(half, delta)?;
    let state = run_auction(m1, m2, params, BasisFinder::Greedy, ledger)?;
    Ok((state, params))
}

/// Multiplicative approximation: |S| >= (1-eps)*r using
/// O(n^2/(r eps^2)) independence queries. Uses the greedy 2-approximation of
/// r to pick delta, and eps/4 internally.
pub fn multiplicative_approx_simple(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    eps: Ratio,
    ledger: &mut QueryLedger,
) -> Result<(AuctionState, AuctionParams)> {
    if !eps.is_proper() {
        return Err(Error::input("eps must lie in (0,1)"));
    }
    let r_approx = greedy_maximal_common(m1, m2, ledger).len() as u64;
    let quarter = eps.quarter();
    let delta = quarter.mul_ceil(r_approx).max(1);
    let params = AuctionParams::from_eps(quarter, delta)?;
    let state = run_auction(m1, m2, params, BasisFinder::Greedy, ledger)?;
    Ok((state, params))
}
