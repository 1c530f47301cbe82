//! MWU adaptive sparsification: repeatedly solve the auction on a small
//! weighted sample of the ground set, take spans of the returned dual, and
//! boost the weight of uncovered elements. Yields a (1-O(eps))r solution
//! with near-linear query cost.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::auction::{extract_dual, run_auction, AuctionParams};
use crate::basis::{greedy_maximal_common, prefer_mask, BasisFinder};
use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::matroid::MatroidHandle;
use crate::ratio::Ratio;

/// Closure of `a`: a greedy basis B_A of `a` (|a| queries), then every
/// element that B_A + e leaves dependent (n − |B_A| further queries).
pub fn span(m: &MatroidHandle, a: &[usize], ledger: &mut QueryLedger) -> Vec<usize> {
    let mut sc = m.scanner();
    let mut in_basis = vec![false; m.universe()];
    ledger.count_independence(a.len() as u64);
    for &e in a {
        if sc.insert(e) {
            in_basis[e] = true;
        }
    }
    let mut out = Vec::new();
    for &e in m.ground() {
        if in_basis[e] {
            out.push(e);
            continue;
        }
        ledger.count_independence(1);
        if !sc.probe(e) {
            out.push(e);
        }
    }
    out
}

/// Draw `draws` i.i.d. elements of `ground` proportional to e^{exponents[e]}
/// and return the distinct set. Deterministic given the RNG state.
pub fn sample_subset(
    ground: &[usize],
    exponents: &[u64],
    draws: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    assert!(!ground.is_empty() && draws >= 1);
    let top = ground.iter().map(|&e| exponents[e]).max().unwrap();
    // weights e^m shifted by the max exponent so the floats stay in range
    let mut cumulative = Vec::with_capacity(ground.len());
    let mut total = 0.0f64;
    for &e in ground {
        total += (exponents[e] as f64 - top as f64).exp();
        cumulative.push(total);
    }
    let mut picked = vec![false; ground.len()];
    for _ in 0..draws {
        let u: f64 = rng.gen_range(0.0..total);
        let i = cumulative
            .partition_point(|&c| c <= u)
            .min(ground.len() - 1);
        picked[i] = true;
    }
    ground
        .iter()
        .enumerate()
        .filter(|(i, _)| picked[*i])
        .map(|(_, &e)| e)
        .collect()
}

#[derive(Debug, Clone)]
pub struct MwuConfig {
    pub c1: u64,
    pub c2: u64,
    pub seed: u64,
}

impl Default for MwuConfig {
    fn default() -> Self {
        MwuConfig {
            c1: 4,
            c2: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MwuResult {
    pub solution: Vec<usize>,
    /// Greedy 2-approximation of r used to size the samples.
    pub r_estimate: usize,
    pub iterations: usize,
    pub sample_draws: usize,
    /// Per-iteration fraction of total element weight covered by the spans.
    pub coverage: Vec<f64>,
}

/// Sparsified approximation: |S| ≥ (1−O(eps))·r with high
/// probability over the sampling seed.
pub fn mwu_sparsified_intersection(
    m1: &MatroidHandle,
    m2: &MatroidHandle,
    eps: Ratio,
    config: &MwuConfig,
    ledger: &mut QueryLedger,
) -> Result<MwuResult> {
    if !eps.is_proper() {
        return Err(Error::input("eps must lie in (0,1)"));
    }
    if ledger.is_parallel() {
        return Err(Error::LedgerMode(
            "mwu sparsification runs sequentially".into(),
        ));
    }
    if m1.ground() != m2.ground() {
        return Err(Error::input("matroids must share a ground set"));
    }
    let n = m1.ground_size();
    let r_estimate = greedy_maximal_common(m1, m2, ledger).len();
    if r_estimate == 0 {
        return Ok(MwuResult {
            solution: Vec::new(),
            r_estimate,
            iterations: 0,
            sample_draws: 0,
            coverage: Vec::new(),
        });
    }
    let e = eps.to_f64();
    let ln_n = (n.max(2) as f64).ln();
    let iterations = (config.c2 as f64 * ln_n / e).ceil() as usize;
    let draws = (config.c1 as f64 * r_estimate as f64 * ln_n / e).ceil() as usize;
    let inner =
        AuctionParams::from_inv_eps(eps.ceil_inv(), eps.mul_ceil(r_estimate as u64).max(1))?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut exponents = vec![0u64; m1.universe()];
    let mut best: Vec<usize> = Vec::new();
    let mut coverage = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let u = sample_subset(m1.ground(), &exponents, draws, &mut rng);
        let ru1 = m1.restrict(&u)?;
        let ru2 = m2.restrict(&u)?;
        let state = run_auction(&ru1, &ru2, inner, BasisFinder::Greedy, ledger)?;
        let s_u = state.solution();
        if s_u.len() > best.len() {
            best = s_u.clone();
        }
        let dual = extract_dual(&state, &inner);
        #[cfg(debug_assertions)]
        {
            let mut cover: Vec<usize> = dual.a.iter().chain(dual.b.iter()).copied().collect();
            cover.sort_unstable();
            cover.dedup();
            debug_assert_eq!(cover, u, "dual must cover the sampled ground set");
            debug_assert!(
                ru1.raw_rank(&dual.a) + ru2.raw_rank(&dual.b)
                    <= s_u.len()
                        + eps.mul_ceil(ru1.raw_matroid_rank().min(ru2.raw_matroid_rank()) as u64)
                            as usize
                        + inner.delta as usize
            );
        }
        let covered = prefer_mask(m1.universe(), &span(m1, &dual.a, ledger))
            .iter()
            .zip(prefer_mask(m2.universe(), &span(m2, &dual.b, ledger)))
            .map(|(&a, b)| a || b)
            .collect::<Vec<bool>>();

        let top = m1.ground().iter().map(|&e| exponents[e]).max().unwrap();
        let mut total = 0.0f64;
        let mut hit = 0.0f64;
        for &e in m1.ground() {
            let w = (exponents[e] as f64 - top as f64).exp();
            total += w;
            if covered[e] {
                hit += w;
            }
        }
        coverage.push(hit / total);
        // uncovered elements get their weight multiplied by Euler's e
        for &e in m1.ground() {
            if !covered[e] {
                exponents[e] += 1;
            }
        }
    }
    Ok(MwuResult {
        solution: best,
        r_estimate,
        iterations,
        sample_draws: draws,
        coverage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_of_empty_is_empty() {
        let m = MatroidHandle::uniform(5, 3);
        let mut l = QueryLedger::sequential();
        assert!(span(&m, &[], &mut l).is_empty());
        assert_eq!(l.independence_queries, 5);
    }

    #[test]
    fn span_triangle_closure() {
        let m = MatroidHandle::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut l = QueryLedger::sequential();
        assert_eq!(span(&m, &[0, 1], &mut l), vec![0, 1, 2]);
    }

    #[test]
    fn span_matches_rank_oracle() {
        let m = MatroidHandle::linear(
            5,
            &[
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![1, 1, 0],
                vec![0, 0, 1],
                vec![2, 3, 0],
            ],
        )
        .unwrap();
        for a in [vec![], vec![0], vec![0, 1], vec![0, 3], vec![2, 4]] {
            let mut l = QueryLedger::sequential();
            let got = span(&m, &a, &mut l);
            let base = m.raw_rank(&a);
            let want: Vec<usize> = (0..5)
                .filter(|&e| {
                    let mut with = a.clone();
                    with.push(e);
                    m.raw_rank(&with) == base
                })
                .collect();
            assert_eq!(got, want, "span mismatch for A = {a:?}");
        }
    }

    #[test]
    fn sample_concentrated_weight() {
        let ground: Vec<usize> = (0..4).collect();
        let mut exponents = vec![0u64; 4];
        exponents[2] = 200; // e^200 dwarfs everything else
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(sample_subset(&ground, &exponents, 50, &mut rng), vec![2]);
    }

    #[test]
    fn sample_coupon_collector() {
        let n = 100usize;
        let ground: Vec<usize> = (0..n).collect();
        let exponents = vec![0u64; n];
        let draws = (n as f64 * (n as f64).ln()).ceil() as usize;
        let mut hits = 0usize;
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            hits += sample_subset(&ground, &exponents, draws, &mut rng).len();
        }
        assert!(hits >= 5 * n * 9 / 10);
    }

    #[test]
    fn sample_deterministic() {
        let ground: Vec<usize> = (0..50).collect();
        let exponents = vec![0u64; 50];
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        assert_eq!(
            sample_subset(&ground, &exponents, 30, &mut a),
            sample_subset(&ground, &exponents, 30, &mut b)
        );
    }

    #[test]
    fn full_rank_instance_hits_bound() {
        let m1 = MatroidHandle::uniform(32, 32);
        let m2 = MatroidHandle::uniform(32, 32);
        let mut l = QueryLedger::sequential();
        let res = mwu_sparsified_intersection(
            &m1,
            &m2,
            Ratio::new(1, 4).unwrap(),
            &MwuConfig::default(),
            &mut l,
        )
        .unwrap();
        assert!(res.solution.len() >= 24); // (1 - eps) * r
        assert!(m1.raw_independent(&res.solution));
    }

    #[test]
    fn sparse_partition_instance() {
        // r = 4 among n = 64: blocks of 16, capacity 1
        let blocks: Vec<Vec<usize>> = (0..4).map(|b| (16 * b..16 * (b + 1)).collect()).collect();
        let m1 = MatroidHandle::partition(64, &blocks, &[1; 4]).unwrap();
        let m2 = MatroidHandle::uniform(64, 4);
        let mut l = QueryLedger::sequential();
        let res = mwu_sparsified_intersection(
            &m1,
            &m2,
            Ratio::new(1, 4).unwrap(),
            &MwuConfig::default(),
            &mut l,
        )
        .unwrap();
        assert!(res.solution.len() >= 3);
        assert_eq!(res.coverage.len(), res.iterations);
    }

    #[test]
    fn run_is_seed_deterministic() {
        let m1 = MatroidHandle::uniform(20, 6);
        let m2 = MatroidHandle::uniform(20, 8);
        let cfg = MwuConfig {
            seed: 9,
            ..Default::default()
        };
        let mut l1 = QueryLedger::sequential();
        let mut l2 = QueryLedger::sequential();
        let a = mwu_sparsified_intersection(&m1, &m2, Ratio::new(1, 4).unwrap(), &cfg, &mut l1)
            .unwrap();
        let b = mwu_sparsified_intersection(&m1, &m2, Ratio::new(1, 4).unwrap(), &cfg, &mut l2)
            .unwrap();
        assert_eq!(a.solution, b.solution);
        assert_eq!(l1.total_queries(), l2.total_queries());
    }

    #[test]
    fn zero_rank_short_circuit() {
        let m1 = MatroidHandle::uniform(8, 0);
        let m2 = MatroidHandle::uniform(8, 8);
        let mut l = QueryLedger::sequential();
        let res = mwu_sparsified_intersection(
            &m1,
            &m2,
            Ratio::new(1, 2).unwrap(),
            &MwuConfig::default(),
            &mut l,
        )
        .unwrap();
        assert!(res.solution.is_empty());
        assert_eq!(res.iterations, 0);
    }
}
