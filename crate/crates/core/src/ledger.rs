//! Query and round accounting.
//!
//! Every oracle access an algorithm makes is charged to a [`QueryLedger`]. In
//! `ParallelSim` mode the ledger additionally tracks adaptive rounds: one
//! round per submitted batch, with [`run_parallel_group`] merging the rounds
//! of cooperating computations under the max rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::MatroidHandle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    ParallelSim,
}

#[derive(Debug, Clone)]
pub struct QueryLedger {
    mode: Mode,
    pub independence_queries: u64,
    pub rank_queries: u64,
    pub rounds: u64,
    round_cap: Option<u64>,
}

impl QueryLedger {
    pub fn sequential() -> Self {
        QueryLedger {
            mode: Mode::Sequential,
            independence_queries: 0,
            rank_queries: 0,
            rounds: 0,
            round_cap: None,
        }
    }

    pub fn parallel_sim() -> Self {
        QueryLedger {
            mode: Mode::ParallelSim,
            independence_queries: 0,
            rank_queries: 0,
            rounds: 0,
            round_cap: Some(DEFAULT_ROUND_CAP),
        }
    }

    pub fn with_round_cap(mut self, cap: u64) -> Self {
        self.round_cap = Some(cap);
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_parallel(&self) -> bool {
        self.mode == Mode::ParallelSim
    }

    pub fn total_queries(&self) -> u64 {
        self.independence_queries + self.rank_queries
    }

    pub(crate) fn count_independence(&mut self, k: u64) {
        self.independence_queries += k;
    }

    pub(crate) fn count_rank(&mut self, k: u64) {
        self.rank_queries += k;
    }

    /// Charge one adaptive round; errors in sequential mode or past the cap.
    pub(crate) fn begin_round(&mut self) -> Result<()> {
        if self.mode != Mode::ParallelSim {
            return Err(Error::LedgerMode(
                "batch submission requires parallel-sim mode".into(),
            ));
        }
        self.rounds += 1;
        if let Some(cap) = self.round_cap {
            if self.rounds > cap {
                return Err(Error::Timeout(self.rounds));
            }
        }
        Ok(())
    }

    pub(crate) fn fork(&self) -> Self {
        QueryLedger {
            mode: Mode::ParallelSim,
            independence_queries: 0,
            rank_queries: 0,
            rounds: 0,
            round_cap: self.round_cap,
        }
    }

    /// Fold a cooperating group of sub-ledgers into this one: queries add up,
    /// rounds advance by the maximum (each logical round merges the pending
    /// batches of all still-running fibers into a single oracle round).
    pub(crate) fn absorb_group(&mut self, subs: &[QueryLedger]) {
        let mut max_rounds = 0;
        for s in subs {
            self.independence_queries += s.independence_queries;
            self.rank_queries += s.rank_queries;
            max_rounds = max_rounds.max(s.rounds);
        }
        self.rounds += max_rounds;
    }
}

const DEFAULT_ROUND_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatroidTag {
    M1,
    M2,
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Independence,
    Rank,
}

#[derive(Debug, Clone)]
pub struct Query {
    pub tag: MatroidTag,
    pub kind: QueryKind,
    pub set: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Independence(bool),
    Rank(usize),
}

/// Resolves matroid tags for a batch.
#[derive(Debug, Clone, Copy)]
pub enum BatchEnv<'a> {
    Single(&'a MatroidHandle),
    Pair(&'a MatroidHandle, &'a MatroidHandle),
}

impl<'a> BatchEnv<'a> {
    fn resolve(&self, tag: MatroidTag) -> Result<&'a MatroidHandle> {
        match (self, tag) {
            (BatchEnv::Single(m), MatroidTag::Single) => Ok(m),
            (BatchEnv::Pair(m, _), MatroidTag::M1) => Ok(m),
            (BatchEnv::Pair(_, m), MatroidTag::M2) => Ok(m),
            _ => Err(Error::input("query tag does not match batch environment")),
        }
    }
}

/// Submit one round of queries. Answers are positionally aligned and depend
/// only on matroid state, never on each other.
pub fn submit_batch(
    env: &BatchEnv<'_>,
    ledger: &mut QueryLedger,
    queries: &[Query],
) -> Result<Vec<Answer>> {
    if queries.is_empty() {
        return Err(Error::input("a round must contain at least one query"));
    }
    ledger.begin_round()?;
    let mut answers = Vec::with_capacity(queries.len());
    for q in queries {
        let m = env.resolve(q.tag)?;
        m.check_subset(&q.set)?;
        match q.kind {
            QueryKind::Independence => {
                ledger.count_independence(1);
                answers.push(Answer::Independence(m.raw_independent(&q.set)));
            }
            QueryKind::Rank => {
                ledger.count_rank(1);
                answers.push(Answer::Rank(m.raw_rank(&q.set)));
            }
        }
    }
    Ok(answers)
}

/// One cooperating computation inside a [`run_parallel_group`] round merge.
pub type Fiber<'a, T> = Box<dyn FnOnce(&mut QueryLedger) -> Result<T> + 'a>;

/// Run cooperating fibers: per logical round the batches of all alive fibers
/// merge into one ledger round, so total rounds charged is the max over
/// fibers while query counts add up. Fibers are independent state machines
/// (batch answers never depend on each other), so executing them to
/// completion one at a time on forked ledgers is an exact simulation.
pub fn run_parallel_group<T>(
    ledger: &mut QueryLedger,
    fibers: Vec<Fiber<'_, T>>,
) -> Result<Vec<T>> {
    if ledger.mode() != Mode::ParallelSim {
        return Err(Error::LedgerMode(
            "parallel group requires parallel-sim mode".into(),
        ));
    }
    let mut results = Vec::with_capacity(fibers.len());
    let mut subs = Vec::with_capacity(fibers.len());
    for fiber in fibers {
        let mut sub = ledger.fork();
        results.push(fiber(&mut sub)?);
        subs.push(sub);
    }
    ledger.absorb_group(&subs);
    Ok(results)
}

// ---- counted oracle access ----------------------------------------------

impl MatroidHandle {
    /// One independence query.
    pub fn is_independent(&self, set: &[usize], ledger: &mut QueryLedger) -> bool {
        debug_assert!(self.check_subset(set).is_ok());
        ledger.count_independence(1);
        self.raw_independent(set)
    }

    /// One rank query.
    pub fn rank(&self, set: &[usize], ledger: &mut QueryLedger) -> usize {
        debug_assert!(self.check_subset(set).is_ok());
        ledger.count_rank(1);
        self.raw_rank(set)
    }
}

/// Ranks of all prefixes of `order`: n rank queries in a single round
/// (sequential mode just counts the queries).
pub fn batch_prefix_ranks(
    m: &MatroidHandle,
    order: &[usize],
    ledger: &mut QueryLedger,
) -> Result<Vec<usize>> {
    if ledger.is_parallel() {
        ledger.begin_round()?;
    }
    ledger.count_rank(order.len() as u64);
    let mut sc = m.scanner();
    let mut ranks = Vec::with_capacity(order.len());
    let mut r = 0usize;
    for &e in order {
        if sc.insert(e) {
            r += 1;
        }
        ranks.push(r);
    }
    Ok(ranks)
}

/// Independence of `base + tail[..k]` for every k in 1..=len(tail), counted
/// as len(tail) independence queries. Caller charges the round.
pub fn chain_independence(base: &Scan<'_>, tail: &[usize], ledger: &mut QueryLedger) -> Vec<bool> {
    ledger.count_independence(tail.len() as u64);
    let mut sc = base.clone_scanner();
    let mut ok = base.independent;
    let mut out = Vec::with_capacity(tail.len());
    for &e in tail {
        if ok {
            ok = sc.insert(e);
        }
        out.push(ok);
    }
    out
}

/// Independence of `base + y` for each candidate `y`, counted as one query
/// per candidate. Caller charges the round.
pub fn star_independence(
    base: &Scan<'_>,
    candidates: &[usize],
    ledger: &mut QueryLedger,
) -> Vec<bool> {
    ledger.count_independence(candidates.len() as u64);
    if !base.independent {
        return vec![false; candidates.len()];
    }
    let mut sc = base.clone_scanner();
    candidates.iter().map(|&y| sc.probe(y)).collect()
}

/// A materialized base set fed into a scanner, reusable across many related
/// queries.
pub struct Scan<'a> {
    scanner: crate::matroid::Scanner<'a>,
    pub independent: bool,
    pub rank: usize,
}

impl<'a> Scan<'a> {
    pub fn of(m: &'a MatroidHandle, base: &[usize]) -> Self {
        let mut scanner = m.scanner();
        let mut rank = 0usize;
        for &e in base {
            if scanner.insert(e) {
                rank += 1;
            }
        }
        Scan {
            scanner,
            independent: rank == base.len(),
            rank,
        }
    }

    fn clone_scanner(&self) -> crate::matroid::Scanner<'a> {
        self.scanner.clone()
    }
}
