//! Command-line front end: instance generation, solving, report verification,
//! and benchmark sweeps. Exit codes: 0 pass, 1 verification failure, 2 input
//! error.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::auction::{
    additive_approx, extract_dual, multiplicative_approx_simple, observed_slack, run_auction,
    AuctionParams, AuctionState,
};
use crate::basis::BasisFinder;
use crate::error::{Error, Result};
use crate::exact::{
    exact_parallel_certified, exact_sequential, exact_sequential_certified, OracleKind,
};
use crate::harness::generate;
use crate::harness::instance::Instance;
use crate::harness::report::{DualSets, RunReport};
use crate::harness::verify::verify_report;
use crate::ledger::QueryLedger;
use crate::ratio::Ratio;
use crate::sparsify::{mwu_sparsified_intersection, MwuConfig};
use crate::weighted::weighted_intersection;

#[derive(Parser)]
#[command(name = "mintersect", about = "Matroid intersection toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance JSON from a named family.
    Gen(GenArgs),
    /// Solve an instance and emit a run report.
    Solve(SolveArgs),
    /// Re-check a run report against its instance.
    Verify { instance: PathBuf, report: PathBuf },
    /// Sweep an (alg, n, eps) grid and emit CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenType {
    /// Bipartite matching as two capacity-1 partition matroids.
    Bipartite,
    /// Random multigraph vs a random partition matroid.
    GraphicPartition,
    /// Two random linear matroids over GF(p).
    Linear,
    /// Two uniform matroids.
    Uniform,
    /// Interleaved capacity-1 partition pair with r = n/2.
    Shifted,
    /// Low-rank partition vs uniform pair.
    Sparse,
    /// Random pick from the concrete families.
    Random,
}

#[derive(Parser)]
struct GenArgs {
    #[arg(long = "type", value_enum)]
    family: GenType,
    #[arg(long, default_value_t = 3)]
    nl: usize,
    #[arg(long, default_value_t = 3)]
    nr: usize,
    #[arg(long, default_value_t = 1.0)]
    edge_prob: f64,
    #[arg(long, default_value_t = 8)]
    nv: usize,
    #[arg(long, default_value_t = 4)]
    blocks: usize,
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    /// Rank of the sparse family.
    #[arg(long, default_value_t = 4)]
    r: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Attach uniform random weights in 0..=W.
    #[arg(long)]
    weights: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Alg {
    AuctionAdditive,
    AuctionMult,
    ExactSeq,
    ExactPar,
    Weighted,
    Mwu,
}

impl Alg {
    fn name(self) -> &'static str {
        match self {
            Alg::AuctionAdditive => "auction-additive",
            Alg::AuctionMult => "auction-mult",
            Alg::ExactSeq => "exact-seq",
            Alg::ExactPar => "exact-par",
            Alg::Weighted => "weighted",
            Alg::Mwu => "mwu",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Independence,
    Rank,
}

impl OracleArg {
    fn kind(self) -> OracleKind {
        match self {
            OracleArg::Independence => OracleKind::Independence,
            OracleArg::Rank => OracleKind::Rank,
        }
    }

    fn name(self) -> &'static str {
        match self {
            OracleArg::Independence => "independence",
            OracleArg::Rank => "rank",
        }
    }
}

#[derive(Parser)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long, value_enum, default_value = "independence")]
    oracle: OracleArg,
    /// Approximation parameter, e.g. "1/4" or "0.25".
    #[arg(long)]
    eps: Option<String>,
    /// Batch threshold, or "auto" for the algorithm defaults.
    #[arg(long, default_value = "auto")]
    delta: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    c1: u64,
    #[arg(long, default_value_t = 4)]
    c2: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Parser)]
struct BenchArgs {
    /// Comma-separated algorithms.
    #[arg(
        long,
        value_delimiter = ',',
        value_enum,
        default_value = "auction-additive"
    )]
    algs: Vec<Alg>,
    /// Comma-separated ground-set sizes (even; the family has r = n/2).
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    ns: Vec<usize>,
    /// Comma-separated eps values.
    #[arg(long = "eps", value_delimiter = ',', default_value = "1/4")]
    eps_list: Vec<String>,
    #[arg(long, value_enum, default_value = "independence")]
    oracle: OracleArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse "a/b", a decimal like "0.25", or an integer.
pub fn parse_eps(s: &str) -> Result<Ratio> {
    let bad = || Error::input(format!("cannot parse eps {s:?}; use a/b or a decimal"));
    if let Some((a, b)) = s.split_once('/') {
        let num: u64 = a.trim().parse().map_err(|_| bad())?;
        let den: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ratio::new(num, den);
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let num = int * den + frac.parse::<u64>().map_err(|_| bad())?;
        return Ratio::new(num, den);
    }
    let num: u64 = s.trim().parse().map_err(|_| bad())?;
    Ratio::new(num, 1)
}

fn parse_delta(s: &str) -> Result<Option<u64>> {
    if s == "auto" {
        Ok(None)
    } else {
        s.parse::<u64>().map(Some).map_err(|_| {
            Error::input(format!(
                "cannot parse delta {s:?}; use an integer or \"auto\""
            ))
        })
    }
}

fn eps_string(eps: Ratio) -> String {
    format!("{}/{}", eps.num(), eps.den())
}

fn require_eps(eps: Option<Ratio>, alg: Alg) -> Result<Ratio> {
    eps.ok_or_else(|| Error::input(format!("--eps is required for --alg {}", alg.name())))
}

fn auction_report_fields(state: &AuctionState, params: &AuctionParams, report: &mut RunReport) {
    let dual = extract_dual(state, params);
    report.solution = state.solution();
    report.size = report.solution.len();
    report.delta = Some(params.delta);
    report.dual = Some(DualSets {
        a: dual.a,
        b: dual.b,
    });
    report.certified_slack = Some(observed_slack(state, params));
}

/// Run one algorithm on one instance and assemble the report. This is the
/// whole of `solve` minus file I/O, reused by `bench` and tests.
#[allow(clippy::too_many_arguments)]
pub fn solve_instance(
    inst: &Instance,
    alg: Alg,
    oracle: OracleArg,
    eps: Option<Ratio>,
    delta: Option<u64>,
    seed: u64,
    c1: u64,
    c2: u64,
) -> Result<RunReport> {
    let (m1, m2) = inst.matroids()?;
    let start = Instant::now();
    let mut report = RunReport {
        alg: alg.name().to_string(),
        oracle: None,
        instance_sha256: inst.sha256(),
        n: inst.n,
        eps: eps.map(eps_string),
        delta,
        seed: None,
        solution: Vec::new(),
        size: 0,
        weight: None,
        scales: None,
        dual: None,
        certified_slack: None,
        queries_ind: 0,
        queries_rank: 0,
        rounds: None,
        coverage: None,
        wall_ms: 0,
    };
    match alg {
        Alg::AuctionAdditive | Alg::AuctionMult => {
            let eps = require_eps(eps, alg)?;
            let mut ledger = QueryLedger::sequential();
            let (state, params) = match (delta, alg) {
                (Some(d), _) => {
                    let params = AuctionParams::from_eps(eps, d)?;
                    (
                        run_auction(&m1, &m2, params, BasisFinder::Greedy, &mut ledger)?,
                        params,
                    )
                }
                (None, Alg::AuctionAdditive) => additive_approx(&m1, &m2, eps, &mut ledger)?,
                (None, _) => multiplicative_approx_simple(&m1, &m2, eps, &mut ledger)?,
            };
            auction_report_fields(&state, &params, &mut report);
            report.queries_ind = ledger.independence_queries;
            report.queries_rank = ledger.rank_queries;
        }
        Alg::ExactSeq => {
            let mut ledger = QueryLedger::sequential();
            let res = exact_sequential_certified(&m1, &m2, &mut ledger)?;
            report.size = res.solution.len();
            report.solution = res.solution;
            report.dual = Some(DualSets {
                a: res.dual.a,
                b: res.dual.b,
            });
            report.certified_slack = Some(0);
            report.queries_ind = ledger.independence_queries;
            report.queries_rank = ledger.rank_queries;
        }
        Alg::ExactPar => {
            let mut ledger = QueryLedger::parallel_sim();
            let res = exact_parallel_certified(&m1, &m2, oracle.kind(), &mut ledger)?;
            report.oracle = Some(oracle.name().to_string());
            report.size = res.solution.len();
            report.solution = res.solution;
            report.dual = Some(DualSets {
                a: res.dual.a,
                b: res.dual.b,
            });
            report.certified_slack = Some(0);
            report.queries_ind = ledger.independence_queries;
            report.queries_rank = ledger.rank_queries;
            report.rounds = Some(ledger.rounds);
        }
        Alg::Weighted => {
            let w = inst
                .weights
                .as_ref()
                .ok_or_else(|| Error::input("--alg weighted needs \"weights\" in the instance"))?;
            let mut ledger = QueryLedger::parallel_sim();
            let res = weighted_intersection(&m1, &m2, w, oracle.kind(), &mut ledger)?;
            report.oracle = Some(oracle.name().to_string());
            report.size = res.solution.len();
            report.solution = res.solution;
            report.weight = Some(res.weight);
            report.scales = Some(res.scales);
            report.queries_ind = ledger.independence_queries;
            report.queries_rank = ledger.rank_queries;
            report.rounds = Some(ledger.rounds);
        }
        Alg::Mwu => {
            let eps = require_eps(eps, alg)?;
            let mut ledger = QueryLedger::sequential();
            let config = MwuConfig { c1, c2, seed };
            let res = mwu_sparsified_intersection(&m1, &m2, eps, &config, &mut ledger)?;
            report.seed = Some(seed);
            report.size = res.solution.len();
            report.solution = res.solution;
            report.coverage = Some(res.coverage);
            report.queries_ind = ledger.independence_queries;
            report.queries_rank = ledger.rank_queries;
        }
    }
    report.wall_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn generate_instance(args: &GenArgs) -> Instance {
    let inst = match args.family {
        GenType::Bipartite => generate::bipartite(args.nl, args.nr, args.edge_prob, args.seed),
        GenType::GraphicPartition => {
            generate::graphic_vs_partition(args.nv, args.blocks, args.seed)
        }
        GenType::Linear => generate::linear_pair(args.p, args.dim, args.n, args.seed),
        GenType::Uniform => generate::uniform_pair(
            args.n,
            args.k1.unwrap_or(args.n / 2),
            args.k2.unwrap_or(args.n / 2),
        ),
        GenType::Shifted => generate::shifted_partition_pair(args.n),
        GenType::Sparse => generate::sparse_partition(args.n, args.r, args.seed),
        GenType::Random => generate::random_instance(args.n, args.seed),
    };
    match args.weights {
        Some(w_max) => generate::with_weights(inst, w_max, args.seed),
        None => inst,
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run_bench(args: &BenchArgs) -> Result<String> {
    let mut csv =
        String::from("alg,n,r,eps,queries_ind,queries_rank,rounds,size,opt_size,wall_ms\n");
    for &alg in &args.algs {
        for &n in &args.ns {
            let inst = if n >= 2 && n % 2 == 0 {
                generate::shifted_partition_pair(n)
            } else {
                return Err(Error::input(format!("bench needs even n >= 2, got {n}")));
            };
            let (m1, m2) = inst.matroids()?;
            let mut reference = QueryLedger::sequential();
            let opt_size = exact_sequential(&m1, &m2, &mut reference)?.len();
            for eps_text in &args.eps_list {
                let eps = parse_eps(eps_text)?;
                let uses_eps = matches!(alg, Alg::AuctionAdditive | Alg::AuctionMult | Alg::Mwu);
                let report = solve_instance(
                    &inst,
                    alg,
                    args.oracle,
                    uses_eps.then_some(eps),
                    None,
                    0,
                    4,
                    4,
                )?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    alg.name(),
                    inst.n,
                    opt_size,
                    if uses_eps {
                        eps_string(eps)
                    } else {
                        "-".to_string()
                    },
                    report.queries_ind,
                    report.queries_rank,
                    report.rounds.unwrap_or(0),
                    report.size,
                    opt_size,
                    report.wall_ms,
                ));
                if !uses_eps {
                    // exact algorithms ignore eps; one row per n is enough
                    break;
                }
            }
        }
    }
    Ok(csv)
}

/// Entry point. `Ok(0)` pass, `Ok(1)` verification failure; any `Err` is an
/// input error the binary maps to exit code 2.
pub fn main() -> Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(args) => {
            let inst = generate_instance(&args);
            emit(&inst.to_json(), &args.out)?;
            Ok(0)
        }
        Command::Solve(args) => {
            let inst = Instance::from_path(&args.instance)?;
            let eps = args.eps.as_deref().map(parse_eps).transpose()?;
            let delta = parse_delta(&args.delta)?;
            let report = solve_instance(
                &inst,
                args.alg,
                args.oracle,
                eps,
                delta,
                args.seed,
                args.c1,
                args.c2,
            )?;
            emit(&report.to_json(), &args.out)?;
            Ok(0)
        }
        Command::Verify { instance, report } => {
            let inst = Instance::from_path(&instance)?;
            let rep = RunReport::from_path(&report)?;
            let verdict = verify_report(&inst, &rep)?;
            if verdict.pass {
                println!("PASS");
                Ok(0)
            } else {
                println!("FAIL");
                for v in &verdict.violations {
                    println!("  {v}");
                }
                Ok(1)
            }
        }
        Command::Bench(args) => {
            let csv = run_bench(&args)?;
            emit(&csv, &args.out)?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_eps_forms() {
        assert_eq!(parse_eps("1/4").unwrap(), Ratio::new(1, 4).unwrap());
        assert_eq!(parse_eps("0.25").unwrap(), Ratio::new(25, 100).unwrap());
        assert_eq!(parse_eps("2").unwrap(), Ratio::new(2, 1).unwrap());
        assert!(parse_eps("x").is_err());
        assert!(parse_eps("1/0").is_err());
    }

    #[test]
    fn solve_then_verify_every_alg() {
        let inst = generate::with_weights(generate::bipartite(4, 4, 1.0, 7), 8, 7);
        let eps = Some(Ratio::new(1, 4).unwrap());
        for (alg, oracle) in [
            (Alg::AuctionAdditive, OracleArg::Independence),
            (Alg::AuctionMult, OracleArg::Independence),
            (Alg::ExactSeq, OracleArg::Independence),
            (Alg::ExactPar, OracleArg::Rank),
            (Alg::ExactPar, OracleArg::Independence),
            (Alg::Weighted, OracleArg::Rank),
            (Alg::Mwu, OracleArg::Independence),
        ] {
            let report = solve_instance(&inst, alg, oracle, eps, None, 0, 4, 4).unwrap();
            let verdict = verify_report(&inst, &report).unwrap();
            assert!(verdict.pass, "{}: {:?}", alg.name(), verdict.violations);
        }
    }

    #[test]
    fn explicit_delta_respected() {
        let inst = generate::bipartite(4, 4, 1.0, 7);
        let eps = Some(Ratio::new(1, 2).unwrap());
        let report = solve_instance(
            &inst,
            Alg::AuctionAdditive,
            OracleArg::Independence,
            eps,
            Some(3),
            0,
            4,
            4,
        )
        .unwrap();
        assert_eq!(report.delta, Some(3));
    }

    #[test]
    fn weighted_requires_weights() {
        let inst = generate::bipartite(3, 3, 1.0, 1);
        let err =
            solve_instance(&inst, Alg::Weighted, OracleArg::Rank, None, None, 0, 4, 4).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn bench_rows_match_grid() {
        let args = BenchArgs {
            algs: vec![Alg::AuctionAdditive, Alg::ExactSeq],
            ns: vec![8, 16],
            eps_list: vec!["1/2".into(), "1/4".into()],
            oracle: OracleArg::Independence,
            out: None,
        };
        let csv = run_bench(&args).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        // header + (auction: 2 n × 2 eps) + (exact-seq ignores eps: 2 n)
        assert_eq!(rows.len(), 1 + 4 + 2);
        assert_eq!(
            rows[0],
            "alg,n,r,eps,queries_ind,queries_rank,rounds,size,opt_size,wall_ms"
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let inst = generate::sparse_partition(40, 5, 2);
        let eps = Some(Ratio::new(1, 4).unwrap());
        let a =
            solve_instance(&inst, Alg::Mwu, OracleArg::Independence, eps, None, 9, 4, 4).unwrap();
        let b =
            solve_instance(&inst, Alg::Mwu, OracleArg::Independence, eps, None, 9, 4, 4).unwrap();
        let strip = |mut r: RunReport| {
            r.wall_ms = 0;
            r.to_json()
        };
        assert_eq!(strip(a), strip(b));
    }
}
