use clap::{Parser, Subcommand, ValueEnum};
use rough_divisors::counting::{Weight, MARK_BUDGET};
use rough_divisors::Error;
use rough_divisors_cli as cli;
use std::io::Write;
use std::process::ExitCode;

/// Exact experiments around integers with a divisor in a given interval.
///
/// Every subcommand emits CSV (header row, one row per grid point, summary
/// rows prefixed `#summary`) to stdout or `--out`. Output is byte-stable
/// for a fixed configuration and seed. Exit codes: 0 success, 1 bad flags,
/// 2 domain error, 3 resource-budget error.
#[derive(Parser)]
#[command(name = "roughdiv", version, disable_help_subcommand = true)]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count n <= x with no prime factor <= w and a divisor in (y, z].
    CountH {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long)]
        z: u64,
        #[arg(long, default_value_t = 1)]
        w: u64,
        /// Restrict to squarefree n.
        #[arg(long, default_value_t = false)]
        squarefree: bool,
        /// Marking budget override (bits allocated = x + 1).
        #[arg(long, default_value_t = MARK_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Count n <= x with no prime factor <= z (n = 1 included).
    RoughCount {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        z: u64,
        /// Count only n in (x/2, x].
        #[arg(long, default_value_t = false)]
        half: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Distinct products a*b (a, b <= N) with no prime factor <= w.
    MultTable {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        w: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Size of the product set of Farey fractions of order N.
    Farey {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Greedy prime blocks with reciprocal sums <= log 2, up to a limit.
    LambdaLadder {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Divisor-clustering statistics L(a), W*(a), isolated divisors.
    LOfA {
        /// Single value to analyze.
        #[arg(long, conflicts_with = "max")]
        a: Option<u64>,
        /// Sweep a = 1..=max instead.
        #[arg(long)]
        max: Option<u64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact weighted sum over squarefree integers with primes in (w, t].
    SumP {
        #[arg(long)]
        w: u64,
        #[arg(long)]
        t: u64,
        /// Restrict to omega(a) = k (omit to sum over all).
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value_t = WeightArg::Reciprocal)]
        weight: WeightArg,
        #[arg(long)]
        out: Option<String>,
    },
    /// Monte Carlo volume of a constrained ordered-simplex region.
    Volume {
        #[arg(long, value_enum)]
        kind: VolumeKindArg,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        v: u32,
        /// Dyadic budget exponent for kind=yk.
        #[arg(long, default_value_t = 1)]
        s: i64,
        /// Slack parameter M for kind=yk.
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Relaxation exponent for kind=t.
        #[arg(long, default_value_t = 0)]
        gamma: u32,
        /// Scale exponent for kind=uk.
        #[arg(long, default_value_t = 1)]
        u: u32,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Ratio sweeps comparing exact counts with the order formulas.
    RatioSweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        /// x (single value; used by heuristic-vs-exact, or max x for norton).
        #[arg(long)]
        x: Option<u64>,
        /// y grid (comma separated).
        #[arg(long, value_delimiter = ',')]
        y: Option<Vec<u64>>,
        /// w grid (comma separated).
        #[arg(long, value_delimiter = ',')]
        w: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightArg {
    Reciprocal,
    LogOverA,
    LOverA,
    TauOverA,
    WstarOverA,
}

impl From<WeightArg> for Weight {
    fn from(w: WeightArg) -> Weight {
        match w {
            WeightArg::Reciprocal => Weight::Reciprocal,
            WeightArg::LogOverA => Weight::LogOverA,
            WeightArg::LOverA => Weight::LOverA,
            WeightArg::TauOverA => Weight::TauOverA,
            WeightArg::WstarOverA => Weight::WstarOverA,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VolumeKindArg {
    Yk,
    T,
    Uk,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    HVsOrder,
    HeuristicVsExact,
    Norton,
    HlRatio,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // covers both genuine flag errors and --help/--version
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: Args) -> Result<(), Error> {
    let (csv, out) = match args.cmd {
        Cmd::CountH {
            x,
            y,
            z,
            w,
            squarefree,
            budget,
            out,
        } => (cli::run_count_h(x, y, z, w, squarefree, budget)?, out),
        Cmd::RoughCount { x, z, half, out } => (cli::run_rough_count(x, z, half)?, out),
        Cmd::MultTable { n, w, out } => (cli::run_mult_table(n, w)?, out),
        Cmd::Farey { n, out } => (cli::run_farey(n)?, out),
        Cmd::LambdaLadder { limit, out } => (cli::run_lambda_ladder(limit)?, out),
        Cmd::LOfA { a, max, out } => {
            let csv = match (a, max) {
                (Some(a), None) => cli::run_l_of_a(std::iter::once(a), a)?,
                (None, Some(max)) => cli::run_l_of_a(1..=max, max)?,
                _ => {
                    return Err(Error::Domain(
                        "pass exactly one of --a or --max".to_string(),
                    ))
                }
            };
            (csv, out)
        }
        Cmd::SumP { w, t, k, weight, out } => (cli::run_sum_p(w, t, k, weight.into())?, out),
        Cmd::Volume {
            kind,
            k,
            v,
            s,
            m,
            gamma,
            u,
            samples,
            seed,
            out,
        } => {
            let kind = match kind {
                VolumeKindArg::Yk => cli::VolumeKind::Yk,
                VolumeKindArg::T => cli::VolumeKind::T,
                VolumeKindArg::Uk => cli::VolumeKind::Uk,
            };
            (cli::run_volume(kind, k, v, s, m, gamma, u, samples, seed)?, out)
        }
        Cmd::RatioSweep { kind, x, y, w, out } => {
            let csv = match kind {
                SweepKind::HVsOrder => {
                    let ys = y.unwrap_or_else(|| cli::defaults::H_VS_ORDER_YS.to_vec());
                    cli::sweep_h_vs_order(&ys)?
                }
                SweepKind::HeuristicVsExact => {
                    let x = x.unwrap_or(cli::defaults::HEURISTIC_X);
                    let ys = y.unwrap_or_else(|| cli::defaults::HEURISTIC_YS.to_vec());
                    let ws = w.unwrap_or_else(|| cli::defaults::HEURISTIC_WS.to_vec());
                    cli::sweep_heuristic_vs_exact(x, &ys, &ws)?
                }
                SweepKind::Norton => cli::sweep_norton(x.unwrap_or(cli::defaults::NORTON_MAX_X))?,
                SweepKind::HlRatio => {
                    let points: Vec<(u64, u64, u64)> = match (x, y, w) {
                        (None, None, None) => cli::defaults::HL_POINTS.to_vec(),
                        (x, y, w) => {
                            let x = x.unwrap_or(cli::defaults::HEURISTIC_X);
                            let ys = y.unwrap_or_else(|| vec![30, 40, 60]);
                            let ws = w.unwrap_or_else(|| vec![4, 5]);
                            ys.iter()
                                .flat_map(|&y| ws.iter().map(move |&w| (x, y, w)))
                                .collect()
                        }
                    };
                    cli::sweep_hl_ratio(&points)?
                }
            };
            (csv, out)
        }
    };
    emit(&csv, out.as_deref())
}

fn emit(csv: &cli::Csv, out: Option<&str>) -> Result<(), Error> {
    let rendered = csv.render();
    match out {
        None => {
            print!("{rendered}");
            Ok(())
        }
        Some(path) => std::fs::File::create(path)
            .and_then(|mut f| f.write_all(rendered.as_bytes()))
            .map_err(|e| Error::Resource(format!("cannot write {path}: {e}"))),
    }
}
