//! Command-line front end: one-shot permutation and flag operations in the
//! plain-text formats, plus the named verification suites with JSON/CSV
//! reports.
//!
//! Exit codes: 0 all assertions pass, 1 a suite assertion failed, 2 usage
//! or parse error, 3 enumeration budget exceeded. Timing goes to stderr so
//! reports stay byte-identical run to run.

use clap::{Args, Parser, Subcommand};
use richkit::demazure::star;
use richkit::enumerate::Budget;
use richkit::flag::{assoc_perm, Flag};
use richkit::perm::{
    bruhat_leq, contains_pattern, essential_set, ls_smooth, NestOfSets, Perm, RankTable,
};
use richkit::suites::{run_suite, SuiteConfig, SuiteError, SuiteKind, SuiteReport};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "richkit", version, about = "Schubert and Richardson loci over small prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Permutation and nest operations in the one-line text formats.
    Perm {
        #[command(subcommand)]
        op: PermOp,
    },
    /// Operations on flags stored in the matrix text format.
    Flag {
        #[command(subcommand)]
        op: FlagOp,
    },
    /// Run a named verification suite and emit its JSON report.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum PermOp {
    /// Inversion count.
    Inv { perm: String },
    /// Coinversion count.
    Coinv { perm: String },
    /// Demazure product of two permutations.
    Demazure { left: String, right: String },
    /// Decreasing completion of a nest of sets (`0,1,3;0,3;` style).
    Decomp { nest: String },
    /// The complete nest of a permutation.
    Nest { perm: String },
    /// Bruhat comparison: prints `true` iff the first is below the second.
    Bruhat { lower: String, upper: String },
    /// Essential set with rank values, one `a,b,r` triple per line.
    Ess { perm: String },
    /// Pattern-avoidance smoothness criterion.
    LsSmooth { perm: String },
    /// Whether the permutation contains the pattern.
    Pattern { perm: String, pattern: String },
}

#[derive(Subcommand)]
enum FlagOp {
    /// Associated permutation of two complete flags read from files.
    Assoc { path_p: PathBuf, path_q: PathBuf },
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: demazure-axioms, invfix, m-dim, image-theorem, codimension,
    /// smooth-locus, multi-product, ess-reduction, schubert-counts, lemma59.
    suite: String,
    /// Ambient dimension (suite default when omitted).
    #[arg(long)]
    d: Option<usize>,
    /// Single field size; shorthand for a one-element --q-list.
    #[arg(long, conflicts_with = "q_list")]
    q: Option<u64>,
    /// Comma-separated field sizes.
    #[arg(long, value_delimiter = ',')]
    q_list: Option<Vec<u64>>,
    /// Cap on worker threads for the parallel sweeps.
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration cap in flags per sweep; overrides RICHKIT_BUDGET.
    #[arg(long)]
    budget: Option<u64>,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Export the report's count polynomials as long-format CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

const USAGE: u8 = 2;
const BUDGET_EXCEEDED: u8 = 3;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn parse_perm(s: &str) -> Result<Perm, ExitCode> {
    Perm::from_str(s).map_err(|e| fail(USAGE, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Perm { op } => run_perm(op),
        Command::Flag { op } => run_flag(op),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_perm(op: PermOp) -> ExitCode {
    match op {
        PermOp::Inv { perm } => match parse_perm(&perm) {
            Ok(p) => println!("{}", p.inversions()),
            Err(code) => return code,
        },
        PermOp::Coinv { perm } => match parse_perm(&perm) {
            Ok(p) => println!("{}", p.coinversions()),
            Err(code) => return code,
        },
        PermOp::Demazure { left, right } => {
            let (t, p) = match (parse_perm(&left), parse_perm(&right)) {
                (Ok(t), Ok(p)) => (t, p),
                (Err(code), _) | (_, Err(code)) => return code,
            };
            match star(&t, &p) {
                Ok(prod) => println!("{prod}"),
                Err(e) => return fail(USAGE, e),
            }
        }
        PermOp::Decomp { nest } => match NestOfSets::from_str(&nest) {
            Ok(n) => println!("{}", n.decreasing_completion()),
            Err(e) => return fail(USAGE, e),
        },
        PermOp::Nest { perm } => match parse_perm(&perm) {
            Ok(p) => println!("{}", NestOfSets::of_perm(&p)),
            Err(code) => return code,
        },
        PermOp::Bruhat { lower, upper } => {
            let (a, b) = match (parse_perm(&lower), parse_perm(&upper)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(code), _) | (_, Err(code)) => return code,
            };
            if a.degree() != b.degree() {
                return fail(USAGE, "permutations have different degrees");
            }
            println!("{}", bruhat_leq(&a, &b));
        }
        PermOp::Ess { perm } => match parse_perm(&perm) {
            Ok(p) => {
                let rt = RankTable::from_perm(&p);
                for (a, b) in essential_set(&p) {
                    println!("{a},{b},{}", rt.entry(a, b));
                }
            }
            Err(code) => return code,
        },
        PermOp::LsSmooth { perm } => match parse_perm(&perm) {
            Ok(p) => println!("{}", ls_smooth(&p)),
            Err(code) => return code,
        },
        PermOp::Pattern { perm, pattern } => {
            let (p, pat) = match (parse_perm(&perm), parse_perm(&pattern)) {
                (Ok(p), Ok(pat)) => (p, pat),
                (Err(code), _) | (_, Err(code)) => return code,
            };
            println!("{}", contains_pattern(&p, &pat));
        }
    }
    ExitCode::SUCCESS
}

fn read_flag(path: &Path) -> Result<Flag, ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))?;
    Flag::from_text(&text).map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))
}

fn run_flag(op: FlagOp) -> ExitCode {
    match op {
        FlagOp::Assoc { path_p, path_q } => {
            let (p, q) = match (read_flag(&path_p), read_flag(&path_q)) {
                (Ok(p), Ok(q)) => (p, q),
                (Err(code), _) | (_, Err(code)) => return code,
            };
            if !p.is_complete() || !q.is_complete() {
                return fail(USAGE, "both flags must be complete");
            }
            if p.field() != q.field() || p.d() != q.d() {
                return fail(USAGE, "flags live in different spaces");
            }
            println!("{}", assoc_perm(&p, &q));
            ExitCode::SUCCESS
        }
    }
}

fn polynomials_csv(report: &SuiteReport) -> String {
    let mut out = String::from("locus,power,coefficient\n");
    for (key, coeffs) in &report.polynomials {
        for (power, c) in coeffs.iter().enumerate() {
            writeln!(out, "{key},{power},{c}").expect("writing to a string cannot fail");
        }
    }
    out
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    let kind = match SuiteKind::from_str(&args.suite) {
        Ok(kind) => kind,
        Err(e) => return fail(USAGE, e),
    };
    let budget = match args.budget {
        Some(limit) => Budget::new(limit),
        None => match std::env::var("RICHKIT_BUDGET") {
            Ok(v) => match v.parse::<u64>() {
                Ok(limit) => Budget::new(limit),
                Err(_) => return fail(USAGE, format!("RICHKIT_BUDGET is not an integer: {v:?}")),
            },
            Err(_) => Budget::default(),
        },
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(USAGE, e);
        }
    }
    let cfg = SuiteConfig {
        kind,
        d: args.d,
        q_list: args.q.map(|q| vec![q]).or(args.q_list),
        budget,
        seed: args.seed,
    };
    let start = Instant::now();
    let report = match run_suite(&cfg) {
        Ok(report) => report,
        Err(e) if e.is_budget_exceeded() => return fail(BUDGET_EXCEEDED, e),
        Err(e @ (SuiteError::UnknownSuite(_) | SuiteError::BadDimension(..))) => {
            return fail(USAGE, e)
        }
        Err(e) => return fail(USAGE, e),
    };
    eprintln!("elapsed_ms={}", start.elapsed().as_millis());

    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                return fail(USAGE, format!("{}: {e}", path.display()));
            }
        }
        None => println!("{json}"),
    }
    if let Some(path) = &args.csv {
        if let Err(e) = std::fs::write(path, polynomials_csv(&report)) {
            return fail(USAGE, format!("{}: {e}", path.display()));
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
