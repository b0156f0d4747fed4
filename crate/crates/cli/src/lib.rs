//! Command-line front end for pellkit.
//!
//! [`run`] parses an argument vector, dispatches to one library operation
//! and serializes the result. The binary is a thin wrapper around it, so
//! tests drive the same code path in-process.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use pellkit::applications::{
    gp_construct, gp_scan, gp_scan_form, ljunggren_bruteforce, ljunggren_compare, ljunggren_solve,
    ma_bruteforce, ma_solve, LjunggrenBounds, LjunggrenFamily, LjunggrenQuery, MaEquation, MaInstance,
    SignMode,
};
use pellkit::lehmer::{lehmer_sequences, lemma23_scan, prop21_check};
use pellkit::pell::{mixed_solutions, pell_solutions};
use pellkit::splitting::{perron_trichotomy, split_quartic, splitting_scan, PerronReport};
use pellkit::stormer::{classify_mixed, classify_pell, verify_theorems};
use pellkit::{
    fundamental_solution, minimal_solution, split, Bounds, Error, LehmerParams, PellRhs, SplitResult,
    TheoremId, VerifyOptions,
};

pub mod table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "pellkit", version, about = "Pell-type equations kx² − ly² = C: solvers and bounded verifiers")]
pub struct Cli {
    /// Output mode.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the document to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fundamental solution of x² − Dy² = rhs, rhs ∈ {1, −1, 4, −4}.
    Pell(PellArgs),
    /// Minimal positive solution of kx² − ly² = C.
    Minimal(MinimalArgs),
    /// Which power of the fundamental (or minimal) solution a solution is.
    Classify(ClassifyArgs),
    /// Coprime splitting D = k·l and the x² − Dy² ∈ {−1, ±2} trichotomy.
    Split(SplitArgs),
    /// Lehmer sequences and their divisibility checks.
    Lehmer(LehmerArgs),
    /// Run the Störmer-type statements over bounded radicands and powers.
    Verify(VerifyArgs),
    /// Triangular numbers (or Dm² ± C) in geometric progression.
    Gp(GpArgs),
    /// Ma-conjecture equations x² = p^{2a}·Πk^{2t}·y² − p^{a+b}·Πk^{t+r}·δ + C.
    Ma(MaArgs),
    /// Ljunggren-type quotient equations.
    Ljunggren(LjunggrenArgs),
}

#[derive(Args, Debug)]
pub struct PellArgs {
    #[arg(long)]
    pub d: u64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    pub rhs: i64,
    /// For rhs = ±4: only solutions with x, y odd.
    #[arg(long)]
    pub odd: bool,
    /// List the first N solutions instead of the fundamental one.
    #[arg(long, value_name = "N")]
    pub count: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MinimalArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub l: u64,
    #[arg(long, default_value_t = 1)]
    pub c: u8,
    /// List the first N solutions instead of the minimal one.
    #[arg(long, value_name = "N")]
    pub count: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub x: BigUint,
    #[arg(long)]
    pub y: BigUint,
    /// Radicand of x² − Dy² = ±1, ±4.
    #[arg(long, conflicts_with_all = ["k", "l"], required_unless_present_all = ["k", "l"])]
    pub d: Option<u64>,
    #[arg(long, requires = "l")]
    pub k: Option<u64>,
    #[arg(long, requires = "k")]
    pub l: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub c: u8,
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    #[arg(long, required_unless_present = "scan")]
    pub d: Option<u64>,
    /// Check the splitting statements for every nonsquare D ≤ DMAX.
    #[arg(long, value_name = "DMAX", conflicts_with = "d")]
    pub scan: Option<u64>,
}

#[derive(Args, Debug)]
pub struct LehmerArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub q: i64,
    /// Last index (or scan bound with --lemma23).
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    /// Check the divisibility claims on the pair (m, n).
    #[arg(long, conflicts_with = "lemma23")]
    pub m: Option<usize>,
    /// Prime for the p-adic claim, with --m.
    #[arg(long, requires = "m")]
    pub prime: Option<u64>,
    /// List n ≤ N with Q_n = k·u² or 2k·u², k a squarefree divisor of n.
    #[arg(long)]
    pub lemma23: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Statement tag (3.1 to 3.12) or `all`.
    #[arg(long, default_value = "all")]
    pub theorem: String,
    #[arg(long, default_value_t = 100)]
    pub dmax: u64,
    #[arg(long, default_value_t = 9)]
    pub mmax: u64,
    /// Read the two-prime x² − Dy² = 1 statement loosely.
    #[arg(long)]
    pub lenient: bool,
    /// Stop starting new radicands after this many seconds; the report is
    /// then marked partial.
    #[arg(long, value_name = "SECONDS")]
    pub budget_seconds: Option<f64>,
}

#[derive(Args, Debug)]
pub struct GpArgs {
    /// Largest index (or m) scanned.
    #[arg(long, default_value_t = 2000)]
    pub bound: u64,
    #[arg(long, default_value_t = 3)]
    pub length: usize,
    /// Build the progression T_n, T_{n+2m}, T_{3n+4m+1} from T_n = m².
    #[arg(long, value_name = "N", conflicts_with_all = ["d"])]
    pub construct: Option<u64>,
    /// Scan values Dm² ± C instead of triangular numbers.
    #[arg(long, requires = "c")]
    pub d: Option<u64>,
    #[arg(long, requires = "d")]
    pub c: Option<u64>,
    #[arg(long, value_enum, default_value_t = Sign::Both)]
    pub sign: Sign,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MaKind {
    /// C = 1, δ = ±1
    Unit,
    /// C = 1, δ = ±2, ±4, y odd
    Even,
    /// C = 4, δ = ±4, y odd
    Four,
}

#[derive(Args, Debug)]
pub struct MaArgs {
    #[arg(long, value_enum)]
    pub equation: MaKind,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub a: u32,
    #[arg(long)]
    pub b: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: i64,
    /// Search x, y ≤ BOUND directly instead of using the closed forms.
    #[arg(long, value_name = "BOUND")]
    pub brute: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    /// (axⁿ + c)/(ax + c) = y²
    OddPower,
    /// (ax^{n+2l} + c)/(axⁿ + c) = y², y rational
    ShiftedPower,
    /// (ax^{n+2l} + c)/(abt²xⁿ + c) = by²
    ScaledShifted,
    /// (axⁿ + c)/(abxt² + c) = by²
    ScaledOdd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LjMode {
    Solve,
    Brute,
    Compare,
}

#[derive(Args, Debug)]
pub struct LjunggrenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, allow_hyphen_values = true)]
    pub c: i64,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long, value_enum, default_value_t = LjMode::Solve)]
    pub mode: LjMode,
    #[arg(long, default_value_t = 10)]
    pub amax: u64,
    #[arg(long, default_value_t = 10)]
    pub xmax: u64,
    #[arg(long, default_value_t = 12)]
    pub nmax: u32,
    #[arg(long, default_value_t = 4)]
    pub lmax: u32,
    #[arg(long, default_value_t = 3)]
    pub tmax: u64,
}

/// `split --d` output. `perron` is absent for D = 2, `quartic` for even D.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitDoc {
    pub d: u64,
    pub split: Option<SplitResult>,
    pub quartic: Option<SplitResult>,
    pub perron: Option<PerronReport>,
}

/// `lehmer` output without --m or --lemma23: P₀..P_n and Q₀..Q_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LehmerDoc {
    pub params: LehmerParams,
    #[serde(with = "pellkit::dec::nat_vec")]
    pub p: Vec<BigUint>,
    #[serde(with = "pellkit::dec::nat_vec")]
    pub q: Vec<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    #[serde(with = "pellkit::dec::nat")]
    pub x: BigUint,
    #[serde(with = "pellkit::dec::nat")]
    pub y: BigUint,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library values serialize")
}

fn dispatch(cmd: &Command) -> pellkit::Result<Value> {
    Ok(match cmd {
        Command::Pell(a) => {
            let rhs = PellRhs::try_from(a.rhs)?;
            let fund = fundamental_solution(a.d, rhs, a.odd)?;
            match (a.count, fund) {
                (Some(n), Some(f)) => to_value(&pell_solutions(&f, n)?),
                (Some(_), None) => Value::Array(vec![]),
                (None, f) => to_value(&f),
            }
        }
        Command::Minimal(a) => {
            let min = minimal_solution(a.k, a.l, a.c)?;
            match (a.count, min) {
                (Some(n), Some(m)) => to_value(&mixed_solutions(&m, n)?),
                (Some(_), None) => Value::Array(vec![]),
                (None, m) => to_value(&m),
            }
        }
        Command::Classify(a) => match (a.d, a.k, a.l) {
            (Some(d), _, _) => to_value(&classify_pell(&a.x, &a.y, d)?),
            (None, Some(k), Some(l)) => to_value(&classify_mixed(&a.x, &a.y, k, l, a.c)?),
            _ => unreachable!("clap enforces --d or --k/--l"),
        },
        Command::Split(a) => match (a.scan, a.d) {
            (Some(dmax), _) => to_value(&splitting_scan(dmax)?),
            (None, Some(d)) => {
                let split = split(d)?;
                let quartic = if d % 2 == 1 { split_quartic(d)? } else { None };
                let perron = if d == 2 { None } else { Some(perron_trichotomy(d)?) };
                to_value(&SplitDoc { d, split, quartic, perron })
            }
            _ => unreachable!("clap enforces --d or --scan"),
        },
        Command::Lehmer(a) => {
            let params = LehmerParams::new(a.r, a.q)?;
            if let Some(m) = a.m {
                to_value(&prop21_check(m, a.n, &params, a.prime)?)
            } else if a.lemma23 {
                to_value(&lemma23_scan(&params, a.n)?)
            } else {
                let (p, q) = lehmer_sequences(a.n, &params);
                to_value(&LehmerDoc { params, p, q })
            }
        }
        Command::Verify(a) => {
            let ids: Vec<TheoremId> = if a.theorem == "all" {
                TheoremId::all().collect()
            } else {
                vec![a.theorem.parse()?]
            };
            let opts = VerifyOptions {
                strict: !a.lenient,
                deadline: a.budget_seconds.map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
                ..VerifyOptions::default()
            };
            let bounds = Bounds { d_max: a.dmax, m_max: a.mmax };
            let reports = verify_theorems(&ids, bounds, opts)?;
            if a.theorem == "all" {
                to_value(&reports)
            } else {
                to_value(&reports[0])
            }
        }
        Command::Gp(a) => {
            if let Some(n) = a.construct {
                to_value(&gp_construct(n)?)
            } else if let (Some(d), Some(c)) = (a.d, a.c) {
                let sign = match a.sign {
                    Sign::Plus => SignMode::Plus,
                    Sign::Minus => SignMode::Minus,
                    Sign::Both => SignMode::Both,
                };
                to_value(&gp_scan_form(d, c, sign, a.bound, a.length)?)
            } else {
                to_value(&gp_scan(a.bound, a.length)?)
            }
        }
        Command::Ma(a) => {
            let inst = MaInstance {
                equation: match a.equation {
                    MaKind::Unit => MaEquation::UnitDelta,
                    MaKind::Even => MaEquation::EvenDelta,
                    MaKind::Four => MaEquation::FourConstant,
                },
                p: a.p,
                a: a.a,
                b: a.b,
                k: a.k.clone(),
                t: a.t.clone(),
                r: a.r.clone(),
                delta: a.delta,
            };
            match a.brute {
                Some(bound) => {
                    let pairs: Vec<Pair> = ma_bruteforce(&inst, bound)?
                        .into_iter()
                        .map(|(x, y)| Pair { x, y })
                        .collect();
                    to_value(&pairs)
                }
                None => to_value(&ma_solve(&inst)?),
            }
        }
        Command::Ljunggren(a) => {
            let q = LjunggrenQuery {
                family: match a.family {
                    Family::OddPower => LjunggrenFamily::OddPower,
                    Family::ShiftedPower => LjunggrenFamily::ShiftedPower,
                    Family::ScaledShifted => LjunggrenFamily::ScaledShifted,
                    Family::ScaledOdd => LjunggrenFamily::ScaledOdd,
                },
                c: a.c,
                a: a.a,
                bounds: LjunggrenBounds {
                    a_max: a.amax,
                    x_max: a.xmax,
                    n_max: a.nmax,
                    l_max: a.lmax,
                    t_max: a.tmax,
                },
            };
            match a.mode {
                LjMode::Solve => to_value(&ljunggren_solve(&q)?),
                LjMode::Brute => to_value(&ljunggren_bruteforce(&q)?),
                LjMode::Compare => to_value(&ljunggren_compare(&q)?),
            }
        }
    })
}

/// Renders a document in the requested mode. Identical inputs give
/// byte-identical output.
pub fn emit(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Table => table::render(doc),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::IncompleteFactorization { .. } | Error::NoTheorem(_) | Error::Uncovered(_) => {
            EXIT_DOMAIN
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code with what would be written to each stream.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let doc = match dispatch(&cli.command) {
        Ok(doc) => doc,
        Err(e) => {
            return Outcome {
                code: exit_code(&e),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let text = emit(&doc, cli.format);
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code: EXIT_OK, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome {
                code: EXIT_DOMAIN,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { code: EXIT_OK, stdout: text, stderr: String::new() },
    }
}
