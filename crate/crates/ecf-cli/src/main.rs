use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ecf_cli::census_run::{self, default_tolerance};
use ecf_cli::output::{Format, Table};
use ecf_cli::params::{beta_string, parse_beta, parse_qi, parse_ratio, ratio_string};
use ecf_cli::suites::{self, Check};
use ecf_cli::{row, CliError};
use ecf_core::census::{Beta, CensusDetail, CensusResult, Kind, Method};
use ecf_core::cf_shifts::{expand, length_of_period, CfKind};
use ecf_core::kloosterman_check::{main_term_deviation, Interval, Region};
use ecf_core::totient::verify;
use num_rational::Ratio;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "ecf", version, about = "Even and backward continued fractions: expansions, censuses and checks")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall-clock columns (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expansion of the root of AX² + BX + C given as "A,B,C,±".
    Expand {
        #[arg(allow_hyphen_values = true)]
        qi: String,
        #[arg(value_enum, default_value = "ecf")]
        kind: KindArg,
    },
    /// Reduction classes of one or more "A,B,C,±" values.
    Classify {
        #[arg(required = true, allow_hyphen_values = true)]
        qi: Vec<String>,
    },
    /// Count reduced values by radius, by congruence sums and/or word enumeration.
    Census(CensusArgs),
    /// Run property suites; nonzero exit on any failure.
    Verify {
        /// Suite names, or "all".
        #[arg(required = true)]
        suites: Vec<String>,
    },
    /// Totient sums against their main terms.
    Totient {
        #[arg(long = "N", default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value = "2")]
        theta: String,
    },
    /// Solutions of h·u·v ≡ 1 (mod q) in a rectangle, against φ(q)|I₁||I₂|/q².
    Kloosterman {
        #[arg(long)]
        q: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        h: i64,
        /// "lo:hi" (rationals); default [0, q).
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// Fundamental units of discriminants.
    Pell {
        #[arg(long, required = true, value_delimiter = ',')]
        delta: Vec<i64>,
        /// Brute-force search bound on u; larger solutions come from the √Δ expansion.
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Ecf,
    Bcf,
    Rcf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Methods {
    Congruence,
    Dfs,
    Both,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, value_parser = ["E", "B", "e", "b"])]
    kind: String,
    #[arg(long, default_value = "2")]
    alpha: String,
    /// β for kind B, β₁ for kind E.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    beta1: Option<String>,
    #[arg(long, default_value = "1")]
    beta2: String,
    /// Radius bound, also the trace bound of the matrix sets.
    #[arg(long = "N", default_value_t = 1000)]
    n: i64,
    #[arg(long, value_enum, default_value = "congruence")]
    methods: Methods,
    /// Exit 1 unless |relative deviation| ≤ tolerance.
    #[arg(long)]
    check: bool,
    /// Default 10/√N.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((table, pass)) => match table.emit(cli.format, cli.out.as_deref()) {
            Ok(()) => ExitCode::from(if pass { 0 } else { 1 }),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<(Table, bool), CliError> {
    match &cli.command {
        Command::Expand { qi, kind } => expand_cmd(qi, *kind).map(|t| (t, true)),
        Command::Classify { qi } => classify_cmd(qi).map(|t| (t, true)),
        Command::Census(a) => census_cmd(a, cli.timing),
        Command::Verify { suites } => verify_cmd(suites, cli.timing),
        Command::Totient { n, theta } => totient_cmd(*n, theta, cli.timing),
        Command::Kloosterman { q, h, x, y } => kloosterman_cmd(*q, *h, x.as_deref(), y.as_deref()),
        Command::Pell { delta, bound } => pell_cmd(delta, *bound),
    }
}

fn expand_cmd(input: &str, kind: KindArg) -> Result<Table, CliError> {
    let w = parse_qi(input)?;
    let kind = match kind {
        KindArg::Ecf => CfKind::Ecf,
        KindArg::Bcf => CfKind::Bcf,
        KindArg::Rcf => CfKind::Rcf,
    };
    let exp = expand(&w, kind).map_err(|e| CliError::Invalid(format!("{input}: {e}")))?;
    let cls = w.classify();
    let (rho, rho_sq) = match length_of_period(&exp.period) {
        Ok(l) => (Value::from(l.rho), Value::from(l.rho_always_squared)),
        Err(_) => (Value::Null, Value::Null),
    };
    let mut t = Table::new("expand");
    t.push(row![
        "input" => input,
        "kind" => format!("{kind:?}").to_lowercase(),
        "value" => w.to_f64(),
        "preperiod" => exp.preperiod.to_string(),
        "period" => exp.period.to_string(),
        "conjugate" => w.conjugate().to_string(),
        "conjugate_value" => w.conjugate().to_f64(),
        "discriminant" => w.discriminant().to_string(),
        "e_reduced" => cls.e_reduced,
        "b_reduced" => cls.b_reduced,
        "rcf_reduced" => cls.rcf_reduced,
        "rho" => rho,
        "rho_always_squared" => rho_sq,
    ]);
    Ok(t)
}

fn classify_cmd(inputs: &[String]) -> Result<Table, CliError> {
    let mut t = Table::new("classify");
    for input in inputs {
        let w = parse_qi(input)?;
        let cls = w.classify();
        t.push(row![
            "input" => input.as_str(),
            "value" => w.to_f64(),
            "conjugate_value" => w.conjugate().to_f64(),
            "discriminant" => w.discriminant().to_string(),
            "e_reduced" => cls.e_reduced,
            "b_reduced" => cls.b_reduced,
            "rcf_reduced" => cls.rcf_reduced,
        ]);
    }
    Ok(t)
}

fn census_cmd(a: &CensusArgs, timing: bool) -> Result<(Table, bool), CliError> {
    let kind = if a.kind.eq_ignore_ascii_case("e") { Kind::E } else { Kind::B };
    let alpha = parse_ratio(&a.alpha)?;
    let beta1 = match (&a.beta1, &a.beta) {
        (Some(_), Some(_)) => return Err(CliError::Invalid("give --beta or --beta1, not both".into())),
        (Some(s), None) | (None, Some(s)) => parse_beta(s)?,
        (None, None) => Beta::Finite(Ratio::from_integer(1)),
    };
    let beta2 = parse_ratio(&a.beta2)?;
    let q = census_run::query(kind, alpha, beta1, beta2, a.n);
    q.validate()?;
    let tol = a.tolerance.unwrap_or_else(|| default_tolerance(a.n));
    let methods: &[Method] = match a.methods {
        Methods::Congruence => &[Method::Congruence],
        Methods::Dfs => &[Method::WordDfs],
        Methods::Both => &[Method::Congruence, Method::WordDfs],
    };
    let results: Vec<CensusResult> = methods
        .iter()
        .map(|&m| census_run::run(&q, m))
        .collect::<Result<_, _>>()?;
    // Both paths count the same matrices; the word path's `exact_count` is the primitive ω count.
    let matrices = |r: &CensusResult| match &r.detail {
        CensusDetail::Dfs(t) => t.matrix_count,
        _ => r.exact_count,
    };
    let agree = (results.len() == 2).then(|| matrices(&results[0]) == matrices(&results[1]));
    let mut t = Table::new("census");
    let mut pass = agree != Some(false);
    for r in &results {
        let within = r.relative_deviation.abs() <= tol;
        if a.check {
            pass &= within;
        }
        let mut row = row![
            "kind" => if kind == Kind::E { "E" } else { "B" },
            "method" => r.method.as_str(),
            "alpha" => ratio_string(&alpha),
            "beta1" => beta_string(&beta1),
            "beta2" => if kind == Kind::E { ratio_string(&beta2) } else { String::new() },
            "N" => a.n,
            "exact_count" => r.exact_count,
            "matrix_count" => matrices(r),
            "main_term" => r.main_term,
            "relative_deviation" => r.relative_deviation,
            "tolerance" => tol,
            "within_tolerance" => within,
            "methods_agree" => agree.map_or(Value::Null, Value::from),
        ];
        match &r.detail {
            CensusDetail::SMinusPlus { s_minus, s_plus } => {
                row.insert("s_minus".into(), (*s_minus).into());
                row.insert("s_plus".into(), (*s_plus).into());
            }
            CensusDetail::Dfs(d) => {
                for (k, v) in [
                    ("nodes", d.nodes),
                    ("single_digit", d.single_digit),
                    ("qi_count", d.qi_count),
                    ("max_k", d.max_k() as u64),
                    ("disagree", d.disagree),
                    ("disagree_on_boundary", d.disagree_on_boundary),
                ] {
                    row.insert(k.into(), v.into());
                }
            }
            CensusDetail::None => {}
        }
        if timing {
            row.insert("elapsed_s".into(), r.elapsed.map_or(Value::Null, |d| d.as_secs_f64().into()));
        }
        t.push(row);
    }
    Ok((t, pass))
}

fn verify_cmd(names: &[String], timing: bool) -> Result<(Table, bool), CliError> {
    let names: Vec<&str> = if names.iter().any(|n| n == "all") {
        suites::SUITES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    for n in &names {
        if !suites::SUITES.contains(n) {
            return Err(CliError::Invalid(format!(
                "unknown suite {n:?}; expected one of {}",
                suites::SUITES.join(", ")
            )));
        }
    }
    let mut checks: Vec<Check> = Vec::new();
    let mut elapsed = Vec::new();
    for n in names {
        let start = Instant::now();
        let part = suites::run_named(n).expect("known suite");
        elapsed.extend(std::iter::repeat_n(start.elapsed().as_secs_f64(), part.len()));
        checks.extend(part);
    }
    let pass = checks.iter().all(Check::pass);
    let mut t = suites::to_table(&checks);
    if timing {
        for (r, s) in t.rows.iter_mut().zip(elapsed) {
            r.insert("suite_elapsed_s".into(), s.into());
        }
    }
    Ok((t, pass))
}

fn totient_cmd(n: u64, theta: &str, timing: bool) -> Result<(Table, bool), CliError> {
    let th = parse_ratio(theta)?;
    if th < Ratio::from_integer(1) {
        return Err(CliError::Invalid("theta must be >= 1".into()));
    }
    if n < 2 {
        return Err(CliError::Invalid("N must be at least 2".into()));
    }
    let start = Instant::now();
    let rows = verify(n, *th.numer() as u64, *th.denom() as u64);
    let secs = start.elapsed().as_secs_f64();
    let mut t = Table::new("totient");
    let mut pass = true;
    for r in rows {
        pass &= r.pass != Some(false);
        let mut row = row![
            "N" => n,
            "theta" => ratio_string(&th),
            "row" => r.row.name(),
            "exact" => r.exact,
            "predicted" => r.predicted,
            "abs_error" => r.abs_error,
            "bound" => r.bound,
            "pass" => r.pass.map_or(Value::Null, Value::from),
        ];
        if timing {
            row.insert("elapsed_s".into(), secs.into());
        }
        t.push(row);
    }
    Ok((t, pass))
}

fn parse_interval(s: Option<&str>, q: i64) -> Result<Interval, CliError> {
    let Some(s) = s else {
        return Ok(Interval::ints(0, q));
    };
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| CliError::Invalid(format!("expected lo:hi, got {s:?}")))?;
    let (lo, hi) = (parse_ratio(lo)?, parse_ratio(hi)?);
    if lo > hi {
        return Err(CliError::Invalid(format!("empty interval {s:?}")));
    }
    Ok(Interval::new(lo, hi))
}

fn kloosterman_cmd(q: i64, h: i64, x: Option<&str>, y: Option<&str>) -> Result<(Table, bool), CliError> {
    let region = Region::Rectangle {
        x: parse_interval(x, q)?,
        y: parse_interval(y, q)?,
    };
    let d = main_term_deviation(q, h, &region).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut t = Table::new("kloosterman");
    t.push(row![
        "q" => q,
        "h" => h,
        "count" => d.count,
        "main" => d.main,
        "normalized_error" => d.normalized_error,
    ]);
    Ok((t, true))
}

fn pell_cmd(deltas: &[i64], bound: u64) -> Result<(Table, bool), CliError> {
    let mut t = Table::new("pell");
    for &delta in deltas {
        if delta <= 0 || num_integer::Roots::sqrt(&delta).pow(2) == delta {
            return Err(CliError::Invalid(format!("delta must be positive and nonsquare, got {delta}")));
        }
        let (s, brute) = suites::pell_reference(delta, bound);
        t.push(row![
            "delta" => delta,
            "t" => s.fundamental.t.to_string(),
            "u" => s.fundamental.u.to_string(),
            "norm" => s.fundamental.norm,
            "plus_t" => s.plus_generator.t.to_string(),
            "plus_u" => s.plus_generator.u.to_string(),
            "oracle" => if brute { "brute_force" } else { "rcf" },
        ]);
    }
    Ok((t, true))
}
