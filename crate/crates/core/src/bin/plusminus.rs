//! Command-line front end: value queries, coset tables, series dumps and
//! the verification suites. JSON/CSV goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 resource or convergence limit.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use plusminus::bivariate::{bimu_oracle, bimu_value};
use plusminus::distribution::{mu_oracle, mu_value, DistValueJson};
use plusminus::series::build_log_pm;
use plusminus::verify::{run_suite, Suite};
use plusminus::{
    BiResidue, BiSign, DistValue, Error, Prime, Residue, SeriesPrecision, Sign, FORMAT_VERSION,
};

const ROW_CAP: u64 = 100_000;

#[derive(Parser)]
#[command(
    name = "plusminus",
    version = concat!(env!("CARGO_PKG_VERSION"), " (output format 1)"),
    about = "Plus/minus p-adic logarithms and their distributions, computed exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value of mu_± (one sign) or mu_{*o} (two signs) on a coset.
    Value(ValueArgs),
    /// Value of a two-variable distribution on a box.
    Bivalue(ValueArgs),
    /// CSV listing of every coset mod p^n (or box mod p^n x p^m).
    Table(TableArgs),
    /// JSON dump of log_p^± at the given precision.
    Series(SeriesArgs),
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ValueArgs {
    /// One of + - ++ +- -+ --
    #[arg(long, allow_hyphen_values = true)]
    sign: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    a: i128,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<i128>,
    /// Also compute the character-sum oracle and report agreement.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, allow_hyphen_values = true)]
    sign: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: Option<u32>,
    /// Lift the row cap.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, allow_hyphen_values = true)]
    sign: String,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = SeriesPrecision::DEFAULT.t_prec())]
    tprec: usize,
    #[arg(long, default_value_t = SeriesPrecision::DEFAULT.p_prec())]
    pprec: i64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    max_n: u32,
    #[arg(long, default_value_t = SeriesPrecision::DEFAULT.t_prec())]
    tprec: usize,
    #[arg(long, default_value_t = SeriesPrecision::DEFAULT.p_prec())]
    pprec: i64,
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    Json(serde_json::Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Json(e)
    }
}

type CliResult = std::result::Result<(), Failure>;

#[derive(Serialize)]
struct BiValueJson {
    #[serde(flatten)]
    value: DistValueJson,
    sign: String,
}

#[derive(Serialize)]
struct OracleComparison<T> {
    value: T,
    oracle: T,
    agree: bool,
}

enum Query {
    One(Sign, Residue),
    Two(BiSign, BiResidue),
}

fn parse_query(args: &ValueArgs, require_two: bool) -> Result<Query, Error> {
    let p = Prime::new(args.p)?;
    match args.sign.len() {
        1 if !require_two => {
            if args.m.is_some() || args.b.is_some() {
                return Err(Error::InvalidArgument("--m/--b need a two-variable sign".into()));
            }
            Ok(Query::One(args.sign.parse()?, Residue::from_integer(args.a, p, args.n)?))
        }
        2 => {
            let (Some(m), Some(b)) = (args.m, args.b) else {
                return Err(Error::InvalidArgument("two-variable signs need --m and --b".into()));
            };
            Ok(Query::Two(args.sign.parse()?, BiResidue::from_integers(args.a, b, p, args.n, m)?))
        }
        _ => Err(Error::InvalidArgument(format!("unknown sign {:?}", args.sign))),
    }
}

fn print_json<T: Serialize>(out: &mut impl Write, value: &T) -> CliResult {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_value(args: &ValueArgs, require_two: bool) -> CliResult {
    let mut out = io::stdout().lock();
    match parse_query(args, require_two)? {
        Query::One(sign, r) => {
            let value = mu_value(sign, &r);
            if args.oracle {
                let oracle = mu_oracle(sign, &r)?;
                print_json(
                    &mut out,
                    &OracleComparison { value: value.to_json(), oracle: oracle.to_json(), agree: value == oracle },
                )
            } else {
                print_json(&mut out, &value.to_json())
            }
        }
        Query::Two(sign, r) => {
            let wrap = |v: DistValue| BiValueJson { value: v.to_json(), sign: sign.to_string() };
            let value = bimu_value(sign, &r);
            if args.oracle {
                let oracle = bimu_oracle(sign, &r)?;
                print_json(
                    &mut out,
                    &OracleComparison { value: wrap(value), oracle: wrap(oracle), agree: value == oracle },
                )
            } else {
                print_json(&mut out, &wrap(value))
            }
        }
    }
}

fn check_rows(rows: Option<u64>, force: bool) -> Result<u64, Error> {
    match rows {
        Some(r) if force || r <= ROW_CAP => Ok(r),
        Some(r) => Err(Error::ResourceCap { what: "table rows".into(), needed: r.to_string(), cap: ROW_CAP }),
        None => Err(Error::ResourceCap { what: "table rows".into(), needed: "> 2^64".into(), cap: ROW_CAP }),
    }
}

fn cmd_table(args: &TableArgs) -> CliResult {
    let p = Prime::new(args.p)?;
    let mut out = BufWriter::new(io::stdout().lock());
    match (args.sign.len(), args.m) {
        (1, None) => {
            let sign: Sign = args.sign.parse()?;
            let rows = check_rows(p.get().checked_pow(args.n), args.force)?;
            writeln!(out, "a,digits,in_S,value_num,value_den")?;
            for a in 0..rows {
                let r = Residue::from_integer(a as i128, p, args.n)?;
                let v = mu_value(sign, &r).to_rational();
                writeln!(out, "{a},{},{},{},{}", r.digit_string(), r.in_s(sign), v.numer(), v.denom())?;
            }
        }
        (2, Some(m)) => {
            let sign: BiSign = args.sign.parse()?;
            let rows = p
                .get()
                .checked_pow(args.n)
                .zip(p.get().checked_pow(m))
                .and_then(|(x, y)| x.checked_mul(y));
            check_rows(rows, args.force)?;
            let (count_a, count_b) = (p.pow(args.n)?, p.pow(m)?);
            writeln!(out, "a,b,digits_a,digits_b,in_S,value_num,value_den")?;
            for a in 0..count_a {
                for b in 0..count_b {
                    let r = BiResidue::from_integers(a as i128, b as i128, p, args.n, m)?;
                    let in_s = r.first().in_s(sign.first) && r.second().in_s(sign.second);
                    let v = bimu_value(sign, &r).to_rational();
                    writeln!(
                        out,
                        "{a},{b},{},{},{in_s},{},{}",
                        r.first().digit_string(),
                        r.second().digit_string(),
                        v.numer(),
                        v.denom()
                    )?;
                }
            }
        }
        _ => {
            return Err(Error::InvalidArgument(
                "use a one-letter sign without --m, or a two-letter sign with --m".into(),
            )
            .into())
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_series(args: &SeriesArgs) -> CliResult {
    let p = Prime::new(args.p)?;
    let sign: Sign = args.sign.parse()?;
    let prec = SeriesPrecision::new(args.tprec, args.pprec)?;
    let series = build_log_pm(p, sign, prec)?;
    print_json(&mut io::stdout().lock(), &series.to_dump(sign))
}

fn cmd_verify(args: &VerifyArgs) -> CliResult {
    let p = Prime::new(args.p)?;
    if args.max_n == 0 {
        return Err(Error::InvalidArgument("--max-n must be >= 1".into()).into());
    }
    let prec = SeriesPrecision::new(args.tprec, args.pprec)?;
    let start = Instant::now();
    let report = run_suite(args.suite, p, args.max_n, prec)?;
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    eprintln!(
        "suite {}: {} cases, {} failed, {:.3}s (format {FORMAT_VERSION})",
        report.suite,
        report.cases.len(),
        report.failures().count(),
        start.elapsed().as_secs_f64()
    );
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Value(args) => cmd_value(args, false),
        Command::Bivalue(args) => cmd_value(args, true),
        Command::Table(args) => cmd_table(args),
        Command::Series(args) => cmd_series(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if e.is_resource() {
                ExitCode::from(3)
            } else if matches!(e, Error::NotRational(_)) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Json(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
