//! Argument parsing and command dispatch. Data goes to `out`, diagnostics
//! to `err`; the return value is the process exit code.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypasym::numerics::Precision;
use hypasym::oracle::eval_f;
use hypasym::{evaluate, Branch, Error, EvalPoint};

use crate::coeffs::{lg_table, temme_table};
use crate::format::complex_spaced;
use crate::sweep::{self, SweepSpec};
use crate::tables::{self, TableFormat, TableSelection};
use crate::Precisions;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hypasym",
    version,
    about = "Large-parameter 2F1 evaluation and reference tables"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate F at one point.
    Eval(EvalArgs),
    /// Reproduce the reference tables.
    Table(TableArgs),
    /// Compare oracle and expansion over a grid.
    Sweep(SweepArgs),
    /// Export expansion coefficients.
    Coeffs(CoeffsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Oracle,
    /// Expansion with automatic branch selection.
    Asym,
    Lg,
    Saddle,
    Temme,
    Main,
}

impl Method {
    /// Branch requested from the evaluator; `None` for automatic routing.
    /// The oracle has no branch.
    pub fn branch(self) -> Option<Option<Branch>> {
        match self {
            Method::Oracle => None,
            Method::Asym => Some(None),
            Method::Lg => Some(Some(Branch::LG)),
            Method::Saddle => Some(Some(Branch::Saddle)),
            Method::Temme => Some(Some(Branch::Temme)),
            Method::Main => Some(Some(Branch::MainTermOnly)),
        }
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    r: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    z: f64,
    /// Terms in the expansion, main term included.
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Method::Asym)]
    method: Method,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// 1..5 or "all".
    #[arg(long, default_value = "all")]
    id: TableSelection,
    #[arg(long, value_enum, default_value_t = TableFormat::Md)]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated r values.
    #[arg(long = "r")]
    rs: String,
    /// Comma-separated alpha values.
    #[arg(long = "alpha")]
    alphas: String,
    /// Comma-separated z values.
    #[arg(long = "z")]
    zs: String,
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Method::Asym)]
    method: Method,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional gnuplot data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CoeffBranch {
    Lg,
    Temme,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long, value_enum)]
    branch: CoeffBranch,
    /// Highest coefficient index.
    #[arg(long, default_value_t = 0)]
    order: usize,
    #[arg(long, default_value_t = 100.0)]
    r: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Evaluation point of the temme ladder.
    #[arg(long, default_value_t = 0.9999)]
    z: f64,
    /// The LG table covers [0, 1 - delta].
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Number of z samples in the LG table.
    #[arg(long, default_value_t = 11)]
    points: usize,
}

/// Comma-separated reals; empty entries are skipped, so "" is an empty list.
pub fn parse_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Domain(format!("'{t}' is not a number")))
        })
        .collect()
}

/// Exit code for a library error: caller mistakes are 2, anything else 1.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Oracle(inner) => exit_code(inner),
        e if e.is_input_error() => EXIT_INPUT,
        _ => EXIT_INTERNAL,
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
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

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn report(err: &mut dyn Write, e: &Error) {
    let full = e.to_string().replace('\n', " ");
    let prefix = format!("{}: ", e.kind());
    let msg = full.strip_prefix(&prefix).unwrap_or(&full);
    let _ = writeln!(err, "error kind={}: {msg}", e.kind());
}

pub fn run<I, T>(
    args: I,
    precision_env: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let first = e.to_string();
                    let line = first.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(
                        err,
                        "error kind=usage: {}",
                        line.trim_start_matches("error: ")
                    );
                    EXIT_INPUT
                }
            };
        }
    };
    let precisions = match precision_env.map(str::parse::<Precision>) {
        None => Precisions::default(),
        Some(Ok(p)) => Precisions::uniform(p),
        Some(Err(msg)) => {
            let _ = writeln!(err, "error kind=usage: {}: {msg}", crate::PRECISION_ENV);
            return EXIT_INPUT;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a, precisions, out, err),
        Command::Table(a) => cmd_table(&a, precisions, out),
        Command::Sweep(a) => cmd_sweep(&a, precisions, out, err),
        Command::Coeffs(a) => cmd_coeffs(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            report(err, &e);
            exit_code(&e)
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error kind=io: {e}");
            EXIT_INTERNAL
        }
    }
}

fn cmd_eval(
    a: &EvalArgs,
    prec: Precisions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, Failure> {
    let p = EvalPoint::new(a.r, a.alpha, a.z)?;
    let value = match a.method.branch() {
        None => {
            let o = eval_f(&p).map_err(|e| Error::Oracle(Box::new(e)))?;
            writeln!(
                err,
                "method=oracle/{} est_accuracy={:.1e}",
                o.method.name(),
                o.est_accuracy
            )?;
            o.value.with_precision(prec.oracle)
        }
        Some(branch) => {
            let e = evaluate(&p, a.order, branch)?.with_precision(prec.asymptotic);
            writeln!(
                err,
                "branch={} order={} est_remainder={:.3e}",
                e.branch.name(),
                e.order_used,
                e.est_remainder
            )?;
            e.value
        }
    };
    writeln!(out, "{}", complex_spaced(value.to_c64()))?;
    Ok(EXIT_OK)
}

fn cmd_table(a: &TableArgs, prec: Precisions, out: &mut dyn Write) -> Result<u8, Failure> {
    let rows = tables::compute_rows(a.id, prec)?;
    tables::render(&rows, a.format, out)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(
    a: &SweepArgs,
    prec: Precisions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8, Failure> {
    let Some(branch) = a.method.branch() else {
        return Err(Error::Domain(
            "sweep already compares against the oracle; pick an expansion method".into(),
        )
        .into());
    };
    let spec = SweepSpec {
        rs: parse_list(&a.rs)?,
        alphas: parse_list(&a.alphas)?,
        zs: parse_list(&a.zs)?,
        order: a.order,
        branch,
    };
    let rows = sweep::run(&spec, prec)?;
    match &a.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            sweep::write_csv(&rows, spec.order, &mut f)?;
            f.flush()?;
        }
        None => sweep::write_csv(&rows, spec.order, out)?,
    }
    if let Some(path) = &a.plot {
        let mut f = BufWriter::new(File::create(path)?);
        sweep::write_plot(&rows, &mut f)?;
        f.flush()?;
    }
    let failed: Vec<&Error> = rows.iter().filter_map(|r| r.error.as_ref()).collect();
    if failed.is_empty() {
        return Ok(EXIT_OK);
    }
    writeln!(err, "{} of {} cells failed", failed.len(), rows.len())?;
    Ok(failed
        .iter()
        .map(|e| exit_code(e))
        .min()
        .unwrap_or(EXIT_INTERNAL))
}

fn cmd_coeffs(a: &CoeffsArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    match a.branch {
        CoeffBranch::Lg => lg_table(a.alpha, a.order, a.delta, a.points)?.write(out)?,
        CoeffBranch::Temme => temme_table(a.r, a.alpha, a.z, a.order)?.write(out)?,
    }
    Ok(EXIT_OK)
}
