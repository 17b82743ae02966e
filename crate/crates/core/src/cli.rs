//! The `pls` command.
//!
//! Exit codes: 0 feasible / valid / no mismatch, 1 infeasible / invalid /
//! mismatch found, 2 usage or I/O error, 3 oracle budget exceeded.

use std::fs;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::builder::{build_corollary, build_proposition, build_theorem, BuildError};
use crate::feasibility::{
    check_construction, check_row_params, check_sizes, join, FeasibilityReport,
};
use crate::format::{read_square, write_square, Construction, FormatError, SpecDocument};
use crate::oracle::{enumerate, exists_full, Bounds, Budget, OracleError, Query};
use crate::square::PartialLatinSquare;
use crate::sweep::{compare, row_param_instances, size_instances, theorem_instances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pls",
    version,
    about = "Existence and construction of partial Latin squares with prescribed parameters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide feasibility and print the report.
    Check {
        #[command(subcommand)]
        target: Target,
    },
    /// Construct a square and print it.
    Build {
        #[command(subcommand)]
        target: Target,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
        format: OutputFormat,
    },
    /// Exhaustive search.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Validate a square document ("-" for stdin) and print its parameters.
    Verify {
        path: String,
        /// Print the parameters as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compare a predicate with the oracle over every small instance.
    Sweep {
        #[arg(value_enum)]
        family: Family,
        /// Largest r, c (and s for row-params and sizes).
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// Largest parameter entry.
        #[arg(long, default_value_t = 3)]
        max_entry: usize,
        #[arg(long, default_value_t = 9)]
        max_volume: usize,
    },
}

#[derive(Debug, Subcommand)]
enum Target {
    /// Row parameters, column parameters and a symbol count.
    Theorem {
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<usize>,
        #[arg(long, visible_alias = "s")]
        symbols: usize,
    },
    /// Row parameters, a column count and a symbol count.
    RowParams {
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<usize>,
        #[arg(long)]
        c: usize,
        #[arg(long, visible_alias = "symbols")]
        s: usize,
    },
    /// Row, column and symbol counts and the volume.
    Sizes {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        v: usize,
    },
    /// Read the request from a spec document ("-" for stdin).
    Spec { path: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Theorem,
    RowParams,
    Sizes,
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Search for a square meeting every given constraint.
    Exists {
        #[command(flatten)]
        constraints: Constraints,
        /// Read the constraints from a spec document instead.
        #[arg(long, conflicts_with_all = ["rows", "cols", "sym_params", "r", "c", "s", "v"])]
        spec: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Print every normalized square within the bounds, one document per line.
    Enumerate {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        v: usize,
        /// Print only the number of squares.
        #[arg(long)]
        count: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, Args)]
struct Constraints {
    #[arg(long, value_delimiter = ',')]
    rows: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    cols: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    sym_params: Option<Vec<usize>>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    v: Option<usize>,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = Budget::default().max_volume)]
    max_volume: usize,
    #[arg(long, default_value_t = Budget::default().max_dim)]
    max_dim: usize,
}

impl From<&BudgetArgs> for Budget {
    fn from(b: &BudgetArgs) -> Self {
        Budget {
            max_volume: b.max_volume,
            max_dim: b.max_dim,
        }
    }
}

/// An error that ends the command with the given exit code.
struct Fail {
    code: i32,
    message: String,
}

impl Fail {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::usage(format!("I/O error: {e}"))
    }
}

impl From<FormatError> for Fail {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Invalid(_) => Fail {
                code: EXIT_NO,
                message: format!("invalid: {e}"),
            },
            _ => Fail::usage(e.to_string()),
        }
    }
}

impl From<OracleError> for Fail {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded(_) => Fail {
                code: EXIT_BUDGET,
                message: e.to_string(),
            },
            _ => Fail::usage(e.to_string()),
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, Fail> {
        if path == "-" {
            let mut text = String::new();
            self.stdin.read_to_string(&mut text)?;
            Ok(text)
        } else {
            fs::read_to_string(path).map_err(|e| Fail::usage(format!("cannot read {path}: {e}")))
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { stdin, out };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(fail) => {
            let _ = writeln!(err, "pls: {}", fail.message);
            fail.code
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, Fail> {
    match command {
        Command::Check { target } => {
            let report = match resolve(target, io)? {
                Construction::Theorem { rows, cols, s } => check_construction(&rows, &cols, s),
                Construction::RowParams { rows, c, s } => check_row_params(&rows, c, s),
                Construction::Sizes { r, c, s, v } => check_sizes(r, c, s, v),
            };
            write!(io.out, "{report}")?;
            Ok(verdict(&report))
        }
        Command::Build { target, format } => {
            let built = match resolve(target, io)? {
                Construction::Theorem { rows, cols, s } => build_theorem(&rows, &cols, s),
                Construction::RowParams { rows, c, s } => build_proposition(&rows, c, s),
                Construction::Sizes { r, c, s, v } => build_corollary(r, c, s, v),
            };
            match built {
                Ok(square) => {
                    print_square(io.out, &square, format)?;
                    Ok(EXIT_OK)
                }
                Err(BuildError::Infeasible(report)) => Err(Fail {
                    code: EXIT_NO,
                    message: format!("{report}").trim_end().to_string(),
                }),
                Err(e) => Err(Fail::usage(e.to_string())),
            }
        }
        Command::Oracle { command } => oracle(command, io),
        Command::Verify { path, json } => {
            let text = io.read(&path)?;
            let square = read_square(&text)?;
            let p = square.parameters();
            if json {
                writeln!(
                    io.out,
                    "{}",
                    serde_json::to_string(&p).expect("profile serializes")
                )?;
            } else {
                writeln!(io.out, "valid")?;
                writeln!(io.out, "v = {}", p.volume)?;
                writeln!(io.out, "r = {}", p.r())?;
                writeln!(io.out, "c = {}", p.c())?;
                writeln!(io.out, "s = {}", p.s())?;
                writeln!(io.out, "row-params = {}", join(&p.row_params))?;
                writeln!(io.out, "col-params = {}", join(&p.col_params))?;
                writeln!(io.out, "sym-params = {}", join(&p.sym_params))?;
            }
            Ok(EXIT_OK)
        }
        Command::Sweep {
            family,
            max_dim,
            max_entry,
            max_volume,
        } => {
            let instances = match family {
                Family::Theorem => theorem_instances(max_dim, max_entry, max_volume),
                Family::RowParams => row_param_instances(max_dim, max_entry, max_dim, max_dim),
                Family::Sizes => size_instances(max_dim, max_volume),
            };
            let budget = Budget {
                max_volume,
                max_dim: max_dim.max(max_volume + 1),
            };
            let outcome = compare(&instances, budget)?;
            for m in &outcome.mismatches {
                writeln!(io.out, "mismatch: {m}")?;
            }
            writeln!(
                io.out,
                "checked {} instances, {} feasible, {} mismatches",
                outcome.checked,
                outcome.feasible.len(),
                outcome.mismatches.len()
            )?;
            Ok(if outcome.mismatches.is_empty() {
                EXIT_OK
            } else {
                EXIT_NO
            })
        }
    }
}

fn verdict(report: &FeasibilityReport) -> i32 {
    if report.feasible {
        EXIT_OK
    } else {
        EXIT_NO
    }
}

fn resolve(target: Target, io: &mut Io<'_>) -> Result<Construction, Fail> {
    Ok(match target {
        Target::Theorem {
            rows,
            cols,
            symbols,
        } => Construction::Theorem {
            rows,
            cols,
            s: symbols,
        },
        Target::RowParams { rows, c, s } => Construction::RowParams { rows, c, s },
        Target::Sizes { r, c, s, v } => Construction::Sizes { r, c, s, v },
        Target::Spec { path } => {
            let doc = SpecDocument::parse(&io.read(&path)?)?;
            doc.construction().ok_or_else(|| {
                Fail::usage(
                    "the spec document matches no construction; give rows+cols+s, rows+c+s, \
                     or r+c+s+v (use `pls oracle exists` for other combinations)",
                )
            })?
        }
    })
}

fn print_square(
    out: &mut dyn Write,
    square: &PartialLatinSquare,
    format: OutputFormat,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Json => writeln!(out, "{}", write_square(square)),
        OutputFormat::Grid => write!(out, "{}", square.to_grid()),
    }
}

fn oracle(command: OracleCommand, io: &mut Io<'_>) -> Result<i32, Fail> {
    match command {
        OracleCommand::Exists {
            constraints,
            spec,
            budget,
        } => {
            let query = match spec {
                Some(path) => SpecDocument::parse(&io.read(&path)?)?.query(),
                None => Query {
                    rows: constraints.rows,
                    cols: constraints.cols,
                    syms: constraints.sym_params,
                    r: constraints.r,
                    c: constraints.c,
                    s: constraints.s,
                    v: constraints.v,
                },
            };
            match exists_full(&query, (&budget).into())? {
                Some(witness) => {
                    writeln!(io.out, "exists")?;
                    writeln!(io.out, "{}", write_square(&witness))?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(io.out, "none")?;
                    Ok(EXIT_NO)
                }
            }
        }
        OracleCommand::Enumerate {
            r,
            c,
            s,
            v,
            count,
            budget,
        } => {
            let squares = enumerate(Bounds { r, c, s, v }, (&budget).into())?;
            if count {
                writeln!(io.out, "{}", squares.count())?;
            } else {
                for square in squares {
                    writeln!(io.out, "{}", write_square(&square))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
