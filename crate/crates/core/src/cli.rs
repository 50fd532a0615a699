//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when `contains` finds no embedding (or
//! `sparse-flat` finds no flat), 2 on any parse or contract error. Errors are
//! reported on stderr as `{"error": {"kind": ..., "message": ...}}`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds::{self, format_rational, parse_rational, DigitCap};
use crate::embed::contains_with;
use crate::error::{Error, Result};
use crate::exec::{self, Exec, THREADS_ENV};
use crate::extremal::{self, Budget};
use crate::field::FieldSpec;
use crate::geometry::{critical_exponent_with, make_ag, make_g, make_pg, Geometry};
use crate::io::{self as gio, BoundValueJson, ExtremalJson, FlatJson, RecursionJson};

#[derive(Parser, Debug)]
#[command(
    name = "pgeom",
    version,
    about = "Exact computations in finite projective geometries"
)]
pub struct Cli {
    /// Worker threads for parallel search
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    /// Single-worker search with reproducible witnesses
    #[arg(long, global = true)]
    pub deterministic: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pg,
    Ag,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundsMode {
    ClosedForm,
    Recursive,
}

#[derive(clap::Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Node cap for the branch-and-bound
    #[arg(long, default_value_t = Budget::DEFAULT_NODES)]
    pub max_nodes: u64,
    /// Wall-clock cap in seconds
    #[arg(long)]
    pub max_seconds: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget> {
        let max_time = match self.max_seconds {
            Some(s) if !(s.is_finite() && s >= 0.0) => {
                return Err(Error::InvalidArgument(format!(
                    "--max-seconds {s} must be a non-negative number"
                )))
            }
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(Budget {
            max_nodes: self.max_nodes,
            max_time,
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write PG(m−1,q), AG(m−1,q) or G(m−1,q,c) as geometry JSON
    Make {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the critical exponent of a geometry
    Critical { input: PathBuf },
    /// Decide whether GUEST is a restriction of HOST
    Contains {
        host: PathBuf,
        guest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute ex_q(H; n) exactly (or a lower bound when the budget runs out)
    Extremal {
        forbid: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density table ex_q(H; n)/|PG(n−1,q)| as CSV
    Density {
        forbid: PathBuf,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Find a rank-m flat meeting the geometry in rank at most m − c
    SparseFlat {
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        c: usize,
    },
    /// Evaluate the binary bound functions
    Bounds {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        c: u64,
        /// Rational as num/den
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum, default_value = "closed-form")]
        mode: BoundsMode,
        /// Decimal digits kept exact before switching to a tower descriptor
        #[arg(long, default_value_t = bounds::DEFAULT_DIGIT_CAP)]
        digit_cap: u64,
    },
}

fn read_geometry(path: &Path) -> Result<Geometry> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    gio::geometry_from_str(&text)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    let io_err = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(io_err),
        None => writeln!(out, "{text}").map_err(io_err),
    }
}

/// What a successful command reports back to the process.
enum Outcome {
    Done,
    Negative,
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let exec = if cli.deterministic {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match &cli.command {
        Command::Make {
            family,
            m,
            q,
            c,
            out: path,
        } => {
            let field = FieldSpec::new(*q)?;
            let g = match (family, c) {
                (Family::Pg, None) => make_pg(*m, &field)?,
                (Family::Ag, None) => make_ag(*m, &field)?,
                (Family::G, Some(c)) => make_g(*m, &field, *c)?,
                (Family::G, None) => {
                    return Err(Error::InvalidArgument("family g needs --c".into()))
                }
                (_, Some(_)) => {
                    return Err(Error::InvalidArgument(
                        "--c only applies to family g".into(),
                    ))
                }
            };
            emit(out, path.as_deref(), &gio::geometry_to_string(&g))?;
        }
        Command::Critical { input } => {
            let g = read_geometry(input)?;
            emit(out, None, &critical_exponent_with(&g, exec)?.to_string())?;
        }
        Command::Contains {
            host,
            guest,
            out: path,
        } => {
            let host = read_geometry(host)?;
            let guest = read_geometry(guest)?;
            return match contains_with(&host, &guest, exec)? {
                Some(w) => {
                    emit(
                        out,
                        path.as_deref(),
                        &serde_json::to_string(&w).expect("witness serializes"),
                    )?;
                    Ok(Outcome::Done)
                }
                None => {
                    emit(out, path.as_deref(), "not-contained")?;
                    Ok(Outcome::Negative)
                }
            };
        }
        Command::Extremal {
            forbid,
            n,
            budget,
            out: path,
        } => {
            let h = read_geometry(forbid)?;
            let res = extremal::ex_exact_with(&h, *n, budget.budget()?, exec)?;
            let text = serde_json::to_string(&ExtremalJson::from(&res)).expect("result serializes");
            emit(out, path.as_deref(), &text)?;
        }
        Command::Density {
            forbid,
            n_min,
            n_max,
            out: path,
            budget,
        } => {
            let h = read_geometry(forbid)?;
            if *n_min == 0 {
                return Err(Error::InvalidArgument("--n-min must be at least 1".into()));
            }
            let rows = extremal::density_table(&h, *n_min..=*n_max, budget.budget()?, exec)?;
            let file = fs::File::create(path)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            extremal::write_density_csv(&rows, file)?;
        }
        Command::SparseFlat { input, m, c } => {
            let g = read_geometry(input)?;
            return match extremal::find_sparse_flat_with(&g, *m, *c, exec)? {
                Some(flat) => {
                    emit(
                        out,
                        None,
                        &serde_json::to_string(&FlatJson::from(&flat)).expect("flat serializes"),
                    )?;
                    Ok(Outcome::Done)
                }
                None => {
                    emit(out, None, "not-found")?;
                    Ok(Outcome::Negative)
                }
            };
        }
        Command::Bounds {
            q,
            m,
            c,
            eps,
            mode,
            digit_cap,
        } => {
            let eps_value = parse_rational(eps)?;
            if *q != 2 {
                return Err(Error::Unsupported(format!(
                    "bounds are available for q = 2 only (no closed-form base bound for q = {q})"
                )));
            }
            if *digit_cap == 0 {
                return Err(Error::InvalidArgument(
                    "--digit-cap must be positive".into(),
                ));
            }
            let text = match mode {
                BoundsMode::ClosedForm => {
                    let cap = if *digit_cap == bounds::DEFAULT_DIGIT_CAP {
                        DigitCap::default_cap().clone()
                    } else {
                        DigitCap::new(*digit_cap)
                    };
                    let cf = bounds::r_main2_binary_traced(*m, *c, &eps_value, &cap)?;
                    json!({
                        "mode": "closed-form",
                        "q": q, "m": m, "c": c,
                        "eps": format_rational(&eps_value),
                        "value": BoundValueJson::from(&cf.value),
                        "trace": { "d": cf.d, "top": cf.top, "height": c },
                    })
                }
                BoundsMode::Recursive => {
                    let rec =
                        bounds::r_main2_recursive(*m, *q, *c, &eps_value, &bounds::binary_base)?;
                    let body = RecursionJson::from(&rec);
                    json!({
                        "mode": "recursive",
                        "q": q, "m": m, "c": c,
                        "eps": format_rational(&eps_value),
                        "value": body.value,
                        "trace": body.trace,
                    })
                }
            };
            emit(out, None, &text.to_string())?;
        }
    }
    Ok(Outcome::Done)
}

fn error_object(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Runs the CLI on `args` and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = writeln!(err, "{}", error_object("Usage", e.to_string().trim()));
            return 2;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(
                err,
                "{}",
                error_object("InvalidArgument", "--threads must be positive")
            );
            return 2;
        }
        exec::init_threads(t);
    }
    match execute(&cli, out) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::Negative) => 1,
        Err(e) => {
            let _ = writeln!(err, "{}", error_object(e.kind(), &e.to_string()));
            2
        }
    }
}
