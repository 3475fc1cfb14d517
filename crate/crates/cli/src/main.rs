//! `phi4`: command-line access to diagram enumeration, Hopf-algebraic
//! renormalisation, cutoff valuations and Borel-Pade resummation.

mod commands;
mod graph_arg;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use phi4_core::valuation::{Method, DEFAULT_WORK_BUDGET};
use phi4_core::verify::Level;
use serde::Serialize;

use output::Format;

#[derive(Debug, Parser, Serialize)]
#[command(name = "phi4", version, about = "Perturbative Phi^4_3 toolkit")]
pub struct Cli {
    #[command(flatten)]
    #[serde(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Maximum estimated work per valuation.
    #[arg(long = "budget", global = true, env = "PHI4_WORK_BUDGET", default_value_t = DEFAULT_WORK_BUDGET)]
    pub work_budget: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    #[serde(skip)]
    pub format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "csv")]
    #[serde(skip)]
    pub json: bool,
    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub csv: bool,
    /// Target directory for `--format dot-dir`.
    #[arg(long, global = true, default_value = "diagrams")]
    pub out_dir: PathBuf,
    /// Significant digits for floats in CSV output; shortest round-trip if unset.
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[arg(long, global = true, default_value_t = phi4_core::cumulants::DEFAULT_ORDER_CAP)]
    pub order_cap: usize,
    #[arg(long, global = true, default_value_t = phi4_core::wick::DEFAULT_LEG_CAP)]
    pub leg_cap: usize,
}

impl Global {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            self.format
        }
    }

    pub fn float(&self, x: f64) -> String {
        match self.precision {
            Some(p) => format!("{:.*e}", p.saturating_sub(1), x),
            None => format!("{x}"),
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Moments and cumulants of the interaction as diagram sums.
    Cumulants {
        #[arg(long)]
        order: usize,
        /// Emit the moments instead of the cumulants.
        #[arg(long)]
        moments: bool,
    },
    /// Coproduct, antipode and BPHZ maps, and the exact identity checks.
    Hopf {
        #[command(subcommand)]
        action: HopfCommand,
    },
    /// Cutoff valuations of diagrams.
    Valuation {
        #[command(subcommand)]
        action: ValuationCommand,
    },
    /// The zero-dimensional model and its Borel-Pade resummation.
    Borel {
        #[command(subcommand)]
        action: BorelCommand,
    },
    /// Runs the acceptance criteria.
    VerifyAll {
        #[arg(long, default_value = "fast")]
        level: Level,
        /// Restrict to these criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HopfCommand {
    Coproduct {
        #[arg(long)]
        graph: String,
    },
    Antipode {
        #[arg(long)]
        graph: String,
    },
    /// Renormalised expansion and its bubble reduction.
    Bphz {
        #[arg(long)]
        graph: String,
    },
    /// Checks the contraction identity at order `n` and the mixed `X^2 Y` case.
    Verify {
        #[arg(long)]
        order: usize,
    },
    /// Checks the exponential deformation identity.
    Deform {
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValuationCommand {
    Pi {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        cutoff: u32,
        #[arg(long, default_value = "spectral")]
        method: Method,
        /// Grid side for the position-space method.
        #[arg(long)]
        grid: Option<usize>,
    },
    Counterterms {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        step: u32,
    },
    /// Sample moments of `X` and `Y` under the free field.
    Mc {
        #[arg(long)]
        cutoff: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Raw and renormalised values of every class at one order across cutoffs.
    Bphz {
        #[arg(long)]
        order: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
        cutoffs: Vec<u32>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BorelCommand {
    /// Coefficients `a_0 ..= a_order` and their Borel transform.
    Coeffs {
        #[arg(long)]
        order: usize,
    },
    Resum {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Numerator and denominator degrees, e.g. `9,10`.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        degrees: Option<Vec<usize>>,
    },
    Sokal {
        #[arg(long, default_value_t = 15)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        eps: Vec<f64>,
    },
    /// Remainder estimates of the three-dimensional expansion.
    Remainder {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        cutoffs: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
    },
}

/// The resolved configuration echoed into every JSON envelope.
#[derive(Serialize)]
struct RunConfig<'a> {
    #[serde(flatten)]
    cli: &'a Cli,
    format: Format,
    threads_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

/// Errors caused by the arguments rather than by the computation.
fn is_usage_error(e: &anyhow::Error) -> bool {
    use phi4_core::Error as E;
    match e.downcast_ref::<E>() {
        Some(err) => matches!(
            err,
            E::Parse(_)
                | E::OrderCap { .. }
                | E::LegCapExceeded { .. }
                | E::InvalidGraph(_)
                | E::GridTooSmall { .. }
                | E::InvalidSelection(_)
                | E::SizeExceeded { .. }
                | E::Disconnected
        ),
        None => e.downcast_ref::<UsageError>().is_some(),
    }
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            bail!(UsageError("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = commands::dispatch(cli)?;
    let mut stdout = std::io::stdout().lock();
    match cli.global.format() {
        Format::Json => {
            let config = RunConfig {
                cli,
                format: Format::Json,
                threads_used: rayon::current_num_threads(),
                timestamp: (!cli.global.deterministic).then(|| {
                    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
                }),
            };
            output::write_json(&mut stdout, &config, &out.result)?;
        }
        Format::Csv => match &out.table {
            Some(table) => output::write_csv(&mut stdout, table)?,
            None => bail!(UsageError("this command has no CSV form; use --format json".into())),
        },
        Format::DotDir => {
            let written = output::write_dot_dir(&cli.global.out_dir, &out.graphs)
                .map_err(|e| anyhow::Error::new(UsageError(e.to_string())))?;
            for name in written {
                writeln!(stdout, "{}", cli.global.out_dir.join(name).display())?;
            }
        }
    }
    stdout.flush()?;
    Ok(out.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
