//! `subshift`: reproducible experiments on binary subshifts.
//!
//! Exit status is 0 when a command computed its result, 1 when a checked
//! property is violated and 2 on any input error.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Outcome, Output};
use config::{ExperimentConfig, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Spec(String, subshift_core::Error),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Core(#[from] subshift_core::Error),
}

#[derive(Parser)]
#[command(name = "subshift", version, about = "Experiments on binary subshifts: entropy, densities and Gibbs diagnostics")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Subshift spec file (TOML).
    #[arg(long, global = true, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Largest block length.
    #[arg(long, global = true, default_value_t = 12, value_name = "K")]
    n_max: usize,
    /// Window length N for generated points.
    #[arg(long, global = true, value_name = "N")]
    window: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Tolerance override: pf, bound, margin or threshold.
    #[arg(long, global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact entropy and the series (1/n) log2 |L_n|.
    Entropy,
    /// Exact upper density of ones and the series maxones(n)/n.
    Density,
    /// Ratio series kappa(C_n)·2^(nh) on ones-maximal blocks.
    Gibbs {
        /// VALUE, p/q, exact or d-equals-htilde.
        #[arg(long)]
        h: Option<String>,
        /// Also check kappa(C) >= a·2^(-nh) on every block.
        #[arg(long)]
        a: Option<String>,
    },
    /// Per-element tautness gaps of a set B.
    Taut {
        /// Comma separated list or family such as prime-squares:10000.
        #[arg(long)]
        b: String,
    },
    /// Logarithmic density of the B-free integers.
    Behrend {
        #[arg(long)]
        b: String,
    },
    /// Indicator of the B-free integers on [1, N].
    Eta {
        #[arg(long)]
        b: String,
        /// Packed bytes instead of 0/1 text.
        #[arg(long)]
        packed: bool,
    },
    /// Sturmian rotation coding on [1, N].
    Sturmian {
        /// Rotation number: 1/phi, 1/phi^2, p/q or a decimal.
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        #[arg(long)]
        packed: bool,
    },
    /// Hereditary closure of a presented subshift, as a spec file.
    Closure,
    /// Dominating word free of 00 and 111 for a word of X_{111,1001}.
    Embed {
        #[arg(long)]
        word: String,
    },
    /// Entropy/density, rate-of-convergence and entropy-Gibbs inequalities.
    Bound {
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        a: String,
        /// Periodic pattern whose convolved orbit measure is checked.
        #[arg(long, value_name = "PATTERN")]
        kappa_of: Option<String>,
    },
    /// Canonical form of a spec file.
    Spec,
}

fn run(cli: Cli) -> Result<(Outcome, ExperimentConfig), CliError> {
    let c = cli.common;
    let cfg = ExperimentConfig::new(c.spec.as_ref(), c.n_max, c.window, c.out, c.format, &c.tol)?;
    let outcome = match &cli.command {
        Command::Entropy => commands::entropy(&cfg)?,
        Command::Density => commands::density(&cfg)?,
        Command::Gibbs { h, a } => commands::gibbs(&cfg, h.as_deref(), a.as_deref())?,
        Command::Taut { b } => commands::taut(&cfg, b)?,
        Command::Behrend { b } => commands::behrend(&cfg, b)?,
        Command::Eta { b, packed } => commands::eta_cmd(&cfg, b, *packed)?,
        Command::Sturmian { alpha, rho, packed } => commands::sturmian(&cfg, alpha, *rho, *packed)?,
        Command::Closure => commands::closure(&cfg)?,
        Command::Embed { word } => commands::embed(word)?,
        Command::Bound { h, a, kappa_of } => commands::bound(&cfg, h.as_deref(), a, kappa_of.as_deref())?,
        Command::Spec => commands::spec(&cfg)?,
    };
    Ok((outcome, cfg))
}

fn emit(outcome: &Outcome, cfg: &ExperimentConfig) -> Result<(), CliError> {
    let bytes = match &outcome.output {
        Output::Report(r) => r.render(cfg.format).into_bytes(),
        Output::Text(t) => t.clone().into_bytes(),
        Output::Bytes(b) => b.clone(),
    };
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| CliError::Io(path.display().to_string(), e))?;
            if let Output::Report(r) = &outcome.output {
                print!("{}", r.meta_text());
            }
        }
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io("stdout".into(), e))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(outcome, cfg)| emit(&outcome, &cfg).map(|()| outcome.violated));
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
