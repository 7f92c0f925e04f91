//! `idealflow`: premagic checks, ideal flow, random-walk simulation,
//! Markov conversions and conjecture sweeps on matrix and network files.
//!
//! Exit codes: 0 on success (or a positive verdict), 1 when well-formed
//! input fails a mathematical condition, 2 for input and usage errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "idealflow", version, about = "Premagic matrices and ideal flow on directed networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DomainArg {
    Rational,
    Float,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConvertTarget {
    /// `s_ij = m_ij / n_i`, throughputs `n` reported separately.
    RowStochastic,
    /// `m / κ` with `κ` the total.
    TotalNormalized,
    /// Back to a premagic matrix from `--throughputs` or `--kappa`.
    Premagic,
}

#[derive(Subcommand)]
enum Command {
    /// Tests whether a matrix is premagic and reports sums, conservation and norms.
    Check {
        matrix: PathBuf,
        /// Scalar domain; detected from the file when omitted.
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        /// Absolute tolerance for the float domain.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Computes the ideal flow of a strongly connected network.
    IdealFlow {
        /// Edge-list JSON, or a stochastic matrix CSV with `--stochastic`.
        input: PathBuf,
        /// Read the input as a row-stochastic matrix instead of a network.
        #[arg(long)]
        stochastic: bool,
        /// Output `diag(π)·S` without min-scaling.
        #[arg(long)]
        raw: bool,
        /// Multiply by the LCM of denominators to get whole numbers.
        #[arg(long, conflicts_with = "kappa")]
        integer: bool,
        /// Rescale so entries sum to this total (e.g. `1`, `10`, `3/2`).
        #[arg(long)]
        kappa: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulates random walkers and reports convergence to the ideal flow.
    Simulate {
        network: PathBuf,
        /// Total step budgets N·T, comma separated and increasing.
        #[arg(long = "nt", value_delimiter = ',', required = true,
              value_parser = clap::value_parser!(u64).range(1..))]
        budgets: Vec<u64>,
        #[arg(long, env = "IDEALFLOW_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Converts between premagic, row-stochastic and total-normalized forms.
    Convert {
        matrix: PathBuf,
        #[arg(long, value_enum)]
        to: ConvertTarget,
        /// Throughput vector CSV used by `--to premagic`.
        #[arg(long, conflicts_with = "kappa")]
        throughputs: Option<PathBuf>,
        /// Where `--to row-stochastic` writes the throughputs.
        #[arg(long)]
        throughputs_out: Option<PathBuf>,
        /// Total used by `--to premagic`.
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Runs a conjecture sweep over random premagic matrices and prints a JSON report.
    Conjectures {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Fixed matrix order; otherwise orders are drawn from `--min-order..=--max-order`.
        #[arg(long, conflicts_with_all = ["min_order", "max_order"])]
        order: Option<usize>,
        #[arg(long, default_value_t = 2)]
        min_order: usize,
        #[arg(long, default_value_t = 10)]
        max_order: usize,
        /// Scaling factors for conjecture 3.
        #[arg(long, value_delimiter = ',', default_value = "0.5,2,3,10")]
        k: Vec<f64>,
        #[arg(long, env = "IDEALFLOW_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { matrix, domain, tol, format } => commands::check(&matrix, domain, tol, format),
        Command::IdealFlow { input, stochastic, raw, integer, kappa, output } => {
            commands::ideal_flow(&input, stochastic, raw, integer, kappa.as_deref(), output.as_deref())
        }
        Command::Simulate { network, budgets, seed, output } => {
            commands::simulate(&network, &budgets, seed, output.as_deref())
        }
        Command::Convert { matrix, to, throughputs, throughputs_out, kappa, domain, output } => commands::convert(
            &matrix,
            to,
            throughputs.as_deref(),
            throughputs_out.as_deref(),
            kappa.as_deref(),
            domain,
            output.as_deref(),
        ),
        Command::Conjectures { id, cases, order, min_order, max_order, k, seed, output } => {
            let (lo, hi) = order.map_or((min_order, max_order), |n| (n, n));
            commands::conjectures(id, cases, lo, hi, &k, seed, output.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
