//! `whitney`: Whitney extension and trace-norm functionals for data on the
//! line.

mod commands;
mod error;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{parse_exponent, RunConfig, SelftestConfig};
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "whitney", version, about = "Whitney extension of finite data and L^m_p trace functionals")]
#[command(after_help = "Exit codes: 0 ok, 2 parse failure, 3 insufficient data, 4 invalid configuration, \
5 numerical failure.\nSet WHITNEY_TOLERANCES to a TOML file to override numerical tolerances.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct DataArgs {
    /// CSV (x,f) or JSON ({"points": [...], "values": [...]}) data file.
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Sobolev order, 1..=8.
    #[arg(short = 'm')]
    m: usize,
    /// Exponent: a number above 1, or "inf".
    #[arg(short = 'p', value_parser = parse_exponent)]
    p: f64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also solve for the minimal-energy interpolant (p = 2 only).
    #[arg(long)]
    oracle: bool,
    /// Skip the sharp maximal function norm.
    #[arg(long)]
    no_sharp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the extension, sample it, and report every functional.
    Extend {
        #[command(flatten)]
        data: DataArgs,
        /// Number of equispaced sample points (data points are added).
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Sampling padding on each side, as a multiple of the data span.
        #[arg(long, default_value_t = 0.1)]
        pad: f64,
        /// CSV file for the samples x, F, F1..Fm.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the discrete functionals.
    Functionals {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Print the table of known constants.
    Constants {
        #[arg(short = 'm')]
        m: usize,
        /// Also write the table as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the invariant checks on generated instances.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances per order m.
        #[arg(long, default_value_t = 12)]
        instances: usize,
        /// Largest number of points per instance.
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[arg(long, hide = true)]
        perturb_gap: bool,
    },
}

fn run_config(data: DataArgs, samples: usize, pad: f64, out: Option<PathBuf>) -> CliResult<RunConfig> {
    Ok(RunConfig {
        m: data.m,
        p: data.p,
        input: data.input,
        samples,
        pad,
        out,
        report: data.report,
        oracle: data.oracle,
        sharp: !data.no_sharp,
        tolerances: commands::load_tolerances()?,
    })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Extend { data, samples, pad, out } => commands::cmd_extend(&run_config(data, samples, pad, out)?),
        Command::Functionals { data } => commands::cmd_functionals(&run_config(data, 1, 0.0, None)?),
        Command::Constants { m, json } => commands::cmd_constants(m, json.as_deref()),
        Command::Selftest { seed, instances, n_max, perturb_gap } => {
            if instances == 0 || n_max < 5 {
                return Err(CliError::Config("selftest needs --instances >= 1 and --n-max >= 5".into()));
            }
            commands::cmd_selftest(&SelftestConfig {
                seed,
                instances,
                n_max,
                perturb_gap,
                tolerances: commands::load_tolerances()?,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
