mod commands;
mod config;
mod table;

use std::io::Write;
use std::process::ExitCode;

use boundary_eos::polylog::Species;
use boundary_eos::statmech::Regime;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::EosMode;
use config::{CommonArgs, Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] boundary_eos::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(boundary_eos::Error::NumericalFailure(_)) => 3,
            _ => 2,
        }
    }
}

/// Spectra and finite-size equations of state for a particle in a box with
/// Dirichlet and Robin walls.
#[derive(Debug, Parser)]
#[command(name = "boundary-eos", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct ModeArgs {
    /// Ground-level occupancy of a Bose gas over the exact spectrum
    #[arg(long)]
    bec: bool,
    /// Zero-temperature Fermi sea, exact and closed-form spectra
    #[arg(long)]
    fermi_t0: bool,
    /// Pressure difference between Dirichlet and Neumann faces
    #[arg(long)]
    delta_p: bool,
}

impl ModeArgs {
    fn mode(&self) -> EosMode {
        if self.bec {
            EosMode::Bec
        } else if self.fermi_t0 {
            EosMode::FermiT0
        } else if self.delta_p {
            EosMode::DeltaP
        } else {
            EosMode::Standard(None)
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegimeArg {
    HighT,
    Ground,
    Bec,
    FermiT0,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpeciesArg {
    Boson,
    Fermion,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact and closed-form energy levels
    Spectrum {
        /// Number of levels (defaults to the sweep point count, then 10)
        #[arg(long)]
        count: Option<usize>,
    },
    /// Equation of state at one state point
    Eos(ModeArgs),
    /// Equation of state over a one-parameter grid
    Sweep(ModeArgs),
    /// Equation of state in a chosen regime, bypassing the automatic choice
    Limits {
        #[arg(long, value_enum)]
        regime: RegimeArg,
    },
    /// Euler-Maclaurin coefficients in exact rationals
    Coeffs {
        /// Number of correction orders K (1 to 10)
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Li_s(±e^y) with the duplication-identity residual
    Polylog {
        /// 1/2 or 3/2
        #[arg(long, default_value = "1/2")]
        order: String,
        #[arg(long, value_enum, default_value = "fermion")]
        sign: SpeciesArg,
        /// Comma-separated exponents; an empty list gives a header-only table
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        y: String,
    },
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.common)?;
    let table = match &cli.command {
        Command::Spectrum { count } => commands::spectrum(&cfg, *count)?,
        Command::Eos(mode) => commands::eos(&cfg, mode.mode())?,
        Command::Sweep(mode) => commands::sweep(&cfg, mode.mode())?,
        Command::Limits { regime } => {
            let regime = match regime {
                RegimeArg::HighT => Regime::HighTemperature,
                RegimeArg::Ground => Regime::GroundDominated,
                RegimeArg::Bec => Regime::Bec,
                RegimeArg::FermiT0 => Regime::FermiZeroT,
            };
            commands::eos(&cfg, EosMode::Standard(Some(regime)))?
        }
        Command::Coeffs { order } => commands::coeffs(*order)?,
        Command::Polylog { order, sign, y } => {
            let species = match sign {
                SpeciesArg::Boson => Species::Boson,
                SpeciesArg::Fermion => Species::Fermion,
            };
            let ys = y
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|e| CliError::Config(format!("bad --y value {v:?}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            commands::polylog_table(commands::parse_order(order)?, species, &ys)?
        }
    };
    let text = match cfg.format {
        Format::Csv => table::render_csv(&table, cfg.precision),
        Format::Json => table::render_json(&table, cfg.precision),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
