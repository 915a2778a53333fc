use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vacresp::commands::{self, Options};
use vacresp::config::{Axis, ScenarioConfig};
use vacresp::output::Format;
use vacresp::{exit, CliError};
use vacresp_core::kernels::Separation;
use vacresp_core::quadrature::QuadratureSpec;
use vacresp_core::response::ResponseModel;

#[derive(Parser)]
#[command(name = "vacresp", version, about = "Vacuum mechanical response of deformed mirrors")]
struct Cli {
    /// Scenario file (TOML, SI units)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Relative quadrature tolerance, overriding the scenario file
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Scale every kernel by this factor (oracle mutation check)
    #[arg(long, global = true, hide = true)]
    perturb_normalization: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernels A+ and A- on the configured grid or at one point
    Kernel {
        /// In-plane wavenumber (1/m)
        #[arg(long, requires = "omega")]
        q: Option<f64>,
        /// Angular frequency (rad/s)
        #[arg(long, requires = "q")]
        omega: Option<f64>,
    },
    /// Region labels I, IIa, IIb on a (q, omega) grid
    RegionMap {
        /// Plate separation (m)
        #[arg(long)]
        separation: Option<f64>,
        /// Largest wavenumber (1/m)
        #[arg(long)]
        q_max: Option<f64>,
        /// Largest angular frequency (rad/s)
        #[arg(long)]
        omega_max: Option<f64>,
        /// Samples per axis
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Mass corrections, viscosity, decay time, lateral forces and
    /// capillary corrections for the scenario
    Scenario,
    /// Static Josephson-like force over the phase offset, or the sliding trace
    Josephson {
        #[arg(long, default_value_t = 72)]
        points: usize,
        /// Sample the force of plate 1 sliding at drive.velocity
        #[arg(long)]
        ac: bool,
        /// Sliding periods covered by the trace
        #[arg(long, default_value_t = 8.0)]
        periods: f64,
    },
    /// Capillary-wave corrections under a plate
    Capillary,
    /// Run every cross-check; exits 5 if any fails
    Oracle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build();
    let result = match pool {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(CliError::config(format!("thread pool: {e}"))),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn load(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    match &cli.config {
        Some(path) => ScenarioConfig::load(path),
        None => Err(CliError::config("this command needs --config".into())),
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let options = Options {
        rel_tol: cli.rel_tol,
        normalization: cli.perturb_normalization,
    };
    let config = cli.config.as_ref().map(|_| load(cli)).transpose()?;
    let base = match &config {
        Some(c) => c.quadrature()?,
        None => QuadratureSpec::default(),
    };
    let model = || -> Result<ResponseModel, CliError> { Ok(ResponseModel::from_evaluator(options.evaluator(base)?)) };
    let table = match &cli.command {
        Command::Kernel { q, omega } => {
            let config = load(cli)?;
            let points = match (q, omega) {
                (Some(q), Some(w)) => vec![(*q, *w)],
                _ => commands::configured_points(&config)?,
            };
            commands::kernel_table(config.geometry()?.separation, &points, &options.evaluator(base)?)?
        }
        Command::RegionMap {
            separation,
            q_max,
            omega_max,
            resolution,
        } => {
            let h = match (separation, &config) {
                (Some(h), _) => *h,
                (None, Some(c)) => match c.geometry()?.separation {
                    Separation::Finite(h) => h,
                    Separation::Infinite => {
                        return Err(CliError::config("region-map needs a finite separation".into()))
                    }
                },
                (None, None) => return Err(CliError::config("region-map needs --separation or --config".into())),
            };
            let grid = config.as_ref().and_then(|c| c.grid);
            let axis = |max: Option<f64>, fallback: Option<Axis>, what: &str| -> Result<Axis, CliError> {
                match (max, fallback) {
                    (Some(max), _) => Ok(Axis {
                        min: 0.0,
                        max,
                        points: *resolution,
                    }),
                    (None, Some(a)) => Ok(a),
                    (None, None) => Err(CliError::config(format!(
                        "region-map needs --{what}-max or a [grid] section"
                    ))),
                }
            };
            let q = axis(*q_max, grid.map(|g| g.q), "q")?;
            let w = axis(*omega_max, grid.map(|g| g.omega), "omega")?;
            commands::region_map(h, &q, &w)?
        }
        Command::Scenario => commands::scenario(&load(cli)?, &model()?)?,
        Command::Josephson { points, ac, periods } => {
            commands::josephson(&load(cli)?, &model()?, *points, *ac, *periods)?
        }
        Command::Capillary => commands::capillary(&load(cli)?)?,
        Command::Oracle => {
            let reports = commands::oracle(&options.evaluator(base)?);
            let passed = reports.iter().all(|r| r.passed);
            emit(cli, |w| match cli.format {
                Format::Csv => commands::oracle_table(&reports).write(Format::Csv, w),
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *w, &commands::oracle_json(&reports)).map_err(io::Error::from)?;
                    writeln!(w)?;
                    Ok(())
                }
            })?;
            return Ok(if passed { exit::SUCCESS } else { exit::ORACLE });
        }
    };
    emit(cli, |w| table.write(cli.format, w))?;
    Ok(exit::SUCCESS)
}

fn emit(cli: &Cli, body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
        }
    }
    Ok(())
}
