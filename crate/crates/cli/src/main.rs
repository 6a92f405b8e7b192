//! `cfl`: reproduce the constants, run the certificate checkers, and check
//! forms from JSON files.
//!
//! Every subcommand prints a JSON `RunReport` on stdout and a summary on
//! stderr. Exit codes: 0 when every verdict passes, 1 when one fails, 2 on
//! usage or input errors, 3 when the solver or the config generator breaks.

mod commands;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use cfl_core::gcs::Which;
use cfl_core::{tolerances, Error};

use commands::Ctx;
use report::RunReport;

/// Default seed for every sampled check.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::SolverFailure(_) | Error::GenerationFailed(_) | Error::ConvexityRefutation(_)) => 3,
            CliError::Core(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(name = "cfl", version, about = "Convex forms, sums of squares and Cauchy-Schwarz constants")]
struct Cli {
    /// Stopping tolerance of the interior-point solver.
    #[arg(long, global = true, default_value_t = tolerances::SDP_TOL)]
    sdp_tol: f64,
    /// Sphere or circle grid size for convexity scans and α refinement.
    #[arg(long, global = true, default_value_t = 4096)]
    grid: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads; 0 lets rayon decide.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Suppress the summary on stderr.
    #[arg(long, global = true)]
    json_only: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for A_d* or B_d*.
    GcsConstant {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, ignore_case = true)]
        which: WhichArg,
        /// Overrides --sdp-tol.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// A_d* for d = 1..max-d against the published three-decimal values.
    ReproduceTable1 {
        #[arg(long, default_value_t = 8)]
        max_d: u32,
    },
    /// Exact decompositions, trigonometric identities, q_d, A_4*, the p_d
    /// witnesses, disk-integral identities and the Hölder battery.
    VerifyIdentities,
    /// Decide whether a form is a sum of squares.
    CheckSos {
        form: PathBuf,
        #[arg(long)]
        certificate_out: Option<PathBuf>,
    },
    /// Sos-convexity certificate plus a sphere scan of the Hessian.
    CheckConvex {
        form: PathBuf,
        #[arg(long)]
        certificate_out: Option<PathBuf>,
    },
    /// The non-sos quaternary quartic and its failing certificate.
    CbExample,
    /// Check a form against a Cayley-Bacharach configuration.
    CbCheck {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// CSV samples (theta, r, d) of the 1-level set of q_d.
    LevelsetData {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        /// Write the CSV here; the report then goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The fast invariant battery.
    Selftest,
}

fn run(cli: Cli) -> Result<(RunReport, bool), CliError> {
    let (lo, hi) = tolerances::SDP_TOL_RANGE;
    let tol_ok = |t: f64| t.is_finite() && (lo..=hi).contains(&t);
    if !tol_ok(cli.sdp_tol) {
        return Err(CliError::Usage(format!("--sdp-tol must lie in [{lo:e}, {hi:e}]")));
    }
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let ctx = Ctx { sdp_tol: cli.sdp_tol, grid: cli.grid, seed: cli.seed };
    // The second value says whether the report belongs on stderr.
    Ok(match cli.command {
        Command::GcsConstant { d, which, tol } => {
            let tol = tol.unwrap_or(cli.sdp_tol);
            if !tol_ok(tol) {
                return Err(CliError::Usage(format!("--tol must lie in [{lo:e}, {hi:e}]")));
            }
            let which = match which {
                WhichArg::A => Which::A,
                WhichArg::B => Which::B,
            };
            (commands::gcs_constant(&Ctx { sdp_tol: tol, ..ctx }, d, which)?, false)
        }
        Command::ReproduceTable1 { max_d } => {
            let r = commands::reproduce_table1(&ctx, max_d)?;
            if !cli.json_only {
                eprintln!("{:>3}  {:>12}  {:>6}", "d", "A_d*", "table");
                for row in r.data["rows"].as_array().into_iter().flatten() {
                    eprintln!("{:>3}  {:>12.8}  {:>6.3}", row["d"], row["value"].as_f64().unwrap_or(f64::NAN), row["table"].as_f64().unwrap_or(f64::NAN));
                }
            }
            (r, false)
        }
        Command::VerifyIdentities => (commands::verify_identities(&ctx)?, false),
        Command::CheckSos { form, certificate_out } => (commands::check_sos(&ctx, &form, certificate_out.as_deref())?, false),
        Command::CheckConvex { form, certificate_out } => {
            (commands::check_convex(&ctx, &form, certificate_out.as_deref())?, false)
        }
        Command::CbExample => (commands::cb_example(&ctx)?, false),
        Command::CbCheck { form, config } => (commands::cb_check(&ctx, &form, &config)?, false),
        Command::LevelsetData { d, samples, out } => match out {
            Some(path) => {
                let file = std::fs::File::create(&path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                let mut w = io::BufWriter::new(file);
                (commands::levelset_data(&ctx, d, samples, &mut w)?, false)
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                (commands::levelset_data(&ctx, d, samples, &mut lock)?, true)
            }
        },
        Command::Selftest => (commands::selftest(&ctx)?, false),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CFL_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json_only = cli.json_only;
    let start = Instant::now();
    match run(cli) {
        Ok((mut report, to_stderr)) => {
            report.wall_time = start.elapsed().as_secs_f64();
            let json = report.to_json();
            if to_stderr {
                eprintln!("{json}");
            } else {
                let mut out = io::stdout().lock();
                let _ = writeln!(out, "{json}");
            }
            if !json_only {
                eprint!("{}", report.summary());
            }
            ExitCode::from(if report.all_pass() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
