//! `iis`: classify, induce, symmetrize and verify symmetric interval
//! identification systems of order 3.

mod commands;
mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "iis", version, about = "Exact Rauzy induction for symmetric interval identification systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Directory for relative --output paths.
    #[arg(long, env = "IIS_OUTPUT_DIR", global = true)]
    output_dir: Option<PathBuf>,
    /// Digits of the decimal annotations.
    #[arg(long, default_value_t = 12, global = true)]
    digits: usize,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Until {
    Symmetric,
    Hole,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RenderFormat {
    Svg,
    Ascii,
}

#[derive(Subcommand)]
enum Command {
    /// Case label, counts, hole flag and candidate matrices.
    Classify {
        /// "a,b,c,u" as exact rationals, or `thin`.
        #[arg(short, long)]
        params: String,
    },
    /// Run the Rauzy induction and print the trace.
    Induce {
        #[arg(short, long, conflicts_with = "system", required_unless_present = "system")]
        params: Option<String>,
        /// JSON file with an interval identification system.
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        /// Maximum number of ordinary iterations.
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Until::Symmetric)]
        until: Until,
    },
    /// Run the induction until the system is symmetric again.
    Symmetrize {
        #[arg(short, long)]
        params: String,
        #[arg(long, default_value_t = iis_core::cases::DEFAULT_STEP_CAP)]
        cap: usize,
    },
    /// Check the self-similar thin example.
    ThinCheck,
    /// Orbit of a point under the identifications.
    Orbit {
        #[arg(short, long, conflicts_with = "system", required_unless_present = "system")]
        params: Option<String>,
        #[arg(long)]
        system: Option<PathBuf>,
        /// Rational point of the support.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = iis_core::system::DEFAULT_ORBIT_MAX)]
        max: usize,
    },
    /// Draw a trace, one row per ordinary iteration.
    Render {
        #[arg(short, long, conflicts_with = "trace", required_unless_present = "trace")]
        params: Option<String>,
        /// Trace JSON as printed by `induce`.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Ordinary iterations to draw (default: until symmetric).
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = RenderFormat::Svg)]
        format: RenderFormat,
    },
    /// Compare the matrix route with the engine on seeded random samples.
    Verify {
        /// Number of samples (default 1000, or 0 with --thin).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Bound on numerators and denominators.
        #[arg(long, default_value_t = 50)]
        height: i64,
        /// Check the thin example.
        #[arg(long)]
        thin: bool,
    },
    /// Repeated symmetrization looking for shrinking supports.
    Scan {
        #[arg(short, long)]
        params: String,
        #[arg(long, default_value_t = 30)]
        max_generalized: usize,
        /// Stop once the support is at most this fraction of the initial one.
        #[arg(long, default_value = "0")]
        epsilon: String,
    },
}

/// Failures, each with its exit code.
#[derive(Debug)]
pub enum CliError {
    Mismatch(String),
    Usage(String),
    Degenerate(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }
}

pub struct Output {
    path: Option<PathBuf>,
}

impl Output {
    pub fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.path {
            None => {
                print!("{text}");
                Ok(())
            }
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
                }
                std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = cli.output.map(|p| match &cli.output_dir {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p,
    });
    let out = Output { path };
    let digits = cli.digits;
    let result = match cli.command {
        Command::Classify { params } => commands::classify(&params, &out, digits),
        Command::Induce { params, system, side, steps, until } => {
            commands::induce(params.as_deref(), system.as_deref(), side, steps, until, &out)
        }
        Command::Symmetrize { params, cap } => commands::symmetrize(&params, cap, &out, digits),
        Command::ThinCheck => commands::thin_check(&out, digits),
        Command::Orbit { params, system, point, max } => {
            commands::orbit(params.as_deref(), system.as_deref(), &point, max, &out)
        }
        Command::Render { params, trace, steps, format } => {
            commands::render(params.as_deref(), trace.as_deref(), steps, format, &out)
        }
        Command::Verify { samples, seed, height, thin } => commands::verify(samples, seed, height, thin, &out, digits),
        Command::Scan { params, max_generalized, epsilon } => {
            commands::scan(&params, max_generalized, &epsilon, &out, digits)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Mismatch(m) => eprintln!("verification failed: {m}"),
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Degenerate(m) => eprintln!("degenerate input: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}
