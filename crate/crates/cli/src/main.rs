//! `poncelet`: construct, test and explore Poncelet curves of pencils on a
//! conic from scene files.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 numeric failure.

mod commands;
mod plot;
mod scene;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use poncelet::membership::DEFAULT_TOL;
use poncelet::selftest::Level;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Numeric(_) => 3,
        }
    }
}

impl From<poncelet::Error> for CliError {
    fn from(e: poncelet::Error) -> Self {
        use poncelet::Error as E;
        match e {
            E::Numeric(_) | E::CoincidentParameters | E::RepeatedRoot => Self::Numeric(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "poncelet", version, about = "Poncelet curves of pencils on a smooth conic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the curve of a pencil and store it in the scene.
    Construct {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        conic: String,
        #[arg(long)]
        pencil: String,
        /// Name of the new curve.
        #[arg(long)]
        name: String,
        /// Write here instead of overwriting the scene.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a curve is Poncelet for a conic.
    Check {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        conic: String,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Trace tangent polygons from random complex starts.
    Closure {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        conic: String,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 10)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Search for conics a curve is Poncelet for.
    Recover {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 100)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Conic to compare the clusters against.
        #[arg(long)]
        target: Option<String>,
        /// Also write the clusters as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Jumping-line curve of a pencil and its duality verdict.
    Jumping {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        conic: String,
        #[arg(long)]
        pencil: String,
        /// Store the curve in the scene under this name.
        #[arg(long)]
        name: Option<String>,
    },
    /// Draw real loci of curves and conics as SVG.
    Plot {
        #[arg(long)]
        scene: PathBuf,
        /// Curve or conic names.
        #[arg(required = true)]
        names: Vec<String>,
        /// `xmin,xmax,ymin,ymax` in the chart z = 1.
        #[arg(long, default_value = "-3,3,-3,3", allow_hyphen_values = true)]
        window: plot::Window,
        #[arg(long, default_value_t = plot::DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in property suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a command hands back: text for stdout and whether its verdict held.
pub struct Output {
    pub stdout: String,
    pub positive: bool,
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Construct { scene, conic, pencil, name, out } => commands::construct(&scene, &conic, &pencil, &name, out.as_deref()),
        Command::Check { scene, conic, curve, tol } => commands::check(&scene, &conic, &curve, tol),
        Command::Closure { scene, conic, curve, starts, seed, tol, format } => {
            commands::closure(&scene, &conic, &curve, starts, seed, tol, format)
        }
        Command::Recover { scene, curve, starts, seed, tol, target, csv } => {
            commands::recover(&scene, &curve, starts, seed, tol, target.as_deref(), csv.as_deref())
        }
        Command::Jumping { scene, conic, pencil, name } => commands::jumping(&scene, &conic, &pencil, name.as_deref()),
        Command::Plot { scene, names, window, grid, out } => commands::plot(&scene, &names, &window, grid, &out),
        Command::Selftest { level, seed } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            commands::selftest(level, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(if out.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("poncelet: {e}");
            ExitCode::from(e.code())
        }
    }
}
