//! Argument parsing and dispatch for the `torick` binary.
//!
//! Exit codes: 0 success, 1 a check failed (invalid piecewise exponential,
//! oracle mismatch, incomplete fan, inconsistent bundle data), 2 input
//! error.

pub mod commands;
pub mod records;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{run_command, Command, Report, Status};
pub use records::{parse_inputs, InputPaths, WorkspaceFiles};

pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "torick",
    version,
    about = "Equivariant K-theory of simplicial toric varieties"
)]
pub struct Cli {
    /// Fan file: {rank, rays, max_cones}.
    #[arg(long, global = true, value_name = "FILE")]
    pub fan: Option<PathBuf>,
    /// Emit a JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Fan validation and structure.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// Equivariant Euler characteristic of a line bundle or fixed-point data.
    Chi(ChiArgs),
    /// Equivariant multiplicity at the fixed point of a cone.
    Mult(MultArgs),
    /// Piecewise exponential functions.
    Pexp {
        #[command(subcommand)]
        action: PexpAction,
    },
    /// Lattice points of a divisor polytope.
    Points {
        #[arg(long, value_name = "FILE")]
        divisor: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum FanAction {
    /// Validate, classify cones, list walls.
    Check,
}

#[derive(Debug, Args)]
pub struct ChiArgs {
    /// Divisor file: {coeffs}.
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with = "bundle",
        required_unless_present = "bundle"
    )]
    pub divisor: Option<PathBuf>,
    /// Bundle-data file: {rank, cones: [{cone, weights}]}.
    #[arg(long, value_name = "FILE")]
    pub bundle: Option<PathBuf>,
    /// Print the non-equivariant Euler characteristic.
    #[arg(long)]
    pub classical: bool,
    /// Compare against the lattice points of the polytope.
    #[arg(long, requires = "divisor")]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct MultArgs {
    #[arg(long)]
    pub cone: usize,
    /// Also print the Chow multiplicity.
    #[arg(long)]
    pub chow: bool,
    /// Also print the Todd ratio through degree N (smooth cones only).
    #[arg(long, value_name = "N")]
    pub todd: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum PexpAction {
    /// Check the wall conditions.
    Check {
        #[arg(long, value_name = "FILE")]
        pexp: PathBuf,
    },
    /// Push forward to a point.
    Push {
        #[arg(long, value_name = "FILE")]
        pexp: PathBuf,
    },
}

impl Cli {
    /// Input paths and the command to run.
    pub fn plan(&self) -> (InputPaths, Command) {
        let mut paths = InputPaths {
            fan: self.fan.clone(),
            ..InputPaths::default()
        };
        let cmd = match &self.command {
            CliCommand::Fan {
                action: FanAction::Check,
            } => Command::FanCheck,
            CliCommand::Chi(a) => {
                if let Some(b) = &a.bundle {
                    paths.bundle = Some(b.clone());
                    Command::ChiBundle {
                        classical: a.classical,
                    }
                } else {
                    paths.divisor = a.divisor.clone();
                    Command::ChiDivisor {
                        classical: a.classical,
                        oracle: a.oracle,
                    }
                }
            }
            CliCommand::Mult(a) => Command::Mult {
                cone: a.cone,
                chow: a.chow,
                todd: a.todd,
            },
            CliCommand::Pexp { action } => match action {
                PexpAction::Check { pexp } => {
                    paths.pexp = Some(pexp.clone());
                    Command::PexpCheck
                }
                PexpAction::Push { pexp } => {
                    paths.pexp = Some(pexp.clone());
                    Command::PexpPush
                }
            },
            CliCommand::Points { divisor } => {
                paths.divisor = Some(divisor.clone());
                Command::Points
            }
        };
        (paths, cmd)
    }
}

/// Result of one invocation: what goes to stdout and stderr, and the exit
/// code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn execute(cli: &Cli) -> Outcome {
    let (paths, cmd) = cli.plan();
    let result = parse_inputs(&paths).and_then(|ws| run_command(&cmd, &ws));
    match result {
        Ok(report) => {
            let stdout = if cli.json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("report serializes");
                s.push('\n');
                s
            } else {
                report.text()
            };
            Outcome {
                stdout,
                stderr: String::new(),
                code: report.status.code(),
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
            code: EXIT_INPUT_ERROR,
        },
    }
}
