//! `dynamo`: command-line front end for the spectral dynamo toolkit.
//!
//! Tabular results are CSV (header row, `\n` line endings, shortest
//! round-trip float formatting); reports are JSON objects with snake_case
//! keys.  Whenever an output goes to a file, a `<output>.manifest.json` is
//! written next to it with the fully resolved parameters, and `dynamo rerun`
//! reproduces the output byte for byte from that manifest.
//!
//! Exit codes: 0 on success, 1 on numerical failure, 2 on usage or
//! configuration errors.

mod commands;
mod config;
mod manifest;

use clap::{Parser, Subcommand};
use commands::{execute, resolve_dp, CommandOutput};
use config::ProfileConfig;
use manifest::{manifest_path, ResolvedCommand, RunManifest};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration: exit code 2.
    Config(String),
    /// A computation failed: exit code 1.
    Numerical(String),
}

#[derive(Parser)]
#[command(
    name = "dynamo",
    version,
    about = "Spectral toolkit for the spherically symmetric mean-field dynamo operator",
    long_about = "Tabulates the unperturbed spectral mesh, enumerates its diabolical points \
(branch crossings), unfolds crossings to first order under a radial profile \
perturbation, and sweeps the Galerkin spectrum over the mean field strength."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate unperturbed eigenvalue branches over an alpha0 grid (CSV).
    Mesh {
        /// Spherical harmonic degree of the sector.
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Largest radial mode number; branches run +n_max..+1, -1..-n_max.
        #[arg(long)]
        n_max: u32,
        #[arg(long, allow_negative_numbers = true)]
        alpha0_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha0_max: f64,
        /// Number of grid points, endpoints included (0 emits only the header).
        #[arg(long)]
        steps: u32,
        /// Output file (stdout when omitted); file outputs get a manifest.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Enumerate branch crossings (diabolical points) in a window (CSV).
    Dps {
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Largest radial mode number of the crossing branches (>= 2).
        #[arg(long)]
        n_max: u32,
        #[arg(long, allow_negative_numbers = true)]
        alpha0_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha0_max: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda_max: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Unfold one crossing to first order under a profile (JSON).
    Unfold {
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// l=0 node selector `n,j`: the crossing of branches n and n+j.
        #[arg(long, value_name = "N,J", allow_hyphen_values = true, conflicts_with = "branches")]
        node: Option<String>,
        /// Signed branch pair `n_a,n_b`.
        #[arg(long, value_name = "NA,NB", allow_hyphen_values = true)]
        branches: Option<String>,
        /// Profile file (JSON).
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sweep the Galerkin spectrum over an alpha0 grid (CSV).
    Sweep {
        #[arg(long, default_value_t = 0)]
        l: u32,
        /// Basis dimension N (even): the symmetric window v_{N/2}..v_{-N/2}.
        #[arg(long)]
        window: u32,
        #[arg(long, allow_negative_numbers = true)]
        alpha0_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha0_max: f64,
        /// Number of grid points, endpoints included (0 emits only the header).
        #[arg(long)]
        steps: u32,
        /// Profile file (JSON).
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// First-order overcriticality report for l=0 profiles (JSON).
    Critical {
        /// Profile file (JSON, harmonic form).
        #[arg(long)]
        profile: PathBuf,
        /// Largest parabola index |j| to scan.
        #[arg(long, default_value_t = 12)]
        j_max: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recompute the output described by a manifest, byte for byte.
    Rerun {
        /// Manifest file written next to a previous output.
        #[arg(long)]
        manifest: PathBuf,
        /// Output file (stdout when omitted); file outputs get a manifest.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Numerical(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Config(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Rerun { manifest, output } = &cli.command {
        let loaded = RunManifest::load(manifest).map_err(CliError::Config)?;
        let result = execute(&loaded.command)?;
        return emit(result, output.as_deref(), &loaded);
    }
    let (resolved, output) = resolve(cli.command)?;
    let manifest = RunManifest::new(resolved);
    let result = execute(&manifest.command)?;
    emit(result, output.as_deref(), &manifest)
}

/// Turn parsed arguments into a fully resolved command (profile files
/// loaded and validated, selectors reduced to branch pairs).
fn resolve(command: Command) -> Result<(ResolvedCommand, Option<PathBuf>), CliError> {
    match command {
        Command::Mesh {
            l,
            n_max,
            alpha0_min,
            alpha0_max,
            steps,
            output,
        } => Ok((
            ResolvedCommand::Mesh {
                l,
                n_max,
                alpha0_min,
                alpha0_max,
                steps,
            },
            output,
        )),
        Command::Dps {
            l,
            n_max,
            alpha0_min,
            alpha0_max,
            lambda_min,
            lambda_max,
            output,
        } => Ok((
            ResolvedCommand::Dps {
                l,
                n_max,
                alpha0_min,
                alpha0_max,
                lambda_min,
                lambda_max,
            },
            output,
        )),
        Command::Unfold {
            l,
            node,
            branches,
            profile,
            output,
        } => {
            let (branch_a, branch_b) = match (node, branches) {
                (Some(node), None) => {
                    if l != 0 {
                        return Err(CliError::Config(
                            "--node addresses the l=0 parabola grid; use --branches for l >= 1"
                                .to_string(),
                        ));
                    }
                    let (n, j) = parse_pair(&node, "--node")?;
                    (n, n + j)
                }
                (None, Some(pair)) => parse_pair(&pair, "--branches")?,
                (None, None) => {
                    return Err(CliError::Config(
                        "select a crossing with --node n,j or --branches n_a,n_b".to_string(),
                    ))
                }
                (Some(_), Some(_)) => unreachable!("clap rejects conflicting selectors"),
            };
            // Validate the selector now so bad input fails before any
            // computation, with a usage exit code.
            resolve_dp(l, branch_a, branch_b)?;
            let profile = ProfileConfig::load(&profile).map_err(CliError::Config)?;
            Ok((
                ResolvedCommand::Unfold {
                    l,
                    branch_a,
                    branch_b,
                    profile,
                },
                output,
            ))
        }
        Command::Sweep {
            l,
            window,
            alpha0_min,
            alpha0_max,
            steps,
            profile,
            output,
        } => {
            let profile = ProfileConfig::load(&profile).map_err(CliError::Config)?;
            Ok((
                ResolvedCommand::Sweep {
                    l,
                    window,
                    alpha0_min,
                    alpha0_max,
                    steps,
                    profile,
                },
                output,
            ))
        }
        Command::Critical {
            profile,
            j_max,
            output,
        } => {
            let profile = ProfileConfig::load(&profile).map_err(CliError::Config)?;
            Ok((ResolvedCommand::Critical { j_max, profile }, output))
        }
        Command::Rerun { .. } => unreachable!("rerun is handled before resolution"),
    }
}

fn parse_pair(text: &str, flag: &str) -> Result<(i32, i32), CliError> {
    let mut parts = text.split(',');
    let (Some(first), Some(second), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(CliError::Config(format!(
            "{flag} expects two comma-separated integers, got {text:?}"
        )));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<i32>()
            .map_err(|e| CliError::Config(format!("{flag}: bad integer {s:?}: {e}")))
    };
    Ok((parse(first)?, parse(second)?))
}

fn emit(
    result: CommandOutput,
    output: Option<&Path>,
    manifest: &RunManifest,
) -> Result<(), CliError> {
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    match output {
        None => {
            print!("{}", result.bytes);
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, result.bytes.as_bytes()).map_err(|e| {
                CliError::Numerical(format!("cannot write {}: {e}", path.display()))
            })?;
            let mpath = manifest_path(path);
            std::fs::write(&mpath, manifest.to_json().as_bytes()).map_err(|e| {
                CliError::Numerical(format!("cannot write {}: {e}", mpath.display()))
            })
        }
    }
}
