// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! `qsdlab` — experiment runner for the quantum-state-difference laboratory.
//!
//! Every subcommand reads a flat `key=value` or JSON config, runs
//! deterministically (identical config and seed give byte-identical output),
//! and writes CSV or JSON to stdout or `--out`.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical-tolerance failure.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::experiments::CliError;

#[derive(Parser)]
#[command(name = "qsdlab", version, about = "Quantum-state-difference amplification laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration file (key=value lines or a JSON object).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for all pseudo-randomness (overrides the config's `seed` key).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Reference process: per-step overlap law against its analytic form.
    ReferenceSweep,
    /// Amplitude-based process with identity or Haar-random QM operators.
    QsdSweep,
    /// Four-way oracle equivalence over all solution indices.
    OracleEquiv,
    /// Momentum-displacement branch overlaps under box doubling.
    PhaseQuansdam,
    /// Oscillator-expansion truncation-error curve.
    Truncation,
    /// Group-commutator defect scaling in tau and repetition count.
    BchScaling,
    /// Closed-form Gaussian packet overlap vs quadrature oracle.
    GaussianOverlapCheck,
    /// Operator-sequence defect against the IC propagator target.
    UseqDefect,
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let text = match &cli.config {
        None => String::new(),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
    };
    let mut cfg = Config::parse(&text).map_err(CliError::from)?;
    if let Some(seed) = cli.seed {
        cfg.set_number("seed", seed as f64);
    }
    let table = match cli.command {
        Command::ReferenceSweep => experiments::reference_sweep(&mut cfg)?,
        Command::QsdSweep => experiments::qsd_sweep(&mut cfg)?,
        Command::OracleEquiv => experiments::oracle_equiv(&mut cfg)?,
        Command::PhaseQuansdam => experiments::phase_quansdam(&mut cfg)?,
        Command::Truncation => experiments::truncation(&mut cfg)?,
        Command::BchScaling => experiments::bch_scaling(&mut cfg)?,
        Command::GaussianOverlapCheck => experiments::gaussian_overlap_check(&mut cfg)?,
        Command::UseqDefect => experiments::useq_defect_cmd(&mut cfg)?,
    };
    cfg.finish().map_err(CliError::from)?;
    Ok(match cli.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rendered) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{rendered}");
            }
            ExitCode::SUCCESS
        }
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Tolerance(_)) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
    }
}
