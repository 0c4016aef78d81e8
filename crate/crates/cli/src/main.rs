//! `cmap`: batch driver for the verification suites and table generators.
//!
//! Exit status is 0 when every check of the invoked suite passes, 1 when a
//! check fails and 2 on invalid input.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::Report;
use config::{Defaults, Format, RawConfig, RunConfig};

#[derive(Parser)]
#[command(name = "cmap", version, about = "Verification suites and tables for the deformed c-map metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lie derivative of the metric along every catalogued Killing field.
    VerifyKilling {
        #[command(flatten)]
        cfg: RawConfig,
        /// Also check ∂ρ, which is not Killing and must fail.
        #[arg(long)]
        inject_control: bool,
    },
    /// Exact bracket check of the Lie algebra action.
    Structure {
        #[command(flatten)]
        cfg: RawConfig,
        /// Use a wrong normalization of the central generator.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Kernel of the center action and the lattices F, F′.
    Center {
        #[command(flatten)]
        cfg: RawConfig,
    },
    /// Einstein residuals from finite-difference Ricci curvature.
    Curvature {
        #[command(flatten)]
        cfg: RawConfig,
    },
    /// Norm-one elements of the order ℤ⟨I, J⟩ in (a, b / ℚ).
    Lattice {
        #[command(flatten)]
        cfg: RawConfig,
    },
    /// Fiber volume tails on a grid of ρ₀.
    VolumeTable {
        #[command(flatten)]
        cfg: RawConfig,
    },
}

fn defaults(n: usize, points: usize, format: Format) -> Defaults {
    Defaults { n, c: 1.0, points, format }
}

fn run(cli: Cli) -> Result<(Report, Option<std::path::PathBuf>)> {
    let (report, cfg) = match cli.command {
        Command::VerifyKilling { cfg, inject_control } => {
            let cfg = RunConfig::resolve(cfg.load()?, defaults(2, 20, Format::Json))?;
            (commands::verify_killing(&cfg, inject_control)?, cfg)
        }
        Command::Structure { cfg, inject_fault } => {
            let cfg = RunConfig::resolve(cfg.load()?, defaults(2, 1, Format::Json))?;
            (commands::structure(&cfg, inject_fault)?, cfg)
        }
        Command::Center { cfg } => {
            let cfg = RunConfig::resolve(cfg.load()?, defaults(2, 1, Format::Json))?;
            (commands::center(&cfg)?, cfg)
        }
        Command::Curvature { cfg } => {
            let cfg = RunConfig::resolve(cfg.load()?, defaults(1, 5, Format::Json))?;
            (commands::curvature(&cfg)?, cfg)
        }
        Command::Lattice { cfg } => {
            let cfg = RunConfig::resolve(cfg.load()?, defaults(1, 1, Format::Csv))?;
            (commands::lattice(&cfg)?, cfg)
        }
        Command::VolumeTable { cfg } => {
            let cfg = RunConfig::resolve(cfg.load()?, defaults(1, 1, Format::Csv))?;
            (commands::volume(&cfg)?, cfg)
        }
    };
    Ok((report, cfg.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(report, out)| {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
        match out {
            Some(path) => std::fs::write(&path, &report.text).with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(report.text.as_bytes())?,
        }
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
