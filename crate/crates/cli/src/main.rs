//! `nefvol` — nef cone volumes and Néron–Severi discriminants of abelian
//! surfaces from the command line.
//!
//! Exit codes: 0 all checks passed, 1 configuration or runtime error,
//! 2 usage error, 3 a report was produced but at least one check failed.

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use nefvol::conevol::v_rho;
use nefvol::report::{parse_ranges, parse_run_config, run, sweep, SweepConfig};

#[derive(Parser)]
#[command(name = "nefvol", version, about = "Nef cone volumes of abelian surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one surface, compute its volumes, and run the consistency checks
    Run {
        /// Path to a JSON configuration file, or inline JSON starting with '{'
        config: String,
        /// Monte Carlo sample count (overrides the configuration)
        #[arg(long)]
        samples: Option<u64>,
        /// Monte Carlo seed (overrides the configuration)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Skip the Monte Carlo estimate and its check
        #[arg(long)]
        no_mc: bool,
        /// Significant digits for real numbers (1..=17, overrides the configuration)
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Tabulate a parameter family, e.g. `sweep simple_real_mult d=2..20 f=1..6`
    Sweep {
        /// Surface kind to sweep (all kinds except simple_quaternion_mult)
        family: String,
        /// Inclusive ranges `key=lo..hi` or single values `key=v`
        ranges: Vec<String>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Add a Monte Carlo estimate to every row (off by default)
        #[arg(long)]
        mc: bool,
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Print v_rho, the volume of the standard truncated positive cone
    Vrho {
        rho: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Run { config, samples, seed, format, no_mc, precision } => {
            let text = if config.trim_start().starts_with('{') {
                config
            } else {
                fs::read_to_string(&config).with_context(|| format!("reading {config}"))?
            };
            let mut cfg = parse_run_config(&text)?;
            if let Some(s) = samples {
                cfg.samples = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(p) = precision {
                cfg.precision = p;
            }
            if no_mc {
                cfg.mc = false;
            }
            let report = run(&cfg)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(exit_for(report.all_passed()))
        }
        Cmd::Sweep { family, ranges, samples, seed, format, mc, precision } => {
            let mut cfg = SweepConfig::new(&family, parse_ranges(&ranges)?);
            if let Some(s) = samples {
                cfg.samples = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(p) = precision {
                cfg.precision = p;
            }
            cfg.mc = mc;
            let report = sweep(&cfg)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(exit_for(report.all_passed()))
        }
        Cmd::Vrho { rho, format } => {
            let v = v_rho(rho)?;
            match format {
                Format::Json => {
                    println!("{}", serde_json::json!({ "rho": rho, "v_rho": format!("{v:.16e}") }))
                }
                Format::Text => println!("v_{rho} = {v:.16e}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_for(all_passed: bool) -> ExitCode {
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
