//! `spinorbit` — sweeps, design calculations, and verification checks for
//! spin-orbit neutron wavepacket states.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use spinorbit::cli::{
    cmd_design, cmd_fig, cmd_sweep, emit_table, emit_text, render_check_line,
    run_acceptance_checks, RunConfig,
};
use spinorbit::ramsey::SweptAngle;
use spinorbit::Result;

#[derive(Parser)]
#[command(
    name = "spinorbit",
    version,
    about = "Spin-orbit neutron wavepacket sweeps, design calculator, and verification suite"
)]
struct Cli {
    /// Configuration file (flat key = value lines); defaults to the path in
    /// SPINORBIT_CONFIG when set.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format: csv or jsonl.
    #[arg(long, global = true, value_name = "FMT")]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce one of the five reference sweeps (1..=5).
    Fig {
        /// Figure number.
        n: u8,
        /// Fixed second-quadrupole rotation in radians (figure 5 only,
        /// default pi).
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        /// Swept angle for figure 5: beta (default) or theta.
        #[arg(long, value_name = "ANGLE")]
        sweep: Option<String>,
    },
    /// Physical-design calculator.
    Design {
        /// Field gradient [T/cm].
        gradient: f64,
        /// Magnet length [cm].
        length: f64,
        /// Neutron wavelength [nm].
        lambda: f64,
        /// Transverse coherence length [nm].
        sigma: f64,
    },
    /// Run the built-in verification suite (one line per criterion).
    Check,
    /// Generic one-parameter sweep.
    Sweep {
        /// Swept parameter: ratio, q, beta, or theta.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        step: f64,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("spinorbit: {err}");
            err.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let mut config = RunConfig::load(cli.config.as_deref())?;
    if let Some(out) = cli.out {
        config.output_path = Some(out);
    }
    if let Some(format) = cli.format {
        config.format = format.parse()?;
    }
    config.validate()?;

    match cli.command {
        Command::Fig { n, theta, sweep } => {
            let swept: Option<SweptAngle> = sweep.as_deref().map(str::parse).transpose()?;
            let table = cmd_fig(n, theta, swept, &config)?;
            emit_table(&table, &config)?;
            Ok(0)
        }
        Command::Design {
            gradient,
            length,
            lambda,
            sigma,
        } => {
            let report = cmd_design(gradient, length, lambda, sigma, &config)?;
            emit_text(&format!("{report}\n"), &config)?;
            Ok(0)
        }
        Command::Check => {
            let results = run_acceptance_checks(&config)?;
            let mut lines = String::new();
            for result in &results {
                lines.push_str(&render_check_line(result));
                lines.push('\n');
            }
            emit_text(&lines, &config)?;
            let failures = results.iter().filter(|r| !r.passed).count();
            if failures == 0 {
                Ok(0)
            } else {
                eprintln!(
                    "spinorbit: {failures} of {} verification criteria failed",
                    results.len()
                );
                Ok(2)
            }
        }
        Command::Sweep {
            param,
            from,
            to,
            step,
        } => {
            let table = cmd_sweep(&param, from, to, step, &config)?;
            emit_table(&table, &config)?;
            Ok(0)
        }
    }
}
