use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use qutrit_qkd::protocol::transcript::write_transcript;
use qutrit_qkd::{Inequality, ProtocolConfig, ProtocolVariant};
use qutrit_qkd_cli::{parse_grid, render, run_command, simulate, Command, Format, StateKind};

#[derive(Parser)]
#[command(name = "qutrit-qkd", version, about = "Entangled-qutrit QKD simulator")]
struct Cli {
    /// Output format: json, csv or text.
    #[arg(long, global = true, default_value = "text")]
    format: Format,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact inequality value for a state and the optimal bases.
    Exact {
        #[arg(long, default_value = "chsh3")]
        inequality: Inequality,
        #[arg(long, default_value = "ghz")]
        state: StateKind,
        /// Middle amplitude of the nme state (defaults to the optimum).
        #[arg(long)]
        gamma: Option<f64>,
        /// White-noise fraction F.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Run the protocol with seeded randomness.
    Simulate {
        #[arg(long, default_value = "h3deb")]
        variant: ProtocolVariant,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Check rounds required in each check class.
        #[arg(long, default_value_t = ProtocolConfig::DEFAULT_MIN_CHECK_ROUNDS)]
        rounds: u64,
        #[arg(long, default_value_t = 256)]
        key_length: usize,
        #[arg(long, env = "QUTRIT_QKD_SEED", default_value_t = 0)]
        seed: u64,
        /// Abort unless the violation factor exceeds 1 + margin.
        #[arg(long, default_value_t = 0.0)]
        margin: f64,
        /// Print the key trits (never printed on abort).
        #[arg(long)]
        emit_key: bool,
        /// Write the per-round transcript as CSV.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Violation factor against noise, and where it crosses 1.
    Sweep {
        #[arg(long, default_value = "h3deb")]
        variant: ProtocolVariant,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long, default_value = "0:1:0.01")]
        grid: String,
        /// Also simulate each point with this many check rounds per class.
        #[arg(long)]
        rounds: Option<u64>,
        #[arg(long, env = "QUTRIT_QKD_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Sifting table of a variant.
    Tables {
        #[arg(long, default_value = "h3deb")]
        variant: ProtocolVariant,
    },
}

fn run(cli: Cli) -> Result<i32> {
    let (report, transcript) = match cli.command {
        Sub::Exact {
            inequality,
            state,
            gamma,
            noise,
        } => (
            run_command(&Command::Exact {
                inequality,
                state,
                gamma,
                noise,
            })?,
            None,
        ),
        Sub::Simulate {
            variant,
            noise,
            rounds,
            key_length,
            seed,
            margin,
            emit_key,
            transcript,
        } => {
            let config = ProtocolConfig {
                variant,
                noise,
                target_key_length: key_length,
                min_check_rounds: rounds,
                abort_margin: margin,
                seed,
            };
            let (report, outcome) = simulate(&config, emit_key)?;
            (report, transcript.map(|p| (p, outcome.rounds)))
        }
        Sub::Sweep {
            variant,
            grid,
            rounds,
            seed,
        } => (
            run_command(&Command::Sweep {
                variant,
                grid: parse_grid(&grid)?,
                rounds,
                seed,
            })?,
            None,
        ),
        Sub::Tables { variant } => (run_command(&Command::Tables { variant })?, None),
    };

    if let Some((path, rounds)) = transcript {
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        write_transcript(&rounds, &mut out)?;
        out.flush()?;
    }
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(render(&report, cli.format)?.as_bytes())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
