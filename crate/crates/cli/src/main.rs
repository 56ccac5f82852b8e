use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use signorini_cli::commands::{self, Format};

/// Planar Signorini condition checker.
#[derive(Parser, Debug)]
#[command(name = "signorini", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative tolerance (overrides the scenario's `tol`; default 1e-9).
    #[arg(long, global = true, value_parser = parse_tol)]
    tol: Option<f64>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Records)]
    format: FormatArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every case of a scenario; one verdict record per case.
    Check { scenario: PathBuf },
    /// Report the contact regime of every case.
    Classify { scenario: PathBuf },
    /// Write one SVG figure per case.
    Render {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit a repulsive atom distribution for every case.
    Synthesize { scenario: PathBuf },
    /// Run the randomized property suites.
    Oracle {
        /// Patch file (bare patch descriptor or scenario); random patches when absent.
        #[arg(long)]
        patch: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Records,
    Pretty,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
        _ => Err(format!("expected a finite nonnegative number, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Records => Format::Records,
        FormatArg::Pretty => Format::Pretty,
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = match &cli.command {
        Command::Check { scenario } => commands::check_cmd(scenario, cli.tol, format, &mut out, &mut err),
        Command::Classify { scenario } => commands::classify_cmd(scenario, cli.tol, format, &mut out, &mut err),
        Command::Render { scenario, out: dir } => commands::render_cmd(scenario, dir, cli.tol, &mut out, &mut err),
        Command::Synthesize { scenario } => commands::synthesize_cmd(scenario, cli.tol, format, &mut out, &mut err),
        Command::Oracle { patch, seed, count } => {
            commands::oracle_cmd(patch.as_deref(), *seed, *count, cli.tol, format, &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
