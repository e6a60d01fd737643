use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sdq_cli::{run, CommandKind, Flags, Format, Outcome};

#[derive(Parser)]
#[command(name = "sdq", version, about = "Berezin quantization checks on spin systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantize a polynomial and report the matrix and its norm.
    Quantize(Common),
    /// Sweep a defect or limit observable over spin or site count.
    Sweep(Common),
    /// Sample KMS residuals of Gibbs, product or mixed states.
    Kms(Common),
    /// Tabulate the contour resolvent error against node count.
    Resolvent(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Report path; overrides `out` in the config. Default: stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `format` in the config. Default: csv.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Exit 1 when the command's check fails.
    #[arg(long)]
    check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match cli.command {
        Command::Quantize(c) => (CommandKind::Quantize, c),
        Command::Sweep(c) => (CommandKind::Sweep, c),
        Command::Kms(c) => (CommandKind::Kms, c),
        Command::Resolvent(c) => (CommandKind::Resolvent, c),
    };
    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.config.display());
            return ExitCode::from(2);
        }
    };
    let flags = Flags { out: common.out, format: common.format, check: common.check };
    match run(kind, &text, &flags) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
