use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use cstar_fixed::cli::{self, Command, ExitStatus};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    VerifyMetric,
    Certify,
    SolveCoupled,
    SolveFredholm,
    #[value(name = "demo-remark22")]
    DemoRemark22,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::VerifyMetric => Command::VerifyMetric,
            CommandArg::Certify => Command::Certify,
            CommandArg::SolveCoupled => Command::SolveCoupled,
            CommandArg::SolveFredholm => Command::SolveFredholm,
            CommandArg::DemoRemark22 => Command::DemoRemark22,
        }
    }
}

/// Fixed points of coupled maps on matrix-valued metric spaces.
#[derive(Debug, Parser)]
#[command(name = "cstar-fixed", version)]
struct Args {
    command: CommandArg,
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for trace.csv and summary.txt (default: the config's
    /// output_dir, else the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn exit(status: ExitStatus) -> ExitCode {
    ExitCode::from(status.code() as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return exit(ExitStatus::Usage);
        }
    };
    let text = match fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return exit(ExitStatus::Usage);
        }
    };
    let mut config = match cli::parse_config_for(args.command.into(), &text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return exit(ExitStatus::Usage);
        }
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let dir = args
        .out
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    match cli::run_to_dir(&config, &dir) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            exit(outcome.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(e.status())
        }
    }
}
