use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use rinehart_cli::{run, Command, Invocation};

/// Exact Lie-Rinehart cohomology, extensions and Chern-Weil classes.
#[derive(Debug, Parser)]
#[command(name = "rinehart", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// TOML problem file.
    file: Option<PathBuf>,
    /// Use a catalog fixture instead of (or on top of) a file.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long, conflicts_with = "all")]
    degree: Option<usize>,
    /// All degrees (default for `cohomology`).
    #[arg(long)]
    all: bool,
    #[arg(long)]
    max_weight: Option<usize>,
    /// `trivial`, `base`, or a module block name.
    #[arg(long)]
    module: Option<String>,
    /// TOML file with a center-valued 2-cocycle `rho` for `classify`.
    #[arg(long)]
    act: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let inv = Invocation {
        command: args.command,
        file: args.file,
        fixture: args.fixture,
        degree: args.degree,
        all: args.all,
        max_weight: args.max_weight,
        module: args.module,
        act: args.act,
    };
    match run(&inv) {
        Ok(outcome) => {
            let text = outcome.report.render();
            match &args.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
