//! Front end for `rinehart-core`: TOML problem files in, deterministic JSON
//! reports out.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;

use std::path::PathBuf;

use clap::ValueEnum;

pub use commands::{run, Outcome};
pub use error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Cohomology,
    Curvature,
    Bianchi,
    Classify,
    ChernWeil,
    Invariants,
    GlobalInvariant,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cohomology => "cohomology",
            Command::Curvature => "curvature",
            Command::Bianchi => "bianchi",
            Command::Classify => "classify",
            Command::ChernWeil => "chern-weil",
            Command::Invariants => "invariants",
            Command::GlobalInvariant => "global-invariant",
        }
    }
}

/// One run of the tool, after argument parsing.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub command: Command,
    pub file: Option<PathBuf>,
    pub fixture: Option<String>,
    pub degree: Option<usize>,
    pub all: bool,
    pub max_weight: Option<usize>,
    pub module: Option<String>,
    pub act: Option<PathBuf>,
}

impl Invocation {
    pub fn new(command: Command) -> Self {
        Invocation {
            command,
            file: None,
            fixture: None,
            degree: None,
            all: false,
            max_weight: None,
            module: None,
            act: None,
        }
    }
}
