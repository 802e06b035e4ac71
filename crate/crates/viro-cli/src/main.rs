//! `viro`: command-line front end for the cooking, triangulation and patchworking engine.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use viro_cook::Error;

use args::{Cli, Command};
use commands::{Outcome, Usage};
use output::Sink;

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::InvalidInput(_) | Error::MissingDimension(_) | Error::DimensionMismatch { .. } | Error::UnknownLeaf(_) | Error::Parse(_)) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let cfg = &cli.config;
    if let Some(w) = cfg.workers {
        rayon::ThreadPoolBuilder::new().num_threads(usize::try_from(w)?).build_global()?;
    }
    let sink = Sink::new(cfg.output.clone());
    match &cli.command {
        Command::Coeff(a) => commands::coeff(a, cfg.format, &sink),
        Command::Cook(a) => commands::cook_cmd(a, cfg.format, &sink),
        Command::Search(a) => commands::search(a, cfg, &sink),
        Command::Limit(a) => commands::limit(a, cfg, &sink),
        Command::Triangulate(a) => commands::triangulate(a, cfg.format, &sink),
        Command::Patchwork(a) => commands::patchwork(a, cfg, &sink),
        Command::Verify(a) => commands::verify(a, cfg.format, &sink),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
