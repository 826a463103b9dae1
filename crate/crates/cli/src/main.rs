mod commands;
mod config;
mod output;
mod presets;

use std::process::ExitCode;

use qsw_core::Error;

use commands::Context;
use config::{Command, ParseOutcome};

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Parameter { .. } => 2,
        Error::Construction { .. } | Error::Structural(_) | Error::Perturbation { .. } | Error::Parse { .. } => 3,
        Error::Integrator { .. } => 4,
        Error::Io { .. } => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let run = match config::parse(&args) {
        ParseOutcome::Run(run) => *run,
        ParseOutcome::Info(text) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        ParseOutcome::Usage(msg) => {
            eprintln!("{}", msg.trim_end());
            return ExitCode::from(2);
        }
    };
    let env_threads = std::env::var("THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&t| t > 0);
    let ctx = Context {
        threads: env_threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        threads_from_env: env_threads.is_some(),
        run,
    };
    let result = match ctx.run.cli.command {
        Command::Generate => commands::generate(&ctx),
        Command::Metrics => commands::metrics(&ctx),
        Command::Evolve => commands::evolve(&ctx),
        Command::Sweep => commands::sweep(&ctx),
        Command::Experiment => presets::run(&ctx, ctx.run.cli.preset.expect("checked while parsing")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
