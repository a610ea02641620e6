use std::process::ExitCode;

use clap::Parser;
use polypell::cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build()
        {
            Ok(pool) => pool.install(|| run(&cli.command)),
            Err(e) => {
                eprintln!("error: cannot start {jobs} worker threads: {e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
        },
        None => run(&cli.command),
    };
    match outcome {
        Ok(out) => {
            print!("{}", out.render(cli.json));
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
