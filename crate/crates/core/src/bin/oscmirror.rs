use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use oscillating_mirror::runner::{parse_config, run, Task};

/// Atom in front of an oscillating mirror: decay, photon populations, spectra.
#[derive(Parser, Debug)]
#[command(name = "oscmirror", version)]
struct Cli {
    /// decay, channelA, channelB, spectrum, rates or sweep
    task: Task,
    /// Configuration file (key = value with [sections], or JSON)
    #[arg(long)]
    config: PathBuf,
    /// Override a configuration key, e.g. --set nu=20 or --set time.dt=0.001
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory, overriding output_dir from the config
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut overrides = vec![format!("task={}", cli.task)];
    overrides.extend(cli.set.iter().cloned());
    if let Some(out) = &cli.out {
        overrides.push(format!("output_dir={}", out.display()));
    }
    let result = parse_config(&cli.config, &overrides).and_then(|cfg| run(&cfg));
    match result {
        Ok(bundle) => {
            for (i, _, msg) in &bundle.failures {
                eprintln!("error: sweep point {i}: {msg}");
            }
            println!("{}", bundle.output_dir.display());
            ExitCode::from(bundle.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
