//! Runs a bundled configuration through the library runner, with overrides,
//! and lists the files it wrote.
//!
//! `cargo run --example run_config -- fig7 frequency.n_points=801`

use oscillating_mirror::runner::{bundled_configs, parse_config_str, run};

fn main() -> oscillating_mirror::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig4".into());
    let mut overrides: Vec<String> = args.collect();
    let Some((_, text)) = bundled_configs().iter().find(|(n, _)| *n == name) else {
        let names: Vec<&str> = bundled_configs().iter().map(|(n, _)| *n).collect();
        eprintln!("unknown config '{name}'; bundled: {}", names.join(", "));
        std::process::exit(2);
    };
    let out = std::env::temp_dir().join(format!("oscmirror-{name}"));
    overrides.push(format!("output_dir={}", out.display()));
    let cfg = parse_config_str(text, &overrides)?;
    let bundle = run(&cfg)?;
    println!("{} -> {}", cfg.task, bundle.output_dir.display());
    for f in &bundle.files {
        println!("  {f}");
    }
    for w in &cfg.timescales.warnings {
        println!("warning: {w}");
    }
    for (i, _, msg) in &bundle.failures {
        println!("point {i} failed: {msg}");
    }
    Ok(())
}
