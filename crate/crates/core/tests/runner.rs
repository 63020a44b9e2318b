use std::fs;
use std::path::Path;

use oscillating_mirror::runner::{bundled_configs, parse_config_str, run, Task};

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "csv") {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn parallel_and_sequential_sweeps_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let text = bundled_configs().iter().find(|(n, _)| *n == "fig7").unwrap().1;
    let mut outputs = Vec::new();
    for parallel in ["true", "false"] {
        let dir = tmp.path().join(parallel);
        let cfg = parse_config_str(
            text,
            &[
                format!("output_dir={}", dir.display()),
                format!("sweep.parallel={parallel}"),
                "frequency.n_points=401".into(),
            ],
        )
        .unwrap();
        let bundle = run(&cfg).unwrap();
        assert_eq!(bundle.exit_code(), 0);
        outputs.push(files(&dir));
    }
    assert_eq!(outputs[0].len(), 1 + 3 * 2);
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn every_bundled_config_runs() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, text) in bundled_configs() {
        let dir = tmp.path().join(name);
        let mut overrides = vec![format!("output_dir={}", dir.display())];
        if *name == "fig10" {
            overrides.push("frequency.n_points=41".into());
        }
        let cfg = parse_config_str(text, &overrides).unwrap();
        let bundle = run(&cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(bundle.exit_code(), 0, "{name}: {:?}", bundle.failures);
        assert!(dir.join("metadata.json").exists(), "{name}");
        if cfg.task == Task::Sweep {
            assert!(dir.join("summary.csv").exists(), "{name}");
        }
    }
}

#[test]
fn derived_phase_is_flagged_in_metadata() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = parse_config_str(
        "task = rates\nk0R = pi/8\nk0l0 = 1\nnu = 20\ntau = 0.001\n",
        &[format!("output_dir={}", tmp.path().display())],
    )
    .unwrap();
    let bundle = run(&cfg).unwrap();
    let scenario = &bundle.metadata["scenario"];
    assert!(scenario["omega0_tau_source"].as_str().unwrap().starts_with("derived"));
    assert!((scenario["omega0_tau"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert!(bundle.metadata["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().contains("omega0")));
}
