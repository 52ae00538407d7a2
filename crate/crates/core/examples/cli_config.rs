//! Driving the runner from a JSON document, as the `degenheat` binary does.

use degenheat::cli::{self, ExperimentConfig, Mode};

const CONFIG: &str = r#"{
  "grid": {"extents": [1.0], "counts": [99]},
  "time": {"horizon": 1.0, "steps": 100},
  "potential": {"family": "expanding_slab", "center": 0.5, "r0": 0.2, "rate": 0.1},
  "initial": {"shape": {"kind": "bump", "center": [0.5], "width": 0.2, "amplitude": 1.0}},
  "lambda": 1000.0,
  "derbound": true
}"#;

fn main() {
    let config = ExperimentConfig::from_json(CONFIG).expect("valid configuration");
    assert!(config.experiment(Mode::Check).is_ok());

    let dir = std::env::temp_dir().join("degenheat_cli_example");
    std::fs::create_dir_all(&dir).expect("temporary directory");
    let path = dir.join("check.json");
    std::fs::write(&path, CONFIG).expect("config written");
    let prefix = dir.join("run");
    let code = cli::run([
        "degenheat",
        "check",
        "--config",
        path.to_str().unwrap(),
        "--out",
        prefix.to_str().unwrap(),
    ]);
    println!("exit code {code}");
    let csv = std::fs::read_to_string(dir.join("run_energy.csv")).expect("report");
    print!("{csv}");
}
