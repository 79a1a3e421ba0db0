//! The `qlbs` command line driven in-process: simulate a CSV, fit it, read
//! the JSON report back.
//!
//! ```text
//! cargo run -p qlbs --example cli_pipeline
//! ```

use anyhow::ensure;
use qlbs::cli::{run, FitReport};

pub fn run_example() -> anyhow::Result<()> {
    let dir = std::env::temp_dir().join("qlbs-cli-example");
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("sim.csv");
    let csv_arg = csv.to_string_lossy().into_owned();
    let out_arg = dir.to_string_lossy().into_owned();
    let code = run(["qlbs", "simulate", "--n", "300", "--tau", "0.75", "--seed", "9", "--out", &csv_arg]);
    ensure!(code == 0, "simulate exited with {code}");
    let code = run([
        "qlbs", "fit", &csv_arg, "--response", "t", "--q-cols", "x1", "--alpha-cols", "w1", "--tau", "0.75", "--out",
        &out_arg,
    ]);
    ensure!(code == 0, "fit exited with {code}");
    let report = FitReport::from_json(&std::fs::read_to_string(dir.join("fit.json"))?)?;
    println!("report read back: {} parameters, log-lik {}", report.fit.n_params(), report.fit.loglik);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
