//! A reduced Monte Carlo study of bias, MSE, coverage and residual moments.
//! The full design is the default `StudyConfig` (or `qlbs study`).
//!
//! ```text
//! cargo run --release -p qlbs --example monte_carlo_study
//! ```

use qlbs::harness::{run_study, StudyConfig};

pub fn run_example() -> anyhow::Result<()> {
    let cfg = StudyConfig {
        n_grid: vec![50, 200],
        tau_grid: vec![0.5],
        reps: 50,
        ..StudyConfig::default()
    };
    println!("{}", cfg.to_toml()?);
    let report = run_study(&cfg)?;
    print!("{}", report.to_table());
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
