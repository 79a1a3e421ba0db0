//! Quantile regressions of monthly evaporation at τ = 0.25, 0.5, 0.75:
//! `log Q = β0 + β1 x1 + β2 x2 + β3 x3 + β4 x4`, `log α = ρ0 + ρ1 x2 + ρ2 x3`.
//!
//! Uses the file named by `QLBS_EVAPORATION_CSV` (or `data/evaporation.csv`)
//! when present, the shipped synthetic stand-in otherwise.
//!
//! ```text
//! cargo run -p qlbs --example evaporation_fit
//! ```

use std::path::PathBuf;

use qlbs::cli::{fit_table, load_csv, FitReport, RunConfig};
use qlbs::model::{conf_intervals, fit, FitOptions};

fn data_path() -> PathBuf {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    std::env::var_os("QLBS_EVAPORATION_CSV")
        .map(PathBuf::from)
        .or_else(|| Some(root.join("data/evaporation.csv")).filter(|p| p.exists()))
        .unwrap_or_else(|| root.join("data/evaporation_standin.csv"))
}

pub fn run_example() -> anyhow::Result<()> {
    let path = data_path();
    println!("data: {}", path.display());
    let data = load_csv(&path)?;
    for tau in [0.25, 0.5, 0.75] {
        let mut cfg = RunConfig::new("evaporation", tau);
        cfg.q_covariates = ["x1", "x2", "x3", "x4"].map(String::from).to_vec();
        cfg.alpha_covariates = ["x2", "x3"].map(String::from).to_vec();
        let (spec, t) = cfg.build(&data)?;
        let res = fit(&spec, &t, &FitOptions::default())?;
        let report = FitReport {
            response: cfg.response.clone(),
            q_terms: cfg.q_terms(),
            alpha_terms: cfg.alpha_terms(),
            link_q: cfg.link_q,
            link_alpha: cfg.link_alpha,
            level: 0.05,
            intervals: Some(conf_intervals(&res, 0.05)?),
            hessian_discrepancy: None,
            fit: res,
        };
        println!("{}", fit_table(&report));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
