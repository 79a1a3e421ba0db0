//! Synthetic stand-in for the monthly Brasília evaporation series.
//!
//! Seventy months of seasonal covariates (actual evapotranspiration x1,
//! insolation x2, cloudiness x3, relative humidity x4) with a response drawn
//! from the regression at τ = 0.5 using the reference median-model
//! coefficients. The seed and humidity level were picked so the response
//! summary sits near the reference one.
//!
//! ```text
//! cargo run -p qlbs --example evaporation_standin            # compare with data/
//! cargo run -p qlbs --example evaporation_standin -- --write # regenerate data/
//! ```

use std::path::PathBuf;

use anyhow::ensure;
use qlbs::cli::{parse_csv, Dataset};
use qlbs::diagnostics::descriptive_stats;
use qlbs::lbs::{lbs_quantile, theta_from_q};
use qlbs::numerics::{norm_quantile, RngStream};
use qlbs::QlbsParams;

const SEED: u64 = 2972;
const HUMIDITY_LEVEL: f64 = 62.0;

pub fn standin_dataset() -> anyhow::Result<Dataset> {
    let mut rng = RngStream::new(SEED, 0);
    let gauss = |sd: f64, rng: &mut RngStream| -> anyhow::Result<f64> { Ok(sd * norm_quantile(rng.uniform())?) };
    let mut rows = Vec::with_capacity(70);
    for m in 0..70usize {
        // wettest in January
        let s = (2.0 * std::f64::consts::PI * m as f64 / 12.0).cos();
        let x4 = (HUMIDITY_LEVEL + 15.0 * s + gauss(4.0, &mut rng)?).clamp(30.0, 92.0);
        let x3 = (5.0 + 2.8 * s + gauss(0.8, &mut rng)?).clamp(0.3, 9.7);
        let x2 = (200.0 - 55.0 * s + gauss(15.0, &mut rng)?).max(60.0);
        let x1 = (80.0 + 35.0 * s + gauss(8.0, &mut rng)?).max(10.0);
        let q = (6.8523 + 0.0014 * x1 + 0.0008 * x2 + 0.0401 * x3 - 0.0365 * x4).exp();
        let alpha = (0.8052 - 0.0123 * x2 - 0.2153 * x3).exp();
        let law = theta_from_q(&QlbsParams::new(alpha, q, 0.5)?)?;
        let t = lbs_quantile(rng.uniform(), &law)?;
        let (year, month) = (2011 + m / 12, m % 12 + 1);
        rows.push(vec![year as f64, month as f64, t, x1, x2, x3, x4]);
    }
    let cols = ["year", "month", "evaporation", "x1", "x2", "x3", "x4"];
    Ok(Dataset::new(cols.iter().map(|s| s.to_string()).collect(), rows)?)
}

fn shipped_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/evaporation_standin.csv")
}

pub fn run_example() -> anyhow::Result<()> {
    let data = standin_dataset()?;
    let d = descriptive_stats(&data.column("evaporation")?);
    println!(
        "stand-in evaporation: min {:.2}, median {:.2}, max {:.2}, mean {:.2}, sd {:.2}, cv {:.2}%, cs {:.2}",
        d.min, d.median, d.max, d.mean, d.sd, d.cv_percent, d.cs
    );
    if std::env::args().any(|a| a == "--write") {
        std::fs::write(shipped_path(), data.to_csv())?;
        println!("wrote {}", shipped_path().display());
    } else {
        let shipped = parse_csv(std::fs::File::open(shipped_path())?)?;
        ensure!(shipped == data, "data/evaporation_standin.csv is out of date; rerun with --write");
        println!("data/evaporation_standin.csv matches the generator");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
