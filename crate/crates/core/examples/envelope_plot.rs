//! Simulated envelope for the residual QQ plot, written as CSV and SVG.
//!
//! ```text
//! cargo run -p qlbs --example envelope_plot
//! ```

use qlbs::diagnostics::{envelope_svg, simulated_envelope, write_envelope_csv, ResidualKind};
use qlbs::harness::{simulate_dataset, CovariateLaw};
use qlbs::model::{fit, FitOptions};
use qlbs::{ParamVector, RngStream};

pub fn run_example() -> anyhow::Result<()> {
    let truth = ParamVector::new(vec![1.0, -1.0], vec![0.25f64.ln(), 0.5]);
    let (spec, t) = simulate_dataset(200, 0.5, &truth, CovariateLaw::UniformM1To1, &mut RngStream::new(31, 0))?;
    let res = fit(&spec, &t, &FitOptions::default())?;
    let dir = std::env::temp_dir().join("qlbs-envelope-example");
    std::fs::create_dir_all(&dir)?;
    for kind in [ResidualKind::Gcs, ResidualKind::Rq] {
        let band = simulated_envelope(&res, &spec, &t, kind, 99, 0.05, &RngStream::new(32, 0))?;
        let csv = dir.join(format!("envelope_{}.csv", kind.name()));
        write_envelope_csv(&band, std::fs::File::create(&csv)?)?;
        std::fs::write(dir.join(format!("envelope_{}.svg", kind.name())), envelope_svg(&band))?;
        println!(
            "{}: {:.1}% of sorted residuals inside the 95% band ({} replicates) -> {}",
            kind.name(),
            100.0 * band.coverage(),
            band.replicates,
            csv.display()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
