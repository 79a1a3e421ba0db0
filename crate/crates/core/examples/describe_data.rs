//! Load a CSV and summarize the response.
//!
//! ```text
//! cargo run -p qlbs --example describe_data
//! ```

use qlbs::cli::{describe_table, load_csv};
use qlbs::diagnostics::descriptive_stats;

pub fn run_example() -> anyhow::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/evaporation_standin.csv");
    let data = load_csv(path)?;
    let rows: Vec<_> = ["evaporation", "x1", "x2", "x3", "x4"]
        .iter()
        .map(|c| Ok((c.to_string(), descriptive_stats(&data.column(c)?))))
        .collect::<anyhow::Result<_>>()?;
    print!("{}", describe_table(&rows));
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example()
}
