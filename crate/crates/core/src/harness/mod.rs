//! Monte Carlo study: simulate from the regression model, refit, and
//! aggregate bias, MSE, Wald coverage and residual moments per (n, τ) cell.

mod config;
mod report;
mod simulate;
mod study;

pub use config::{CovariateLaw, StudyConfig};
pub use simulate::simulate_dataset;
pub use study::{run_study, CellReport, ParamSummary, ResidualSummary, StudyReport};
