//! Residuals, their summary moments, simulated envelopes and descriptive
//! statistics.

mod envelope;
mod plot;
mod residuals;
mod stats;

pub use envelope::{simulated_envelope, EnvelopeBand};
pub use plot::{envelope_svg, write_envelope_csv, write_residuals_csv};
pub use residuals::{gcs_residuals, residuals, rq_residuals, ResidualKind, ResidualSet, GCS_CAP, RQ_LIMIT};
pub use stats::{descriptive_stats, residual_moments, DescriptiveStats, ResidualMoments};
