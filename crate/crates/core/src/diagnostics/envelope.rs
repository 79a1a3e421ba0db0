use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::residuals::{residuals, ResidualKind};
use crate::error::{Error, Result};
use crate::model::{fit, simulate_response, FitOptions, FitResult, ModelSpec};
use crate::numerics::{quantile_sorted, sorted, RngStream};

/// Pointwise band of sorted residuals from refits to data simulated under a
/// fitted model, with the observed sorted residuals alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeBand {
    pub kind: ResidualKind,
    /// Reference quantiles at plotting positions `(i − 0.5)/n`.
    pub sorted_theoretical: Vec<f64>,
    pub observed: Vec<f64>,
    pub lower: Vec<f64>,
    pub median: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
    /// Replicates that contributed.
    pub replicates: usize,
    pub failed: usize,
}

impl EnvelopeBand {
    /// Fraction of observed sorted residuals inside `[lower, upper]`.
    pub fn coverage(&self) -> f64 {
        let inside = (0..self.observed.len())
            .filter(|&i| self.lower[i] <= self.observed[i] && self.observed[i] <= self.upper[i])
            .count();
        inside as f64 / self.observed.len() as f64
    }
}

/// Simulate `r ≥ 19` responses from `fitted` on the same design, refit each,
/// and take the `level/2` and `1 − level/2` percentiles of every order
/// statistic. Replicate `k` uses `rng.child(k)`.
pub fn simulated_envelope(
    fitted: &FitResult,
    spec: &ModelSpec,
    t: &[f64],
    kind: ResidualKind,
    r: usize,
    level: f64,
    rng: &RngStream,
) -> Result<EnvelopeBand> {
    if r < 19 {
        return Err(Error::InvalidSpec(format!("envelope needs at least 19 replicates, got {r}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(crate::error::domain("envelope level", level));
    }
    let observed = sorted(&residuals(kind, fitted, spec, t)?.values);
    let opts = FitOptions {
        start: Some(fitted.delta_hat.clone()),
        ..FitOptions::default()
    };
    let sims: Vec<Option<Vec<f64>>> = (0..r)
        .into_par_iter()
        .map(|k| {
            let mut stream = rng.child(k as u64);
            let ts = simulate_response(&fitted.delta_hat, spec, &mut stream).ok()?;
            let refit = fit(spec, &ts, &opts).ok().filter(|f| f.converged)?;
            let res = residuals(kind, &refit, spec, &ts).ok()?;
            Some(sorted(&res.values))
        })
        .collect();
    let failed = sims.iter().filter(|s| s.is_none()).count();
    if failed * 5 > r {
        return Err(Error::TooManyFailures { failed, total: r });
    }
    let sims: Vec<Vec<f64>> = sims.into_iter().flatten().collect();
    let n = observed.len();
    let mut lower = Vec::with_capacity(n);
    let mut median = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for i in 0..n {
        let col = sorted(&sims.iter().map(|s| s[i]).collect::<Vec<_>>());
        lower.push(quantile_sorted(&col, level / 2.0));
        median.push(quantile_sorted(&col, 0.5));
        upper.push(quantile_sorted(&col, 1.0 - level / 2.0));
    }
    let sorted_theoretical = (1..=n)
        .map(|i| kind.reference_quantile((i as f64 - 0.5) / n as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnvelopeBand {
        kind,
        sorted_theoretical,
        observed,
        lower,
        median,
        upper,
        level,
        replicates: sims.len(),
        failed,
    })
}
