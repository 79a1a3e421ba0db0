use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lbs::{lbs_log_sf, theta_from_q, QlbsParams};
use crate::model::{fitted_parameters, FitResult, ModelSpec};
use crate::numerics::{norm_cdf, norm_quantile};

/// Cap applied to Cox–Snell residuals whose survival value underflows 1e−300.
pub const GCS_CAP: f64 = 690.775_527_898_213_7;
/// Saturation bound of randomized quantile residuals.
pub const RQ_LIMIT: f64 = 8.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResidualKind {
    /// `−log Ŝ(t)`, Exp(1) under the model.
    Gcs,
    /// `Φ⁻¹(Ŝ(t))`, standard normal under the model. Positive values mark
    /// observations below their fitted median.
    Rq,
}

impl ResidualKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gcs => "gcs",
            Self::Rq => "rq",
        }
    }

    /// Quantile of the reference law at `p`.
    pub fn reference_quantile(self, p: f64) -> Result<f64> {
        match self {
            Self::Gcs => Ok(-(-p).ln_1p()),
            Self::Rq => norm_quantile(p),
        }
    }
}

impl std::str::FromStr for ResidualKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gcs" => Ok(Self::Gcs),
            "rq" => Ok(Self::Rq),
            other => Err(Error::InvalidSpec(format!("unknown residual kind '{other}' (expected gcs or rq)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSet {
    pub kind: ResidualKind,
    pub values: Vec<f64>,
    /// `Q̂_{τ,i}`.
    pub fitted_quantiles: Vec<f64>,
    /// Indices whose residual was capped or saturated.
    pub flagged: Vec<usize>,
}

/// `ln Ŝ(t_i)` under the fitted law of each observation.
fn log_survival(fit: &FitResult, spec: &ModelSpec, t: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if !fit.converged {
        return Err(Error::NotConverged {
            iterations: fit.iterations,
            gradient_norm: fit.gradient_norm,
        });
    }
    if t.len() != spec.n() {
        return Err(Error::InvalidSpec(format!("{} responses for {} design rows", t.len(), spec.n())));
    }
    let fitted = fitted_parameters(&fit.delta_hat, spec)?;
    let log_sf = t
        .iter()
        .zip(fitted.q.iter().zip(&fitted.alpha))
        .map(|(&ti, (&q, &alpha))| {
            let law = theta_from_q(&QlbsParams::new(alpha, q, spec.tau)?)?;
            lbs_log_sf(ti, &law)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((log_sf, fitted.q))
}

fn gcs_from_log_sf(log_sf: f64) -> (f64, bool) {
    let r = -log_sf;
    if r > GCS_CAP || r.is_nan() {
        (GCS_CAP, true)
    } else {
        (r.max(0.0), false)
    }
}

fn rq_from_log_sf(log_sf: f64) -> (f64, bool) {
    let s = log_sf.exp();
    // Φ(8.2) rounds to 1, so anything that close saturates.
    if s <= norm_cdf(-RQ_LIMIT) {
        return (-RQ_LIMIT, true);
    }
    if s >= norm_cdf(RQ_LIMIT) {
        return (RQ_LIMIT, true);
    }
    match norm_quantile(s) {
        Ok(v) if v.abs() <= RQ_LIMIT => (v, false),
        Ok(v) => (v.signum() * RQ_LIMIT, true),
        Err(_) => (RQ_LIMIT, true),
    }
}

/// Residuals of `kind` for a converged fit.
pub fn residuals(kind: ResidualKind, fit: &FitResult, spec: &ModelSpec, t: &[f64]) -> Result<ResidualSet> {
    let (log_sf, fitted_quantiles) = log_survival(fit, spec, t)?;
    let mut values = Vec::with_capacity(log_sf.len());
    let mut flagged = Vec::new();
    for (i, &ls) in log_sf.iter().enumerate() {
        let (v, flag) = match kind {
            ResidualKind::Gcs => gcs_from_log_sf(ls),
            ResidualKind::Rq => rq_from_log_sf(ls),
        };
        values.push(v);
        if flag {
            flagged.push(i);
        }
    }
    Ok(ResidualSet {
        kind,
        values,
        fitted_quantiles,
        flagged,
    })
}

pub fn gcs_residuals(fit: &FitResult, spec: &ModelSpec, t: &[f64]) -> Result<ResidualSet> {
    residuals(ResidualKind::Gcs, fit, spec, t)
}

pub fn rq_residuals(fit: &FitResult, spec: &ModelSpec, t: &[f64]) -> Result<ResidualSet> {
    residuals(ResidualKind::Rq, fit, spec, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lbs::{kappa, lbs_quantile, LbsParams};
    use crate::model::{fit, FitOptions, HessianSource, ParamVector};

    fn fixed_fit(beta: f64, rho: f64, n: usize) -> FitResult {
        FitResult {
            delta_hat: ParamVector::new(vec![beta], vec![rho]),
            covariance: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            std_errors: vec![1.0, 1.0],
            loglik: 0.0,
            aic: 0.0,
            bic: 0.0,
            iterations: 1,
            converged: true,
            gradient_norm: 0.0,
            n,
            tau: 0.5,
            hessian: HessianSource::Numeric,
            loglik_trace: vec![],
        }
    }

    #[test]
    fn median_observation_gives_half_survival() {
        let (alpha, q) = (0.6f64, 2.0f64);
        let f = fixed_fit(q.ln(), alpha.ln(), 5);
        let spec = ModelSpec::intercept_only(5, 0.5).unwrap();
        let theta = 4.0 * q / kappa(0.5, alpha).unwrap();
        let med = lbs_quantile(0.5, &LbsParams::new(alpha, theta).unwrap()).unwrap();
        let t = vec![med; 5];
        let g = gcs_residuals(&f, &spec, &t).unwrap();
        assert!((g.values[0] - std::f64::consts::LN_2).abs() < 1e-12);
        let r = rq_residuals(&f, &spec, &t).unwrap();
        assert!(r.values[0].abs() < 1e-12);
        assert_eq!(g.fitted_quantiles[0], q);
    }

    #[test]
    fn rq_is_the_normal_quantile_of_exp_minus_gcs() {
        let mut rng = crate::RngStream::new(8, 0);
        let t = crate::lbs::lbs_sample(100, &LbsParams::new(0.5, 3.0).unwrap(), &mut rng).unwrap();
        let spec = ModelSpec::intercept_only(100, 0.5).unwrap();
        let f = fit(&spec, &t, &FitOptions::default()).unwrap();
        let g = gcs_residuals(&f, &spec, &t).unwrap();
        let r = rq_residuals(&f, &spec, &t).unwrap();
        for (gi, ri) in g.values.iter().zip(&r.values) {
            assert!(*gi >= 0.0);
            assert!((norm_quantile((-gi).exp()).unwrap() - ri).abs() < 1e-9);
        }
        assert!(g.flagged.is_empty() && r.flagged.is_empty());
    }

    #[test]
    fn extreme_observations_are_flagged() {
        let f = fixed_fit(0.0, 0.1f64.ln(), 5);
        let spec = ModelSpec::intercept_only(5, 0.5).unwrap();
        let t = vec![1.0, 1.0, 1e9, 1e-9, 1.0];
        let g = gcs_residuals(&f, &spec, &t).unwrap();
        assert_eq!(g.values[2], GCS_CAP);
        assert!(g.flagged.contains(&2));
        let r = rq_residuals(&f, &spec, &t).unwrap();
        assert_eq!(r.values[2], -RQ_LIMIT);
        assert_eq!(r.values[3], RQ_LIMIT);
        assert!(r.flagged.contains(&2) && r.flagged.contains(&3));
        assert!(r.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn non_converged_fit_is_rejected() {
        let mut f = fixed_fit(0.0, 0.0, 5);
        f.converged = false;
        let spec = ModelSpec::intercept_only(5, 0.5).unwrap();
        assert!(gcs_residuals(&f, &spec, &[1.0; 5]).is_err());
    }
}
