use serde::{Deserialize, Serialize};

use super::spec::{ModelSpec, ParamVector};
use crate::error::{domain, Error, Result};
use crate::lbs::{kappa_with_logderiv, QlbsParams};
use crate::numerics::LN_SQRT_2PI;

/// Per-observation `Q̂_{τ,i}` and `α̂_i` implied by a parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedObs {
    pub q: Vec<f64>,
    pub alpha: Vec<f64>,
}

pub fn fitted_parameters(delta: &ParamVector, spec: &ModelSpec) -> Result<FittedObs> {
    delta.check_dims(spec)?;
    let (eta1, eta2) = delta.predictors(spec);
    let n = spec.n();
    let mut q = Vec::with_capacity(n);
    let mut alpha = Vec::with_capacity(n);
    for i in 0..n {
        let qi = spec.link_q.inverse(eta1[i]).ok_or_else(|| {
            Error::Inadmissible(format!("quantile predictor {} outside the {} link range", eta1[i], spec.link_q))
        })?;
        let ai = spec.link_alpha.inverse(eta2[i]).ok_or_else(|| {
            Error::Inadmissible(format!("shape predictor {} outside the {} link range", eta2[i], spec.link_alpha))
        })?;
        q.push(qi);
        alpha.push(ai);
    }
    Ok(FittedObs { q, alpha })
}

/// Everything the score and Hessian need about one observation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ObsDerivs {
    pub q: f64,
    pub alpha: f64,
    pub ll: f64,
    /// ∂ℓ_i/∂Q
    pub z: f64,
    /// ∂ℓ_i/∂α
    pub c: f64,
    /// `log(t κ / 4Q)`, so that `A = e^{r/2}` and `B = e^{−r/2}`
    pub r: f64,
    /// `κ'_τ(α)/κ_τ(α)`
    pub m: f64,
}

/// Log-density and its partial derivatives in `(Q, α)` for one observation.
///
/// With `r = log(tκ/4Q)` the factors of the density are `A − B = 2 sinh(r/2)`,
/// `A + B = 2 cosh(r/2)` and `A² − B² = 2 sinh r`. The scale Jacobian
/// `1/θ = κ/(4Q)` contributes `−1/Q` to `z` and `m` to `c`.
#[inline]
pub(crate) fn obs_derivs(t: f64, q: f64, alpha: f64, tau: f64) -> Result<ObsDerivs> {
    let k = kappa_with_logderiv(tau, alpha)?;
    Ok(obs_derivs_with(t, q, alpha, k.kappa, k.log_deriv))
}

#[inline]
pub(crate) fn obs_derivs_with(t: f64, q: f64, alpha: f64, kappa: f64, m: f64) -> ObsDerivs {
    let ln_scale = kappa.ln() - (4.0 * q).ln();
    let r = t.ln() + ln_scale;
    let half = 0.5 * r;
    let sh = half.sinh();
    let th = half.tanh();
    let a = 2.0 * sh / alpha;
    let a2 = alpha * alpha;
    let poly = alpha * a2 + 2.0 * alpha;
    let ll = -LN_SQRT_2PI - poly.ln() + ln_scale - 0.5 * a * a + crate::lbs::ln_2cosh(half);
    let sinh_r = r.sinh();
    let z = sinh_r / (a2 * q) - th / (2.0 * q) - 1.0 / q;
    let c = -(3.0 * a2 + 2.0) / poly + 4.0 * sh * sh / (a2 * alpha) - m * sinh_r / a2
        + 0.5 * m * th
        + m;
    ObsDerivs {
        q,
        alpha,
        ll,
        z,
        c,
        r,
        m,
    }
}

/// Log-density of one observation under `QLBS(α, Q_τ)`.
pub fn obs_loglik(t: f64, params: &QlbsParams) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain("t", t));
    }
    Ok(obs_derivs(t, params.q_tau, params.alpha, params.tau)?.ll)
}

pub(crate) fn check_response(spec: &ModelSpec, t: &[f64]) -> Result<()> {
    if t.len() != spec.n() {
        return Err(Error::InvalidSpec(format!(
            "response has {} values, design has {} rows",
            t.len(),
            spec.n()
        )));
    }
    if let Some(bad) = t.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(domain("response", *bad));
    }
    Ok(())
}

pub(crate) fn per_obs(delta: &ParamVector, spec: &ModelSpec, t: &[f64]) -> Result<Vec<ObsDerivs>> {
    check_response(spec, t)?;
    let fitted = fitted_parameters(delta, spec)?;
    t.iter()
        .zip(fitted.q.iter().zip(&fitted.alpha))
        .map(|(&ti, (&qi, &ai))| obs_derivs(ti, qi, ai, spec.tau))
        .collect()
}

/// Log-likelihood
/// `Σ [−½ log 2π − log(α_i³ + 2α_i) − log θ_i − ½ a²_{t_i,τ} + log(A_i + B_i)]`
/// with `θ_i = 4Q_{τ,i}/κ_τ(α_i)`.
///
/// Inadmissible parameter vectors (a predictor outside its link range) are
/// reported as [`Error::Inadmissible`].
pub fn loglik(delta: &ParamVector, spec: &ModelSpec, t: &[f64]) -> Result<f64> {
    let obs = per_obs(delta, spec, t)?;
    let ll: f64 = obs.iter().map(|o| o.ll).sum();
    if !ll.is_finite() {
        return Err(Error::NonFinite("log-likelihood"));
    }
    Ok(ll)
}

fn assemble_score(obs: &[ObsDerivs], spec: &ModelSpec) -> Vec<f64> {
    let (p, q) = (spec.p(), spec.q());
    let mut g = vec![0.0; p + q];
    for (i, o) in obs.iter().enumerate() {
        let za = o.z * spec.link_q.dmu_deta(o.q);
        let cb = o.c * spec.link_alpha.dmu_deta(o.alpha);
        for j in 0..p {
            g[j] += spec.x[(i, j)] * za;
        }
        for j in 0..q {
            g[p + j] += spec.w[(i, j)] * cb;
        }
    }
    g
}

/// Analytic score `(Xᵀ A z, Wᵀ B c)` with `A = diag(1/g₁'(Q_i))` and
/// `B = diag(1/g₂'(α_i))`.
pub fn score(delta: &ParamVector, spec: &ModelSpec, t: &[f64]) -> Result<Vec<f64>> {
    let obs = per_obs(delta, spec, t)?;
    let g = assemble_score(&obs, spec);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("score"));
    }
    Ok(g)
}

pub fn loglik_and_score(delta: &ParamVector, spec: &ModelSpec, t: &[f64]) -> Result<(f64, Vec<f64>)> {
    let obs = per_obs(delta, spec, t)?;
    let ll: f64 = obs.iter().map(|o| o.ll).sum();
    let g = assemble_score(&obs, spec);
    if !ll.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("log-likelihood"));
    }
    Ok((ll, g))
}
