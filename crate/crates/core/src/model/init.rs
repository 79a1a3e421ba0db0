use nalgebra::{DMatrix, DVector};

use super::likelihood::check_response;
use super::spec::{ModelSpec, ParamVector};
use crate::error::{Error, Result};

/// Smallest shape value passed to `g₂` when building the starting point.
pub const ALPHA_FLOOR: f64 = 1e-4;

/// Least-squares starting point.
///
/// `β₀` regresses `g₁(t)` on `X`. With `θ̂_{i,0} = g₁⁻¹(x_iᵀβ₀)` the shape
/// guesses are `α̂_{i,0} = √(t_i/θ̂ + θ̂/t_i − 2)` (floored at 1e-4), and `ρ₀`
/// regresses `g₂(α̂₀)` on `W`.
pub fn initial_values(spec: &ModelSpec, t: &[f64]) -> Result<ParamVector> {
    check_response(spec, t)?;
    let y = DVector::from_iterator(t.len(), t.iter().map(|&v| spec.link_q.forward(v)));
    let beta = ols(&spec.x, &y, "X")?;
    let eta = &spec.x * &beta;
    let mut alpha0 = Vec::with_capacity(t.len());
    for (i, &ti) in t.iter().enumerate() {
        let theta = spec.link_q.inverse(eta[i]).ok_or_else(|| {
            Error::Inadmissible(format!(
                "initial quantile predictor {} outside the {} link range",
                eta[i], spec.link_q
            ))
        })?;
        let a = (ti / theta + theta / ti - 2.0).max(0.0).sqrt();
        alpha0.push(spec.link_alpha.forward(a.max(ALPHA_FLOOR)));
    }
    let rho = ols(&spec.w, &DVector::from_vec(alpha0), "W")?;
    Ok(ParamVector::new(beta.iter().copied().collect(), rho.iter().copied().collect()))
}

fn ols(a: &DMatrix<f64>, y: &DVector<f64>, name: &'static str) -> Result<DVector<f64>> {
    let cols = a.ncols();
    let qr = a.clone().qr();
    let r = qr.r();
    let diag_max = r.diagonal().amax();
    let rank = r.diagonal().iter().filter(|d| d.abs() > 1e-10 * diag_max).count();
    if rank < cols {
        return Err(Error::RankDeficient { matrix: name, rank, cols });
    }
    let qty = qr.q().transpose() * y;
    r.solve_upper_triangular(&qty)
        .ok_or(Error::RankDeficient { matrix: name, rank, cols })
}
