use nalgebra::DMatrix;

use super::likelihood::{obs_derivs, per_obs, score};
use super::spec::{ModelSpec, ParamVector};
use crate::error::Result;
use crate::numerics::fd_jacobian;

/// Closed-form Hessian
/// `[[XᵀVX, XᵀHW], [WᵀHX, WᵀUW]]` with `v_i = z'_i a_i² + z_i d_i a_i`,
/// `h_i = k_i b_i a_i`, `u_i = c'_i b_i² + c_i e_i b_i`.
///
/// `z'_i` and `k_i` are closed form; `c'_i` is a central difference of `c_i`
/// in α (it involves the derivative of `m_i`).
pub fn hessian_analytic(delta: &ParamVector, spec: &ModelSpec, t: &[f64]) -> Result<DMatrix<f64>> {
    let obs = per_obs(delta, spec, t)?;
    let (p, q) = (spec.p(), spec.q());
    let mut hess = DMatrix::zeros(p + q, p + q);
    for (i, o) in obs.iter().enumerate() {
        let (qi, al) = (o.q, o.alpha);
        let a2 = al * al;
        let half = 0.5 * o.r;
        let cosh_half_sq = half.cosh().powi(2);
        let z_prime = (-(o.r.exp()) / a2 + 1.0 / (4.0 * cosh_half_sq) + 0.5 * half.tanh() + 1.0)
            / (qi * qi);
        let k = (o.m * o.r.cosh() / a2 - 2.0 * o.r.sinh() / (a2 * al) - o.m / (4.0 * cosh_half_sq))
            / qi;
        let h = 1e-5 * al.max(1.0);
        let c_up = obs_derivs(t[i], qi, al + h, spec.tau)?.c;
        let c_dn = obs_derivs(t[i], qi, al - h, spec.tau)?.c;
        let c_prime = (c_up - c_dn) / (2.0 * h);

        let lq = spec.link_q;
        let la = spec.link_alpha;
        let a_i = lq.dmu_deta(qi);
        let b_i = la.dmu_deta(al);
        let d_i = -lq.deriv2(qi) / lq.deriv(qi).powi(2);
        let e_i = -la.deriv2(al) / la.deriv(al).powi(2);
        let v = z_prime * a_i * a_i + o.z * d_i * a_i;
        let hv = k * b_i * a_i;
        let u = c_prime * b_i * b_i + o.c * e_i * b_i;

        for j in 0..p {
            let xj = spec.x[(i, j)];
            for l in 0..p {
                hess[(j, l)] += xj * v * spec.x[(i, l)];
            }
            for l in 0..q {
                let val = xj * hv * spec.w[(i, l)];
                hess[(j, p + l)] += val;
                hess[(p + l, j)] += val;
            }
        }
        for j in 0..q {
            for l in 0..q {
                hess[(p + j, p + l)] += spec.w[(i, j)] * u * spec.w[(i, l)];
            }
        }
    }
    Ok(hess)
}

/// Central-difference Jacobian of the analytic score (relative step 1e-5).
pub fn hessian_numeric(delta: &ParamVector, spec: &ModelSpec, t: &[f64]) -> Result<DMatrix<f64>> {
    let p = spec.p();
    fd_jacobian(
        |x| score(&ParamVector::from_slice(x, p), spec, t),
        &delta.to_vec(),
        1e-5,
    )
}

/// Largest entry-wise relative deviation between the analytic and numeric
/// Hessians; entries are scaled by `max(|H_num[j,l]|, 1e-8 · max|H_num|)`.
pub fn hessian_discrepancy(delta: &ParamVector, spec: &ModelSpec, t: &[f64]) -> Result<f64> {
    let ha = hessian_analytic(delta, spec, t)?;
    let hn = hessian_numeric(delta, spec, t)?;
    let scale = hn.amax();
    Ok(ha
        .iter()
        .zip(hn.iter())
        .map(|(a, n)| (a - n).abs() / n.abs().max(1e-8 * scale))
        .fold(0.0, f64::max))
}
