//! The length-biased Birnbaum–Saunders (LBS) law.
//!
//! `T ~ LBS(α, θ)` has density `t f_Y(t) / E(Y)` for `Y ~ BS(α, θ)`. The
//! quantile parameterization `QLBS(α, Q_τ)` replaces θ with
//! `Q_τ = (θ/4) κ_τ(α)`, where `κ_τ(α) = (α√u_τ + √(α²u_τ + 4))²` and `u_τ`
//! is the τ-quantile of `U = (T/θ + θ/T − 2)/α²`, a two-component gamma
//! mixture.

mod dist;
mod kappa;
mod mixture;
mod sample;

pub use dist::{
    a_t, ln_2cosh, lbs_cdf, lbs_log_pdf, lbs_log_sf, lbs_moments, lbs_pdf, lbs_quantile, lbs_sf, qlbs_cdf,
    qlbs_moments, qlbs_pdf, quantile_gap, LbsParams, QlbsParams,
};
pub use kappa::{
    kappa, kappa_from_u, kappa_logderiv, kappa_logderiv_frozen, kappa_with_logderiv, q_from_theta,
    theta_from_q, KappaEval,
};
pub use mixture::{u_mixture_cdf, u_mixture_pdf, u_quantile, MixtureU};
pub use sample::{lbs_sample, lbs_sample_into};
