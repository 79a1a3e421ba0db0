//! The QLBS regression model.
//!
//! `g₁(Q_{τ,i}) = x_iᵀβ` and `g₂(α_i) = w_iᵀρ`, with `T_i ~ QLBS(α_i, Q_{τ,i})`
//! independent. Parameters are stacked as `δ = (β, ρ)`.

mod bootstrap;
mod fit;
mod hessian;
mod init;
mod likelihood;
mod link;
mod optim;
mod simulate;
mod spec;

pub use bootstrap::{bootstrap_ci, bootstrap_ci_with, BootstrapResult};
pub use fit::{conf_intervals, fit, FitOptions, FitResult, HessianSource};
pub use hessian::{hessian_analytic, hessian_discrepancy, hessian_numeric};
pub use init::initial_values;
pub use likelihood::{fitted_parameters, loglik, loglik_and_score, obs_loglik, score, FittedObs};
pub use link::LinkFunction;
pub use simulate::simulate_response;
pub use spec::{ModelSpec, ParamVector};
