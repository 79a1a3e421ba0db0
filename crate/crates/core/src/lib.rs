//! Quantile-parameterized length-biased Birnbaum–Saunders (QLBS) regression.
//!
//! The crate is organized bottom-up:
//!
//! - [`numerics`]: standard-normal functions, root finding, quadrature,
//!   finite differences and seedable random streams.
//! - [`lbs`]: the length-biased Birnbaum–Saunders law in its scale and
//!   quantile parameterizations, the gamma-mixture law of
//!   `U = (T/θ + θ/T − 2)/α²`, and sampling.
//! - [`model`]: the regression model with log/sqrt/identity links, its
//!   log-likelihood, analytic score, Hessians, maximum-likelihood fitting and
//!   confidence intervals.
//! - [`diagnostics`]: generalized Cox–Snell and randomized quantile residuals,
//!   residual moments, simulated envelopes and descriptive statistics.
//! - [`harness`]: the Monte Carlo study (bias, MSE, coverage, residual moments).
//! - [`cli`]: CSV ingestion, report writers and the `qlbs` subcommands.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod lbs;
pub mod model;
pub mod numerics;

pub use error::{Error, Result};
pub use lbs::{LbsParams, MixtureU, QlbsParams};
pub use model::{FitOptions, FitResult, LinkFunction, ModelSpec, ParamVector};
pub use numerics::{Interval, RngStream};
