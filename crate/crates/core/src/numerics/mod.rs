//! Numerical foundation shared by the rest of the crate.

mod diff;
mod normal;
mod order;
mod quadrature;
pub(crate) mod rng;
mod roots;

pub use diff::{fd_gradient, fd_jacobian};
pub use normal::{mills_ratio, norm_cdf, norm_pdf, norm_quantile, norm_sf, LN_SQRT_2PI};
pub use order::{quantile_sorted, sorted};
pub use quadrature::{integrate, integrate_with, QuadratureOptions};
pub use rng::RngStream;
pub use roots::{find_root, find_root_with_derivative, Interval, RootOptions};

/// Default absolute tolerance used by root finding.
pub const ROOT_TOL: f64 = 1e-12;
/// Default absolute tolerance used by adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-10;
