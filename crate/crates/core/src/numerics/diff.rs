use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Central-difference gradient with per-coordinate step `h * max(1, |x_j|)`.
pub fn fd_gradient<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let mut work = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let step = h * x[j].abs().max(1.0);
        work[j] = x[j] + step;
        let up = f(&work);
        work[j] = x[j] - step;
        let down = f(&work);
        work[j] = x[j];
        if !(up.is_finite() && down.is_finite()) {
            return Err(Error::NonFinite("finite-difference gradient"));
        }
        grad.push((up - down) / (2.0 * step));
    }
    Ok(grad)
}

/// Central-difference Jacobian of a vector-valued map; row `i` holds the
/// derivatives of output `i`.
pub fn fd_jacobian<F>(g: F, x: &[f64], h: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut work = x.to_vec();
    let mut cols = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let step = h * x[j].abs().max(1.0);
        work[j] = x[j] + step;
        let up = g(&work)?;
        work[j] = x[j] - step;
        let down = g(&work)?;
        work[j] = x[j];
        let col: Vec<f64> = up
            .iter()
            .zip(&down)
            .map(|(u, d)| (u - d) / (2.0 * step))
            .collect();
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("finite-difference Jacobian"));
        }
        cols.push(col);
    }
    let m = cols.first().map_or(0, Vec::len);
    Ok(DMatrix::from_fn(m, x.len(), |i, j| cols[j][i]))
}
