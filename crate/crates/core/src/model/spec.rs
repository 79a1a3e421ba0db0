use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::link::LinkFunction;
use crate::error::{Error, Result};

/// Design of a QLBS regression: quantile sub-model `X` (n×p), shape sub-model
/// `W` (n×q), their links and the quantile level.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub x: DMatrix<f64>,
    pub w: DMatrix<f64>,
    pub link_q: LinkFunction,
    pub link_alpha: LinkFunction,
    pub tau: f64,
}

impl ModelSpec {
    pub fn new(
        x: DMatrix<f64>,
        w: DMatrix<f64>,
        link_q: LinkFunction,
        link_alpha: LinkFunction,
        tau: f64,
    ) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::InvalidSpec(format!("tau must lie in (0, 1), got {tau}")));
        }
        let n = x.nrows();
        if w.nrows() != n {
            return Err(Error::InvalidSpec(format!(
                "X has {n} rows but W has {}",
                w.nrows()
            )));
        }
        if x.ncols() == 0 || w.ncols() == 0 {
            return Err(Error::InvalidSpec("each sub-model needs at least one column".into()));
        }
        if n <= x.ncols() + w.ncols() {
            return Err(Error::InvalidSpec(format!(
                "need n > p + q, got n = {n}, p + q = {}",
                x.ncols() + w.ncols()
            )));
        }
        if x.iter().chain(w.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec("design matrices contain non-finite values".into()));
        }
        check_rank(&x, "X")?;
        check_rank(&w, "W")?;
        Ok(Self {
            x,
            w,
            link_q,
            link_alpha,
            tau,
        })
    }

    /// Log links with intercept-only sub-models.
    pub fn intercept_only(n: usize, tau: f64) -> Result<Self> {
        Self::new(
            DMatrix::from_element(n, 1, 1.0),
            DMatrix::from_element(n, 1, 1.0),
            LinkFunction::Log,
            LinkFunction::Log,
            tau,
        )
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn q(&self) -> usize {
        self.w.ncols()
    }

    pub fn n_params(&self) -> usize {
        self.p() + self.q()
    }

    /// The same design restricted to (and ordered by) `rows`.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let x = self.x.select_rows(rows.iter());
        let w = self.w.select_rows(rows.iter());
        Self::new(x, w, self.link_q, self.link_alpha, self.tau)
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.x.clone(), self.w.clone(), self.link_q, self.link_alpha, tau)
    }
}

/// Rank through singular values, with tolerance `1e-10 × σ_max`.
fn check_rank(m: &DMatrix<f64>, name: &'static str) -> Result<()> {
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > 1e-10 * smax).count();
    if rank < m.ncols() || smax == 0.0 {
        return Err(Error::RankDeficient {
            matrix: name,
            rank,
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// `δ = (β, ρ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub beta: Vec<f64>,
    pub rho: Vec<f64>,
}

impl ParamVector {
    pub fn new(beta: Vec<f64>, rho: Vec<f64>) -> Self {
        Self { beta, rho }
    }

    pub fn from_slice(delta: &[f64], p: usize) -> Self {
        Self {
            beta: delta[..p].to_vec(),
            rho: delta[p..].to_vec(),
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.beta.iter().chain(&self.rho).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.beta.len() + self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn check_dims(&self, spec: &ModelSpec) -> Result<()> {
        if self.beta.len() != spec.p() || self.rho.len() != spec.q() {
            return Err(Error::InvalidSpec(format!(
                "parameter vector has ({}, {}) entries, design expects ({}, {})",
                self.beta.len(),
                self.rho.len(),
                spec.p(),
                spec.q()
            )));
        }
        if self.beta.iter().chain(&self.rho).any(|v| !v.is_finite()) {
            return Err(Error::Inadmissible("non-finite coefficient".into()));
        }
        Ok(())
    }

    pub(crate) fn predictors(&self, spec: &ModelSpec) -> (DVector<f64>, DVector<f64>) {
        let eta1 = &spec.x * DVector::from_column_slice(&self.beta);
        let eta2 = &spec.w * DVector::from_column_slice(&self.rho);
        (eta1, eta2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_designs() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 1.0, 1.0, 2.0, 1.0, 3.0, 1.0, 4.0]);
        let w = DMatrix::from_element(4, 1, 1.0);
        assert!(ModelSpec::new(x.clone(), w.clone(), LinkFunction::Log, LinkFunction::Log, 0.5).is_ok());
        assert!(ModelSpec::new(x.clone(), w.clone(), LinkFunction::Log, LinkFunction::Log, 1.0).is_err());
        let dup = DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        assert!(matches!(
            ModelSpec::new(dup, w.clone(), LinkFunction::Log, LinkFunction::Log, 0.5),
            Err(Error::RankDeficient { matrix: "X", rank: 1, cols: 2 })
        ));
        let w3 = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0]);
        // n = 4 is not > p + q = 4
        assert!(ModelSpec::new(x, w3, LinkFunction::Log, LinkFunction::Log, 0.5).is_err());
    }

    #[test]
    fn param_vector_layout() {
        let d = ParamVector::new(vec![1.0, 2.0], vec![3.0]);
        assert_eq!(d.to_vec(), vec![1.0, 2.0, 3.0]);
        assert_eq!(ParamVector::from_slice(&d.to_vec(), 2), d);
    }
}
