use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ParamVector;

/// Law of the non-intercept covariates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovariateLaw {
    /// Independent U(−1, 1) draws, fresh for every replication.
    #[default]
    UniformM1To1,
}

/// Experiment definition, read from TOML:
///
/// ```toml
/// n_grid = [50, 100, 200, 400]
/// tau_grid = [0.25, 0.5, 0.75]
/// reps = 1000
/// seed = 2024
/// level = 0.05
/// covariate_law = "uniform_m1_to1"
///
/// [delta_star]
/// beta = [1.0, -1.0]
/// rho = [-1.3862943611198906, 0.5]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub n_grid: Vec<usize>,
    pub tau_grid: Vec<f64>,
    /// Replications per cell.
    pub reps: usize,
    pub delta_star: ParamVector,
    pub seed: u64,
    #[serde(default)]
    pub covariate_law: CovariateLaw,
    /// Significance level of the Wald intervals whose coverage is tallied.
    #[serde(default = "default_level")]
    pub level: f64,
}

fn default_level() -> f64 {
    0.05
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            n_grid: vec![50, 100, 200, 400],
            tau_grid: vec![0.25, 0.5, 0.75],
            reps: 1000,
            delta_star: ParamVector::new(vec![1.0, -1.0], vec![0.25f64.ln(), 0.5]),
            seed: 2024,
            covariate_law: CovariateLaw::UniformM1To1,
            level: 0.05,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.n_grid.is_empty() || self.tau_grid.is_empty() {
            return bad("n_grid and tau_grid must be non-empty".into());
        }
        if self.delta_star.beta.is_empty() || self.delta_star.rho.is_empty() {
            return bad("delta_star needs at least an intercept in each sub-model".into());
        }
        let k = self.delta_star.len();
        if let Some(n) = self.n_grid.iter().find(|&&n| n <= 4 || n <= k) {
            return bad(format!("sample size {n} too small for {k} parameters"));
        }
        if let Some(t) = self.tau_grid.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
            return bad(format!("tau {t} outside (0, 1)"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("level {} outside (0, 1)", self.level));
        }
        if self.delta_star.to_vec().iter().any(|v| !v.is_finite()) {
            return bad("delta_star must be finite".into());
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::InvalidSpec(format!("study config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidSpec(format!("study config: {e}")))
    }
}
