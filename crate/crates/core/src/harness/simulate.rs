use nalgebra::DMatrix;

use super::config::CovariateLaw;
use crate::error::Result;
use crate::model::{simulate_response, LinkFunction, ModelSpec, ParamVector};
use crate::numerics::RngStream;

/// Draw a design and a response under log links for both sub-models.
///
/// The first column of X and W is the intercept; the remaining columns are
/// drawn independently from `law`, X before W, row by row.
pub fn simulate_dataset(
    n: usize,
    tau: f64,
    delta_star: &ParamVector,
    law: CovariateLaw,
    rng: &mut RngStream,
) -> Result<(ModelSpec, Vec<f64>)> {
    let (p, q) = (delta_star.beta.len(), delta_star.rho.len());
    let draw = |cols: usize, rng: &mut RngStream| {
        let mut m = DMatrix::from_element(n, cols, 1.0);
        for i in 0..n {
            for j in 1..cols {
                m[(i, j)] = match law {
                    CovariateLaw::UniformM1To1 => rng.uniform_in(-1.0, 1.0),
                };
            }
        }
        m
    };
    let x = draw(p, rng);
    let w = draw(q, rng);
    let spec = ModelSpec::new(x, w, LinkFunction::Log, LinkFunction::Log, tau)?;
    let t = simulate_response(delta_star, &spec, rng)?;
    Ok((spec, t))
}
