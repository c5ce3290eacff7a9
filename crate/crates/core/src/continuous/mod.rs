//! Steppers for continuous box-constrained minimization: PSO, ABC and FA.
//!
//! Random draws are taken particle-major, dimension-minor, in the order
//! documented on each step function.

mod abc;
mod fa;
mod pso;

pub use abc::{abc_fitness, abc_onlooker_probs, abc_step, FoodSource, Hive};
pub use fa::{fa_attractiveness, fa_step, Fireflies};
pub use pso::{pso_step, Particle, Swarm};

use crate::problem::Bounds;
use crate::rng::RandomStream;

/// A point drawn uniformly from the box, one draw per dimension.
pub(crate) fn random_position(bounds: &Bounds, stream: &mut RandomStream) -> Vec<f64> {
    (0..bounds.dimension())
        .map(|d| stream.uniform_in(bounds.lower[d], bounds.upper[d]))
        .collect()
}

/// Index of the smallest value; the lowest index wins ties.
pub(crate) fn argmin(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    values.into_iter().enumerate().fold(None, |best, (i, v)| match best {
        Some((_, b)) if v >= b => best,
        _ => Some((i, v)),
    })
}

pub(crate) fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    values.sum::<f64>() / n as f64
}
