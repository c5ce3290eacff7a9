use crate::error::Result;
use crate::problem::{check_permutation, EdgeMatrix};
use crate::rng::RandomStream;

/// Closed tour length `Σ dist[t_k][t_(k+1) mod n]`.
pub fn tour_length(dist: &EdgeMatrix, tour: &[usize]) -> Result<f64> {
    check_permutation(tour, dist.order())?;
    Ok(closed_length(dist, tour))
}

pub(crate) fn closed_length(dist: &EdgeMatrix, tour: &[usize]) -> f64 {
    let n = tour.len();
    (0..n).map(|k| dist.get(tour[k], tour[(k + 1) % n])).sum()
}

/// Consecutive node pairs of a closed tour, including the closing edge.
pub(crate) fn edges(tour: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = tour.len();
    (0..n).map(move |k| (tour[k], tour[(k + 1) % n]))
}

/// Tours built during one iteration with their lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructedTours {
    pub tours: Vec<Vec<usize>>,
    pub lengths: Vec<f64>,
}

impl ConstructedTours {
    /// `count` uniformly random tours; seeds iteration 0 of both graph algorithms.
    pub(crate) fn random(dist: &EdgeMatrix, count: usize, stream: &mut RandomStream) -> Self {
        let tours: Vec<Vec<usize>> = (0..count).map(|_| stream.permutation(dist.order())).collect();
        let lengths = tours.iter().map(|t| closed_length(dist, t)).collect();
        Self { tours, lengths }
    }
}
