use crate::error::{Error, Result};
use crate::params::AcoParams;
use crate::problem::{check_permutation, EdgeMatrix, Problem};
use crate::rng::RandomStream;
use crate::sampling::roulette_select;

use super::tour::{closed_length, edges, ConstructedTours};

/// Distances below this are treated as this value when computing `η = 1/d`.
pub const ZERO_DISTANCE_FLOOR: f64 = 1e-9;

pub type PheromoneMatrix = EdgeMatrix;

/// Ant System state: the pheromone matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AntColony {
    pub pheromone: PheromoneMatrix,
}

impl AntColony {
    pub fn new(n: usize, params: &AcoParams) -> Self {
        Self {
            pheromone: EdgeMatrix::filled(n, params.tau0),
        }
    }

    /// One iteration: every ant starts at a uniformly drawn node and builds a
    /// tour, then all ants deposit.
    pub fn step(
        &mut self,
        problem: &Problem,
        params: &AcoParams,
        stream: &mut RandomStream,
    ) -> Result<ConstructedTours> {
        let dist = problem.distances()?;
        let ants = params
            .ants
            .ok_or_else(|| Error::config("ants", "unresolved; run resolve() first"))?;
        let mut tours = Vec::with_capacity(ants);
        for _ in 0..ants {
            let start = stream.below(dist.order());
            tours.push(aco_construct_tour(start, &self.pheromone, dist, params, stream)?);
        }
        let lengths: Vec<f64> = tours.iter().map(|t| closed_length(dist, t)).collect();
        aco_pheromone_update(&mut self.pheromone, &tours, &lengths, params)?;
        Ok(ConstructedTours { tours, lengths })
    }
}

/// Probabilities of moving from `from` to each unvisited node, in ascending
/// node order: `p_j ∝ τ_ij^α · η_ij^β` with `η_ij = 1 / max(d_ij, 1e-9)`.
///
/// Weights are normalized in log space so extreme exponents neither
/// overflow nor underflow the sum.
pub fn aco_transition_probs(
    from: usize,
    visited: &[bool],
    pheromone: &PheromoneMatrix,
    dist: &EdgeMatrix,
    params: &AcoParams,
) -> Result<Vec<(usize, f64)>> {
    let mut weights: Vec<(usize, f64)> = visited
        .iter()
        .enumerate()
        .filter(|(_, seen)| !**seen)
        .map(|(j, _)| {
            let eta = 1.0 / dist.get(from, j).max(ZERO_DISTANCE_FLOOR);
            (j, params.alpha * pheromone.get(from, j).ln() + params.beta * eta.ln())
        })
        .collect();
    if weights.is_empty() {
        return Err(Error::InvalidState(format!("no unvisited node left from {from}")));
    }
    let top = weights.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::Numeric(format!("non-finite transition weight from {from}")));
    }
    weights.iter_mut().for_each(|w| w.1 = (w.1 - top).exp());
    let total: f64 = weights.iter().map(|w| w.1).sum();
    weights.iter_mut().for_each(|w| w.1 /= total);
    Ok(weights)
}

/// Builds a tour from `start` by repeated roulette draws over
/// [`aco_transition_probs`], one uniform draw per step.
pub fn aco_construct_tour(
    start: usize,
    pheromone: &PheromoneMatrix,
    dist: &EdgeMatrix,
    params: &AcoParams,
    stream: &mut RandomStream,
) -> Result<Vec<usize>> {
    let n = dist.order();
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut current = start;
    visited[start] = true;
    tour.push(start);
    let mut probs = Vec::with_capacity(n);
    for _ in 1..n {
        let options = aco_transition_probs(current, &visited, pheromone, dist, params)?;
        probs.clear();
        probs.extend(options.iter().map(|o| o.1));
        current = options[roulette_select(&probs, stream.uniform())].0;
        visited[current] = true;
        tour.push(current);
    }
    Ok(tour)
}

/// Evaporates every edge by `(1 − ρ)`, deposits `Q / L_k` on both
/// orientations of each edge of each tour, then floors at `τ_min`.
pub fn aco_pheromone_update(
    pheromone: &mut PheromoneMatrix,
    tours: &[Vec<usize>],
    lengths: &[f64],
    params: &AcoParams,
) -> Result<()> {
    if tours.len() != lengths.len() {
        return Err(Error::InvalidArgument(format!(
            "{} tours but {} lengths",
            tours.len(),
            lengths.len()
        )));
    }
    for (tour, &length) in tours.iter().zip(lengths) {
        check_permutation(tour, pheromone.order())?;
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Numeric(format!("tour length {length} is not positive")));
        }
    }
    pheromone.map_in_place(|t| (1.0 - params.rho) * t);
    for (tour, &length) in tours.iter().zip(lengths) {
        let deposit = params.q / length;
        for (i, j) in edges(tour) {
            let value = pheromone.get(i, j) + deposit;
            pheromone.set_symmetric(i, j, value);
        }
    }
    let floor = params.tau_min;
    pheromone.map_in_place(|t| t.max(floor));
    Ok(())
}
