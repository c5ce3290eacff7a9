use crate::error::{Error, Result};
use crate::params::IwdParams;
use crate::problem::{check_permutation, EdgeMatrix, Problem};
use crate::rng::RandomStream;
use crate::sampling::roulette_select;

use super::tour::{closed_length, edges, ConstructedTours};

pub type SoilMatrix = EdgeMatrix;

/// A water drop travelling one tour.
#[derive(Clone, Debug, PartialEq)]
pub struct WaterDrop {
    pub tour: Vec<usize>,
    pub velocity: f64,
    /// Soil carried; grows with every move.
    pub soil: f64,
}

impl WaterDrop {
    pub fn new(start: usize, params: &IwdParams) -> Self {
        Self {
            tour: vec![start],
            velocity: params.initial_velocity,
            soil: 0.0,
        }
    }
}

/// IWD state: the edge soil matrix. Drops are created afresh each iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct IwdColony {
    pub soil: SoilMatrix,
}

impl IwdColony {
    pub fn new(n: usize, params: &IwdParams) -> Self {
        Self {
            soil: EdgeMatrix::filled(n, params.initial_soil),
        }
    }

    /// One iteration.
    ///
    /// Draws a random node permutation; drop `k` starts at its `k mod n`-th
    /// entry, so drops start at distinct nodes while `m ≤ n`. Drops advance
    /// in lockstep, one node per round in drop order, each move updating the
    /// shared soil; the closing moves come last. The iteration-best tour
    /// then gets the global soil update.
    pub fn step(
        &mut self,
        problem: &Problem,
        params: &IwdParams,
        stream: &mut RandomStream,
    ) -> Result<ConstructedTours> {
        let dist = problem.distances()?;
        let n = dist.order();
        let count = params
            .drops
            .ok_or_else(|| Error::config("drops", "unresolved; run resolve() first"))?;
        let starts = stream.permutation(n);

        let mut drops: Vec<WaterDrop> = (0..count).map(|k| WaterDrop::new(starts[k % n], params)).collect();
        let mut visited = vec![vec![false; n]; count];
        for (seen, drop) in visited.iter_mut().zip(&drops) {
            seen[drop.tour[0]] = true;
        }
        let mut probs = Vec::with_capacity(n);
        for _ in 1..n {
            for (drop, seen) in drops.iter_mut().zip(visited.iter_mut()) {
                let current = *drop.tour.last().expect("tour has a start");
                let options = iwd_edge_probs(current, seen, &self.soil, params)?;
                probs.clear();
                probs.extend(options.iter().map(|o| o.1));
                let next = options[roulette_select(&probs, stream.uniform())].0;
                iwd_move(drop, (current, next), &mut self.soil, dist, params);
                drop.tour.push(next);
                seen[next] = true;
            }
        }
        for drop in &mut drops {
            let (last, start) = (drop.tour[n - 1], drop.tour[0]);
            iwd_move(drop, (last, start), &mut self.soil, dist, params);
        }

        let lengths: Vec<f64> = drops.iter().map(|d| closed_length(dist, &d.tour)).collect();
        if let Some((best, _)) = crate::continuous::argmin(lengths.iter().copied()) {
            iwd_global_update(&mut self.soil, &drops[best].tour, drops[best].soil, params)?;
        }
        Ok(ConstructedTours {
            tours: drops.into_iter().map(|d| d.tour).collect(),
            lengths,
        })
    }
}

/// Edge-selection probabilities over unvisited nodes, in ascending node order.
///
/// `g(s_ij)` is `s_ij` when the smallest candidate soil is non-negative and
/// `s_ij − min` otherwise; `p_j ∝ 1 / (ε_s + g(s_ij))`.
pub fn iwd_edge_probs(
    from: usize,
    visited: &[bool],
    soil: &SoilMatrix,
    params: &IwdParams,
) -> Result<Vec<(usize, f64)>> {
    let candidates: Vec<usize> = (0..visited.len()).filter(|&j| !visited[j]).collect();
    if candidates.is_empty() {
        return Err(Error::InvalidState(format!("no unvisited node left from {from}")));
    }
    let min = candidates
        .iter()
        .map(|&j| soil.get(from, j))
        .fold(f64::INFINITY, f64::min);
    let shift = if min >= 0.0 { 0.0 } else { min };
    let mut weights: Vec<(usize, f64)> = candidates
        .into_iter()
        .map(|j| (j, 1.0 / (params.epsilon_s + soil.get(from, j) - shift)))
        .collect();
    let total: f64 = weights.iter().map(|w| w.1).sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Numeric(format!("soil weights from {from} sum to {total}")));
    }
    weights.iter_mut().for_each(|w| w.1 /= total);
    Ok(weights)
}

/// Velocity increase on an edge carrying `soil`: `a_v / (b_v + c_v·soil²)`.
pub fn iwd_velocity_gain(soil: f64, params: &IwdParams) -> f64 {
    params.a_v / (params.b_v + params.c_v * soil * soil)
}

/// `distance / max(velocity, ε_s)`.
pub fn iwd_travel_time(distance: f64, velocity: f64, params: &IwdParams) -> f64 {
    distance / velocity.max(params.epsilon_s)
}

/// Soil picked up over a move taking `time`: `a_s / (b_s + c_s·time²)`.
pub fn iwd_soil_delta(time: f64, params: &IwdParams) -> f64 {
    params.a_s / (params.b_s + params.c_s * time * time)
}

/// Edge soil after a drop removes `delta`: `(1 − ρ_n)·soil − ρ_n·delta`.
pub fn iwd_local_soil(soil: f64, delta: f64, params: &IwdParams) -> f64 {
    (1.0 - params.rho_n) * soil - params.rho_n * delta
}

/// Moves `drop` along `edge`, updating its velocity and carried soil and the
/// edge's soil in both orientations. Does not extend `drop.tour`.
pub fn iwd_move(
    drop: &mut WaterDrop,
    edge: (usize, usize),
    soil: &mut SoilMatrix,
    dist: &EdgeMatrix,
    params: &IwdParams,
) {
    let (i, j) = edge;
    let edge_soil = soil.get(i, j);
    drop.velocity += iwd_velocity_gain(edge_soil, params);
    let time = iwd_travel_time(dist.get(i, j), drop.velocity, params);
    let delta = iwd_soil_delta(time, params);
    soil.set_symmetric(i, j, iwd_local_soil(edge_soil, delta, params));
    drop.soil += delta;
}

/// Reinforces the iteration-best tour:
/// `soil ← (1 + ρ_IWD)·soil − ρ_IWD·soil_IB / (n − 1)` on each of its edges.
pub fn iwd_global_update(soil: &mut SoilMatrix, best_tour: &[usize], best_soil: f64, params: &IwdParams) -> Result<()> {
    let n = soil.order();
    if n < 2 {
        return Err(Error::InvalidState(format!("global soil update needs n ≥ 2, got {n}")));
    }
    check_permutation(best_tour, n)?;
    let share = params.rho_iwd * best_soil / (n - 1) as f64;
    for (i, j) in edges(best_tour) {
        let value = (1.0 + params.rho_iwd) * soil.get(i, j) - share;
        soil.set_symmetric(i, j, value);
    }
    Ok(())
}
