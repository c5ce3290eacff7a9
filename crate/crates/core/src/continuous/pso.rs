use crate::error::Result;
use crate::params::PsoParams;
use crate::problem::Problem;
use crate::rng::RandomStream;

use super::{argmin, random_position};

#[derive(Clone, Debug, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub value: f64,
    pub best_position: Vec<f64>,
    pub best_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub global_best: Vec<f64>,
    pub global_best_value: f64,
}

impl Swarm {
    /// Positions uniform in the box, velocities zero.
    pub fn init(problem: &Problem, population: usize, stream: &mut RandomStream) -> Result<Self> {
        let (bounds, f) = problem.continuous_parts()?;
        let particles = (0..population)
            .map(|_| {
                let position = random_position(bounds, stream);
                let value = f.eval(&position);
                Particle {
                    velocity: vec![0.0; position.len()],
                    best_position: position.clone(),
                    best_value: value,
                    position,
                    value,
                }
            })
            .collect();
        Ok(Self::from_particles(particles))
    }

    /// Builds a swarm and derives the global best from the personal bests.
    pub fn from_particles(particles: Vec<Particle>) -> Self {
        let (best, value) = argmin(particles.iter().map(|p| p.best_value)).expect("empty swarm");
        Self {
            global_best: particles[best].best_position.clone(),
            global_best_value: value,
            particles,
        }
    }

    pub fn values(&self) -> impl ExactSizeIterator<Item = f64> + Clone + '_ {
        self.particles.iter().map(|p| p.value)
    }
}

/// One synchronous PSO iteration.
///
/// For each particle and dimension, draws `r1` then `r2` and applies
/// `v = w·v + c1·r1·(pbest − x) + c2·r2·(gbest − x)`, clamps `v` to
/// `±vfrac·(upper − lower)`, moves, and projects into bounds, zeroing the
/// velocity component on any dimension that hit a bound. Personal bests
/// update on strict improvement; the global best is refreshed after the
/// whole swarm has moved.
#[allow(clippy::needless_range_loop)]
pub fn pso_step(swarm: &mut Swarm, problem: &Problem, params: &PsoParams, stream: &mut RandomStream) -> Result<()> {
    let (bounds, f) = problem.continuous_parts()?;
    let gbest = &swarm.global_best;
    for p in &mut swarm.particles {
        for d in 0..bounds.dimension() {
            let r1 = stream.uniform();
            let r2 = stream.uniform();
            let x = p.position[d];
            let vmax = params.vfrac * bounds.width(d);
            let v =
                params.w * p.velocity[d] + params.c1 * r1 * (p.best_position[d] - x) + params.c2 * r2 * (gbest[d] - x);
            let v = v.clamp(-vmax, vmax);
            let moved = x + v;
            let clamped = bounds.clamp(d, moved);
            p.position[d] = clamped;
            p.velocity[d] = if clamped == moved { v } else { 0.0 };
        }
        p.value = f.eval(&p.position);
        if p.value < p.best_value {
            p.best_value = p.value;
            p.best_position.clone_from(&p.position);
        }
    }
    let (best, value) = argmin(swarm.particles.iter().map(|p| p.best_value)).expect("empty swarm");
    if value < swarm.global_best_value {
        swarm.global_best_value = value;
        swarm.global_best = swarm.particles[best].best_position.clone();
    }
    Ok(())
}
