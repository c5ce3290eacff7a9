use crate::error::{Error, Result};
use crate::params::FaParams;
use crate::problem::Problem;
use crate::rng::RandomStream;

use super::{argmin, random_position};

#[derive(Clone, Debug, PartialEq)]
pub struct Fireflies {
    pub positions: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl Fireflies {
    pub fn init(problem: &Problem, population: usize, stream: &mut RandomStream) -> Result<Self> {
        let (bounds, f) = problem.continuous_parts()?;
        let positions: Vec<Vec<f64>> = (0..population).map(|_| random_position(bounds, stream)).collect();
        let values = positions.iter().map(|x| f.eval(x)).collect();
        Ok(Self { positions, values })
    }
}

/// `β0 · exp(−γ r²)`.
pub fn fa_attractiveness(r: f64, params: &FaParams) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::InvalidArgument(format!("distance {r} is negative")));
    }
    let gamma = match params.gamma {
        Some(g) if g > 0.0 => g,
        Some(g) => return Err(Error::config("gamma", format!("must be > 0, got {g}"))),
        None => return Err(Error::config("gamma", "unresolved; run resolve() first")),
    };
    Ok(params.beta0 * (-gamma * r * r).exp())
}

/// One FA sweep at iteration `iteration`.
///
/// Brightness comparisons use the values from the start of the sweep;
/// positions are updated in place, so later moves see earlier ones. For each
/// `i` and each `j` with `f(x_j) < f(x_i)`, draws one `u` per dimension and
/// sets `x_i += β(r_ij)·(x_j − x_i) + α_t·(u − 0.5)·(upper − lower)`, then
/// clamps. The brightest firefly (lowest index on ties) only takes the
/// random-walk term. `α_t = α0 · decay^iteration`.
pub fn fa_step(
    swarm: &mut Fireflies,
    problem: &Problem,
    params: &FaParams,
    stream: &mut RandomStream,
    iteration: usize,
) -> Result<()> {
    let (bounds, f) = problem.continuous_parts()?;
    let alpha = params.alpha0 * params.alpha_decay.powf(iteration as f64);
    let values = &swarm.values;
    let Some((brightest, _)) = argmin(values.iter().copied()) else {
        return Ok(());
    };

    for i in 0..swarm.positions.len() {
        if i == brightest {
            let x = &mut swarm.positions[i];
            for (d, xd) in x.iter_mut().enumerate() {
                let u = stream.uniform();
                *xd = bounds.clamp(d, *xd + alpha * (u - 0.5) * bounds.width(d));
            }
            continue;
        }
        for j in 0..swarm.positions.len() {
            if values[j] >= values[i] {
                continue;
            }
            let r = swarm.positions[i]
                .iter()
                .zip(&swarm.positions[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let beta = fa_attractiveness(r, params)?;
            for d in 0..bounds.dimension() {
                let u = stream.uniform();
                let xi = swarm.positions[i][d];
                let xj = swarm.positions[j][d];
                swarm.positions[i][d] = xi + beta * (xj - xi) + alpha * (u - 0.5) * bounds.width(d);
            }
            let x = &mut swarm.positions[i];
            for (d, v) in x.iter_mut().enumerate() {
                *v = bounds.clamp(d, *v);
            }
        }
    }

    swarm.values = swarm.positions.iter().map(|x| f.eval(x)).collect();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin_problem;

    fn params(gamma: f64, alpha0: f64) -> FaParams {
        FaParams {
            gamma: Some(gamma),
            alpha0,
            ..FaParams::default()
        }
    }

    #[test]
    fn attractiveness_examples() {
        let p = params(1.0, 0.25);
        assert_eq!(fa_attractiveness(0.0, &p).unwrap(), 1.0);
        let b = FaParams {
            beta0: 2.5,
            ..p.clone()
        };
        assert_eq!(fa_attractiveness(0.0, &b).unwrap(), 2.5);
        // exp(-1) from an independent evaluation
        approx::assert_abs_diff_eq!(
            fa_attractiveness(1.0, &p).unwrap(),
            0.36787944117144233,
            epsilon = 1e-12
        );
        assert!(matches!(fa_attractiveness(-0.1, &p), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            fa_attractiveness(1.0, &params(0.0, 0.25)),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn coincident_fireflies_without_noise_stay_put() {
        let problem = builtin_problem("sphere", Some(2)).unwrap();
        let mut swarm = Fireflies {
            positions: vec![vec![1.5, -0.5]; 4],
            values: vec![2.5; 4],
        };
        let before = swarm.clone();
        fa_step(&mut swarm, &problem, &params(1.0, 0.0), &mut RandomStream::new(1), 1).unwrap();
        assert_eq!(swarm, before);
    }

    #[test]
    fn negligible_attraction_without_noise_leaves_dimmer_unchanged() {
        let problem = builtin_problem("sphere", Some(2)).unwrap();
        let mut swarm = Fireflies {
            positions: vec![vec![0.0, 0.0], vec![4.0, 4.0]],
            values: vec![0.0, 32.0],
        };
        fa_step(&mut swarm, &problem, &params(1e6, 0.0), &mut RandomStream::new(1), 1).unwrap();
        assert_eq!(swarm.positions[1], vec![4.0, 4.0]);
        assert_eq!(swarm.positions[0], vec![0.0, 0.0]);
    }

    #[test]
    fn full_attraction_pulls_onto_brighter() {
        let problem = builtin_problem("sphere", Some(2)).unwrap();
        let mut swarm = Fireflies {
            positions: vec![vec![0.5, 0.5], vec![4.0, 4.0]],
            values: vec![0.5, 32.0],
        };
        let p = FaParams {
            beta0: 1.0,
            ..params(1e-300, 0.0)
        };
        fa_step(&mut swarm, &problem, &p, &mut RandomStream::new(1), 1).unwrap();
        assert_eq!(swarm.positions[1], vec![0.5, 0.5]);
        assert_eq!(swarm.values, vec![0.5, 0.5]);
    }
}
