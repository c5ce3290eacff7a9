use crate::benchmark::BenchmarkFunction;
use crate::error::{Error, Result};
use crate::params::AbcParams;
use crate::problem::{Bounds, Problem};
use crate::rng::RandomStream;
use crate::sampling::{normalize, roulette_select};

use super::random_position;

#[derive(Clone, Debug, PartialEq)]
pub struct FoodSource {
    pub position: Vec<f64>,
    pub value: f64,
    /// Consecutive neighborhood moves that failed to improve this source.
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hive {
    pub sources: Vec<FoodSource>,
}

impl Hive {
    /// `food_sources` sources drawn uniformly in the box.
    pub fn init(problem: &Problem, food_sources: usize, stream: &mut RandomStream) -> Result<Self> {
        let (bounds, f) = problem.continuous_parts()?;
        if food_sources < 2 {
            return Err(Error::config("population", "abc needs at least 2 food sources"));
        }
        let sources = (0..food_sources)
            .map(|_| {
                let position = random_position(bounds, stream);
                FoodSource {
                    value: f.eval(&position),
                    position,
                    trials: 0,
                }
            })
            .collect();
        Ok(Self { sources })
    }

    pub fn values(&self) -> impl ExactSizeIterator<Item = f64> + Clone + '_ {
        self.sources.iter().map(|s| s.value)
    }
}

/// Maps an objective value to a strictly positive fitness:
/// `1 / (1 + f)` for `f ≥ 0`, `1 + |f|` otherwise.
pub fn abc_fitness(f: f64) -> Result<f64> {
    if !f.is_finite() {
        return Err(Error::Numeric(format!("fitness of non-finite objective {f}")));
    }
    Ok(if f >= 0.0 { 1.0 / (1.0 + f) } else { 1.0 + f.abs() })
}

/// Fitness-proportional selection probabilities for the onlooker phase.
pub fn abc_onlooker_probs(fitness: &[f64]) -> Result<Vec<f64>> {
    if fitness.is_empty() {
        return Err(Error::InvalidState("no food sources".into()));
    }
    if let Some(bad) = fitness.iter().find(|f| !(f.is_finite() && **f > 0.0)) {
        return Err(Error::InvalidState(format!("fitness {bad} is not positive")));
    }
    let mut probs = fitness.to_vec();
    normalize(&mut probs);
    Ok(probs)
}

/// Neighborhood move on source `i`: draws dimension `j`, partner `k ≠ i`,
/// then `φ ~ U(−1, 1)`, and greedily accepts `x_ij + φ·(x_ij − x_kj)`.
fn explore(sources: &mut [FoodSource], i: usize, bounds: &Bounds, f: BenchmarkFunction, stream: &mut RandomStream) {
    let j = stream.below(bounds.dimension());
    let k = stream.below(sources.len() - 1);
    let k = if k >= i { k + 1 } else { k };
    let phi = stream.uniform_in(-1.0, 1.0);

    let xij = sources[i].position[j];
    let mut candidate = sources[i].position.clone();
    candidate[j] = bounds.clamp(j, xij + phi * (xij - sources[k].position[j]));
    let value = f.eval(&candidate);

    let source = &mut sources[i];
    if value < source.value {
        source.position = candidate;
        source.value = value;
        source.trials = 0;
    } else {
        source.trials += 1;
    }
}

/// One ABC iteration: employed, onlooker, then scout phase.
///
/// The employed phase explores every source once. The onlooker phase makes
/// one roulette draw per source over the fitness probabilities computed at
/// its start, exploring the chosen source. The scout phase reinitializes at
/// most one source: the one whose trial counter exceeds `limit` by the most,
/// lowest index on ties.
pub fn abc_step(hive: &mut Hive, problem: &Problem, params: &AbcParams, stream: &mut RandomStream) -> Result<()> {
    let (bounds, f) = problem.continuous_parts()?;
    let count = hive.sources.len();
    if count < 2 {
        return Err(Error::config("population", "abc needs at least 2 food sources"));
    }
    let limit = params
        .limit
        .ok_or_else(|| Error::config("limit", "unresolved; run resolve() first"))?;

    for i in 0..count {
        explore(&mut hive.sources, i, bounds, f, stream);
    }

    let fitness = hive
        .sources
        .iter()
        .map(|s| abc_fitness(s.value))
        .collect::<Result<Vec<_>>>()?;
    let probs = abc_onlooker_probs(&fitness)?;
    for _ in 0..count {
        let i = roulette_select(&probs, stream.uniform());
        explore(&mut hive.sources, i, bounds, f, stream);
    }

    let scout = hive.sources.iter().enumerate().filter(|(_, s)| s.trials > limit).fold(
        None,
        |best: Option<(usize, usize)>, (i, s)| match best {
            Some((_, t)) if s.trials <= t => best,
            _ => Some((i, s.trials)),
        },
    );
    if let Some((i, _)) = scout {
        let position = random_position(bounds, stream);
        hive.sources[i] = FoodSource {
            value: f.eval(&position),
            position,
            trials: 0,
        };
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin_problem;

    #[test]
    fn fitness_examples() {
        assert_eq!(abc_fitness(0.0).unwrap(), 1.0);
        assert_eq!(abc_fitness(-1.0).unwrap(), 2.0);
        assert_eq!(abc_fitness(3.0).unwrap(), 0.25);
        assert!(matches!(abc_fitness(f64::NAN), Err(Error::Numeric(_))));
        assert!(matches!(abc_fitness(f64::INFINITY), Err(Error::Numeric(_))));
    }

    #[test]
    fn onlooker_prob_examples() {
        assert_eq!(abc_onlooker_probs(&[1.0; 4]).unwrap(), vec![0.25; 4]);
        assert_eq!(abc_onlooker_probs(&[3.0, 1.0]).unwrap(), vec![0.75, 0.25]);
        assert_eq!(abc_onlooker_probs(&[0.2]).unwrap(), vec![1.0]);
        assert!(matches!(abc_onlooker_probs(&[]), Err(Error::InvalidState(_))));
        assert!(matches!(abc_onlooker_probs(&[1.0, 0.0]), Err(Error::InvalidState(_))));
        assert!(matches!(abc_onlooker_probs(&[1.0, -2.0]), Err(Error::InvalidState(_))));
    }

    fn identical_hive(point: Vec<f64>, trials: [usize; 2]) -> Hive {
        let value = BenchmarkFunction::Sphere.eval(&point);
        Hive {
            sources: trials
                .iter()
                .map(|&t| FoodSource {
                    position: point.clone(),
                    value,
                    trials: t,
                })
                .collect(),
        }
    }

    #[test]
    fn identical_sources_make_no_progress() {
        let problem = builtin_problem("sphere", Some(3)).unwrap();
        let mut hive = identical_hive(vec![1.0, -2.0, 0.5], [0, 0]);
        let params = AbcParams { limit: Some(100) };
        abc_step(&mut hive, &problem, &params, &mut RandomStream::new(11)).unwrap();
        for s in &hive.sources {
            assert_eq!(s.position, vec![1.0, -2.0, 0.5]);
        }
        // Two employed moves plus two onlooker moves, all failures.
        assert_eq!(hive.sources.iter().map(|s| s.trials).sum::<usize>(), 4);
    }

    #[test]
    fn exhausted_source_is_scouted() {
        let problem = builtin_problem("sphere", Some(2)).unwrap();
        let limit = 10;
        let mut hive = identical_hive(vec![1.0, 1.0], [limit + 1, 0]);
        let params = AbcParams { limit: Some(limit) };
        abc_step(&mut hive, &problem, &params, &mut RandomStream::new(3)).unwrap();
        assert_eq!(hive.sources[0].trials, 0);
        assert_ne!(hive.sources[0].position, vec![1.0, 1.0]);
        assert_eq!(hive.sources[1].position, vec![1.0, 1.0]);
    }

    #[test]
    fn only_one_scout_per_step_and_ties_go_low() {
        let problem = builtin_problem("sphere", Some(2)).unwrap();
        let mut hive = identical_hive(vec![1.0, 1.0], [50, 50]);
        let params = AbcParams { limit: Some(1) };
        abc_step(&mut hive, &problem, &params, &mut RandomStream::new(3)).unwrap();
        let reset: Vec<bool> = hive.sources.iter().map(|s| s.trials == 0).collect();
        // Both counters rise by the same employed move; onlookers may add more to either.
        assert_eq!(reset.iter().filter(|r| **r).count(), 1);
    }

    #[test]
    fn scout_picks_largest_counter() {
        let problem = builtin_problem("sphere", Some(2)).unwrap();
        let mut hive = identical_hive(vec![1.0, 1.0], [20, 40]);
        let params = AbcParams { limit: Some(5) };
        abc_step(&mut hive, &problem, &params, &mut RandomStream::new(8)).unwrap();
        assert_eq!(hive.sources[1].trials, 0);
        assert!(hive.sources[0].trials > 20);
    }
}
