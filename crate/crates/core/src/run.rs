//! The generic run loop and its trace.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::continuous::{abc_step, fa_step, mean, pso_step, Fireflies, Hive, Swarm};
use crate::error::{Error, Result};
use crate::graph::{AntColony, ConstructedTours, IwdColony};
use crate::io::validate_problem;
use crate::params::{AlgorithmId, AlgorithmParams};
use crate::problem::{Candidate, Problem, SpaceKind};
use crate::rng::RandomStream;
use crate::ENGINE_VERSION;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub iterations: usize,
    pub population: usize,
    /// Stop as soon as best-so-far is `≤ target`.
    pub target: Option<f64>,
    /// Record every `stride`-th iteration; iteration 0 and the last one are always recorded.
    pub stride: usize,
}

impl RunConfig {
    pub fn new(seed: u64, iterations: usize, population: usize) -> Self {
        Self {
            seed,
            iterations,
            population,
            target: None,
            stride: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::config("iterations", "must be ≥ 1"));
        }
        if self.population < 2 {
            return Err(Error::config("population", "must be ≥ 2"));
        }
        if self.stride < 1 || self.stride > self.iterations {
            return Err(Error::config("stride", "must lie in 1..=iterations"));
        }
        if let Some(t) = self.target {
            if !t.is_finite() {
                return Err(Error::config("target", "must be finite"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    #[serde(rename = "iter")]
    pub iteration: usize,
    #[serde(rename = "best")]
    pub best_so_far: f64,
    pub iter_best: f64,
    pub mean: f64,
    pub candidate: Candidate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub value: f64,
    pub candidate: Candidate,
    /// First iteration at which `value` was reached.
    pub iteration: usize,
}

impl Solution {
    /// Minimum over `records`, earliest record on ties.
    pub fn from_records(records: &[IterationRecord]) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::InvalidTrace("trace has no records".into()))?;
        let best = records
            .iter()
            .skip(1)
            .fold(first, |best, r| if r.best_so_far < best.best_so_far { r } else { best });
        Ok(Self {
            value: best.best_so_far,
            candidate: best.candidate.clone(),
            iteration: best.iteration,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    TargetReached,
    Cancelled,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::Completed => "completed",
            StopReason::TargetReached => "target_reached",
            StopReason::Cancelled => "cancelled",
        })
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub problem: String,
    pub kind: SpaceKind,
    #[serde(flatten)]
    pub params: AlgorithmParams,
    pub seed: u64,
    pub iterations: usize,
    pub population: usize,
    pub stride: usize,
    pub target: Option<f64>,
    pub version: String,
}

impl TraceHeader {
    pub fn algorithm(&self) -> AlgorithmId {
        self.params.id()
    }

    pub fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            iterations: self.iterations,
            population: self.population,
            target: self.target,
            stride: self.stride,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub header: TraceHeader,
    pub records: Vec<IterationRecord>,
    pub solution: Solution,
    pub stop: StopReason,
    pub duration: Duration,
}

/// Hooks into a running optimization.
pub trait Observer {
    /// Called after each recorded iteration.
    fn on_record(&mut self, _record: &IterationRecord) {}

    /// Polled after each completed iteration; returning true ends the run
    /// there, and that iteration is recorded.
    fn cancelled(&self) -> bool {
        false
    }
}

/// Observer that does nothing.
pub struct NoObserver;

impl Observer for NoObserver {}

impl<F: FnMut(&IterationRecord)> Observer for F {
    fn on_record(&mut self, record: &IterationRecord) {
        self(record)
    }
}

enum Engine {
    Pso(Swarm),
    Abc(Hive),
    Fa(Fireflies),
    Aco(AntColony, ConstructedTours),
    Iwd(IwdColony, ConstructedTours),
}

/// Population statistics after one iteration.
struct Snapshot {
    best_value: f64,
    best: Candidate,
    mean: f64,
}

fn continuous_snapshot<'a>(
    values: impl ExactSizeIterator<Item = f64> + Clone,
    position: impl Fn(usize) -> &'a [f64],
) -> Snapshot {
    let (i, best_value) = crate::continuous::argmin(values.clone()).expect("empty population");
    Snapshot {
        best_value,
        best: Candidate::Position(position(i).to_vec()),
        mean: mean(values),
    }
}

impl Engine {
    fn init(
        params: &AlgorithmParams,
        problem: &Problem,
        config: &RunConfig,
        stream: &mut RandomStream,
    ) -> Result<Self> {
        Ok(match params {
            AlgorithmParams::Pso(_) => Engine::Pso(Swarm::init(problem, config.population, stream)?),
            AlgorithmParams::Abc(_) => Engine::Abc(Hive::init(problem, config.population / 2, stream)?),
            AlgorithmParams::Fa(_) => Engine::Fa(Fireflies::init(problem, config.population, stream)?),
            AlgorithmParams::Aco(p) => {
                let dist = problem.distances()?;
                let tours = ConstructedTours::random(dist, p.ants.unwrap_or(dist.order()), stream);
                Engine::Aco(AntColony::new(dist.order(), p), tours)
            }
            AlgorithmParams::Iwd(p) => {
                let dist = problem.distances()?;
                let tours = ConstructedTours::random(dist, p.drops.unwrap_or(dist.order()), stream);
                Engine::Iwd(IwdColony::new(dist.order(), p), tours)
            }
        })
    }

    fn step(
        &mut self,
        params: &AlgorithmParams,
        problem: &Problem,
        stream: &mut RandomStream,
        iteration: usize,
    ) -> Result<()> {
        match (self, params) {
            (Engine::Pso(s), AlgorithmParams::Pso(p)) => pso_step(s, problem, p, stream),
            (Engine::Abc(h), AlgorithmParams::Abc(p)) => abc_step(h, problem, p, stream),
            (Engine::Fa(f), AlgorithmParams::Fa(p)) => fa_step(f, problem, p, stream, iteration),
            (Engine::Aco(colony, last), AlgorithmParams::Aco(p)) => {
                *last = colony.step(problem, p, stream)?;
                Ok(())
            }
            (Engine::Iwd(colony, last), AlgorithmParams::Iwd(p)) => {
                *last = colony.step(problem, p, stream)?;
                Ok(())
            }
            _ => unreachable!("engine built from these params"),
        }
    }

    fn snapshot(&self) -> Snapshot {
        match self {
            Engine::Pso(s) => continuous_snapshot(s.values(), |i| &s.particles[i].position),
            Engine::Abc(h) => continuous_snapshot(h.values(), |i| &h.sources[i].position),
            Engine::Fa(f) => continuous_snapshot(f.values.iter().copied(), |i| &f.positions[i]),
            Engine::Aco(_, t) | Engine::Iwd(_, t) => {
                let (i, best_value) = crate::continuous::argmin(t.lengths.iter().copied()).expect("no tours");
                Snapshot {
                    best_value,
                    best: Candidate::Tour(t.tours[i].clone()),
                    mean: mean(t.lengths.iter().copied()),
                }
            }
        }
    }
}

/// Runs `params` on `problem`: initialization (iteration 0), then up to
/// `config.iterations` steps.
///
/// Best-so-far tracks every iteration and changes only on strict
/// improvement. A record is kept for iteration 0, every `stride`-th
/// iteration, the last iteration, and the iteration where the target was
/// reached or the run was cancelled; `observer` sees each record as it is
/// made.
pub fn run(
    params: &AlgorithmParams,
    problem: &Problem,
    config: &RunConfig,
    observer: &mut dyn Observer,
) -> Result<RunTrace> {
    let started = Instant::now();
    config.validate()?;
    let diagnostics = validate_problem(problem);
    if !diagnostics.is_empty() {
        return Err(Error::InvalidProblem(diagnostics));
    }
    params.validate()?;
    let params = params.resolve(problem, config)?;

    let mut stream = RandomStream::new(config.seed);
    let mut engine = Engine::init(&params, problem, config, &mut stream)?;

    let mut records = Vec::new();
    let mut best: Option<Solution> = None;
    let stop;
    let mut iteration = 0;
    loop {
        let snap = engine.snapshot();
        if !snap.best_value.is_finite() || !snap.mean.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite objective at iteration {iteration} (best {}, mean {})",
                snap.best_value, snap.mean
            )));
        }
        if best.as_ref().is_none_or(|b| snap.best_value < b.value) {
            best = Some(Solution {
                value: snap.best_value,
                candidate: snap.best.clone(),
                iteration,
            });
        }
        let incumbent = best.as_ref().expect("set above");

        let hit_target = config.target.is_some_and(|t| incumbent.value <= t);
        let finished = iteration == config.iterations || hit_target;
        let cancelled = !finished && observer.cancelled();
        if iteration % config.stride == 0 || finished || cancelled {
            let record = IterationRecord {
                iteration,
                best_so_far: incumbent.value,
                iter_best: snap.best_value,
                mean: snap.mean,
                candidate: incumbent.candidate.clone(),
            };
            observer.on_record(&record);
            records.push(record);
        }
        if finished || cancelled {
            stop = if hit_target {
                StopReason::TargetReached
            } else if cancelled {
                StopReason::Cancelled
            } else {
                StopReason::Completed
            };
            break;
        }
        iteration += 1;
        engine.step(&params, problem, &mut stream, iteration)?;
    }

    let header = TraceHeader {
        problem: problem.name.clone(),
        kind: problem.kind(),
        params,
        seed: config.seed,
        iterations: config.iterations,
        population: config.population,
        stride: config.stride,
        target: config.target,
        version: ENGINE_VERSION.to_string(),
    };
    Ok(RunTrace {
        header,
        records,
        solution: best.expect("iteration 0 always runs"),
        stop,
        duration: started.elapsed(),
    })
}

/// The best solution recorded in `trace`.
pub fn best_so_far(trace: &RunTrace) -> Result<Solution> {
    Solution::from_records(&trace.records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin_problem;

    fn record(iteration: usize, best: f64) -> IterationRecord {
        IterationRecord {
            iteration,
            best_so_far: best,
            iter_best: best,
            mean: best,
            candidate: Candidate::Position(vec![best]),
        }
    }

    #[test]
    fn solution_from_records() {
        let s = Solution::from_records(&[record(0, 5.0), record(1, 3.0), record(2, 3.0)]).unwrap();
        assert_eq!((s.value, s.iteration), (3.0, 1));
        let s = Solution::from_records(&[record(0, 7.5)]).unwrap();
        assert_eq!((s.value, s.iteration), (7.5, 0));
        assert!(matches!(Solution::from_records(&[]), Err(Error::InvalidTrace(_))));
    }

    #[test]
    fn kind_mismatch_is_a_config_error() {
        let tsp = builtin_problem("tsp-square4", None).unwrap();
        let err = run(
            &AlgorithmParams::defaults(AlgorithmId::Pso),
            &tsp,
            &RunConfig::new(1, 10, 10),
            &mut NoObserver,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config { field, .. } if field == "algorithm"));
    }

    #[test]
    fn config_validation() {
        let bad = [
            RunConfig {
                iterations: 0,
                ..RunConfig::new(1, 1, 4)
            },
            RunConfig::new(1, 10, 1),
            RunConfig {
                stride: 0,
                ..RunConfig::new(1, 10, 4)
            },
            RunConfig {
                stride: 11,
                ..RunConfig::new(1, 10, 4)
            },
            RunConfig {
                target: Some(f64::NAN),
                ..RunConfig::new(1, 10, 4)
            },
        ];
        for config in bad {
            assert!(matches!(config.validate(), Err(Error::Config { .. })), "{config:?}");
        }
    }

    #[test]
    fn single_iteration_records_zero_and_one() {
        let p = builtin_problem("sphere", Some(2)).unwrap();
        let trace = run(
            &AlgorithmParams::defaults(AlgorithmId::Pso),
            &p,
            &RunConfig::new(3, 1, 5),
            &mut NoObserver,
        )
        .unwrap();
        let iters: Vec<usize> = trace.records.iter().map(|r| r.iteration).collect();
        assert_eq!(iters, vec![0, 1]);
    }

    #[test]
    fn stride_keeps_first_and_last() {
        let p = builtin_problem("sphere", Some(2)).unwrap();
        let config = RunConfig {
            stride: 3,
            ..RunConfig::new(3, 10, 5)
        };
        let trace = run(
            &AlgorithmParams::defaults(AlgorithmId::Fa),
            &p,
            &config,
            &mut NoObserver,
        )
        .unwrap();
        let iters: Vec<usize> = trace.records.iter().map(|r| r.iteration).collect();
        assert_eq!(iters, vec![0, 3, 6, 9, 10]);
    }

    #[test]
    fn target_stops_early() {
        let p = builtin_problem("tsp-square4", None).unwrap();
        let config = RunConfig {
            target: Some(4.0),
            ..RunConfig::new(3, 500, 4)
        };
        let trace = run(
            &AlgorithmParams::defaults(AlgorithmId::Aco),
            &p,
            &config,
            &mut NoObserver,
        )
        .unwrap();
        assert_eq!(trace.stop, StopReason::TargetReached);
        let last = trace.records.last().unwrap();
        assert!(last.best_so_far <= 4.0);
        assert!(last.iteration < 500);
        assert_eq!(trace.solution.value, last.best_so_far);
    }

    #[test]
    fn observer_sees_every_record_and_can_cancel() {
        struct StopAfter(usize, Vec<usize>);
        impl Observer for StopAfter {
            fn on_record(&mut self, r: &IterationRecord) {
                self.1.push(r.iteration);
            }
            fn cancelled(&self) -> bool {
                self.1.len() >= self.0
            }
        }
        let p = builtin_problem("rastrigin", Some(3)).unwrap();
        let mut obs = StopAfter(4, vec![]);
        let trace = run(
            &AlgorithmParams::defaults(AlgorithmId::Abc),
            &p,
            &RunConfig::new(9, 100, 10),
            &mut obs,
        )
        .unwrap();
        assert_eq!(trace.stop, StopReason::Cancelled);
        // the iteration that saw the cancellation is recorded too
        assert_eq!(obs.1, vec![0, 1, 2, 3, 4]);
        assert_eq!(trace.records.len(), 5);
    }

    #[test]
    fn header_echoes_resolved_params() {
        let p = builtin_problem("sphere", Some(4)).unwrap();
        let trace = run(
            &AlgorithmParams::defaults(AlgorithmId::Abc),
            &p,
            &RunConfig::new(1, 2, 10),
            &mut NoObserver,
        )
        .unwrap();
        // 5 food sources × 4 dimensions
        assert_eq!(trace.header.params.get("limit"), Some(Some(20.0)));
    }

    #[test]
    fn abc_needs_four_bees() {
        let p = builtin_problem("sphere", Some(2)).unwrap();
        let err = run(
            &AlgorithmParams::defaults(AlgorithmId::Abc),
            &p,
            &RunConfig::new(1, 2, 3),
            &mut NoObserver,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config { field, .. } if field == "population"));
    }
}
