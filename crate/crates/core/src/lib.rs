//! Swarm-intelligence engine.
//!
//! Five optimizers share one problem model and one run loop:
//! particle swarm (PSO), artificial bee colony (ABC) and firefly (FA) on
//! continuous box-bounded problems, and ant colony (Ant System) and
//! intelligent water drops (IWD) on symmetric TSP instances. Runs are
//! deterministic: a run's random draws all come from one seeded
//! [`RandomStream`], so a seed reproduces a trace exactly.
//!
//! ```
//! use swarmbench_core::{builtin_problem, run, AlgorithmId, AlgorithmParams, NoObserver, RunConfig};
//!
//! let problem = builtin_problem("sphere", Some(2)).unwrap();
//! let params = AlgorithmParams::defaults(AlgorithmId::Pso);
//! let trace = run(&params, &problem, &RunConfig::new(7, 50, 20), &mut NoObserver).unwrap();
//! assert_eq!(trace.records.len(), 51);
//! ```

pub mod benchmark;
pub mod continuous;
mod error;
pub mod graph;
pub mod io;
pub mod params;
pub mod problem;
pub mod rng;
pub mod run;
pub mod sampling;
pub mod trace_io;

pub use benchmark::BenchmarkFunction;
pub use error::{Error, Result};
pub use io::{
    builtin_problem, catalog, parse_problem_xml, serialize_problem_xml, validate_problem, Diagnostic, DiagnosticCode,
    ProblemFileError,
};
pub use params::{AlgorithmId, AlgorithmParams, ParamSpec, ParamType};
pub use problem::{clamp_to_bounds, Bounds, Candidate, City, EdgeMatrix, Problem, SearchSpace, SpaceKind};
pub use rng::RandomStream;
pub use run::{
    best_so_far, run, IterationRecord, NoObserver, Observer, RunConfig, RunTrace, Solution, StopReason, TraceHeader,
};

/// Version string written into every trace header.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
