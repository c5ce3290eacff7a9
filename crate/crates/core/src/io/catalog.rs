use std::f64::consts::PI;

use serde::Serialize;

use crate::benchmark::BenchmarkFunction;
use crate::error::{Error, Result};
use crate::problem::{Bounds, City, Problem, SpaceKind, TourSpace};
use crate::rng::RandomStream;

/// Dimension of continuous builtins when none is given.
pub const DEFAULT_DIMENSION: usize = 10;

/// `tsp-randN` draws its N cities from `RandomStream::new(RANDOM_INSTANCE_SEED + N)`,
/// x then y for each city in order, uniform in the unit square.
pub const RANDOM_INSTANCE_SEED: u64 = 20_100;

const TOUR_IDS: [&str; 5] = ["tsp-circle8", "tsp-rand10", "tsp-rand11", "tsp-rand12", "tsp-square4"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub kind: SpaceKind,
    /// Node count for tours; `None` for continuous functions, which take any dimension.
    pub nodes: Option<usize>,
    pub description: String,
}

/// All builtin problems, sorted by id.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut entries: Vec<CatalogEntry> = BenchmarkFunction::ALL
        .iter()
        .map(|f| CatalogEntry {
            id: f.id().to_string(),
            kind: SpaceKind::Continuous,
            nodes: None,
            description: format!(
                "{f} on [-{b}, {b}]^D, minimum 0 at {at}; default D = {DEFAULT_DIMENSION}",
                b = f.standard_bound(),
                at = if *f == BenchmarkFunction::Rosenbrock {
                    "(1, ..., 1)"
                } else {
                    "the origin"
                },
            ),
        })
        .chain(TOUR_IDS.iter().map(|id| {
            let p = builtin_problem(id, None).expect("catalog id");
            CatalogEntry {
                id: id.to_string(),
                kind: SpaceKind::Tour,
                nodes: Some(match &p.space {
                    crate::problem::SearchSpace::Tour(t) => t.node_count(),
                    _ => unreachable!(),
                }),
                description: tour_description(id).to_string(),
            }
        }))
        .collect();
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    entries
}

fn tour_description(id: &str) -> &'static str {
    match id {
        "tsp-square4" => "corners of the unit square",
        "tsp-circle8" => "8 points equally spaced on the unit circle",
        "tsp-rand10" => "10 seeded uniform points in the unit square",
        "tsp-rand11" => "11 seeded uniform points in the unit square",
        "tsp-rand12" => "12 seeded uniform points in the unit square",
        _ => "",
    }
}

/// A builtin problem. `dimension` applies to continuous functions only
/// (default [`DEFAULT_DIMENSION`]).
pub fn builtin_problem(id: &str, dimension: Option<usize>) -> Result<Problem> {
    if let Ok(f) = id.parse::<BenchmarkFunction>() {
        let d = dimension.unwrap_or(DEFAULT_DIMENSION);
        if d == 0 {
            return Err(Error::config("dimension", "must be ≥ 1"));
        }
        return Ok(Problem::continuous(id, Bounds::symmetric(d, f.standard_bound()), f));
    }
    let cities = match id {
        "tsp-square4" => vec![
            City { x: 0.0, y: 0.0 },
            City { x: 1.0, y: 0.0 },
            City { x: 1.0, y: 1.0 },
            City { x: 0.0, y: 1.0 },
        ],
        "tsp-circle8" => (0..8)
            .map(|k| {
                let angle = 2.0 * PI * k as f64 / 8.0;
                City {
                    x: angle.cos(),
                    y: angle.sin(),
                }
            })
            .collect(),
        "tsp-rand10" => random_cities(10),
        "tsp-rand11" => random_cities(11),
        "tsp-rand12" => random_cities(12),
        _ => {
            return Err(Error::NotFound {
                id: id.to_string(),
                catalog: catalog().into_iter().map(|e| e.id).collect(),
            })
        }
    };
    Ok(Problem::tour(id, TourSpace::from_cities(cities)))
}

fn random_cities(n: usize) -> Vec<City> {
    let mut stream = RandomStream::new(RANDOM_INSTANCE_SEED + n as u64);
    (0..n)
        .map(|_| {
            let x = stream.uniform();
            let y = stream.uniform();
            City { x, y }
        })
        .collect()
}
