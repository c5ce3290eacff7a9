//! Problem model: search spaces, objectives and candidate evaluation.
//!
//! Everything here is minimization. To maximize `g`, minimize `-g`.
//!
//! The types do not enforce their invariants on construction so that
//! [`crate::io::validate_problem`] can report every violation of a
//! user-supplied problem. [`crate::run`] validates before it starts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::benchmark::BenchmarkFunction;
use crate::error::{Error, Result};
use crate::graph::tour_length;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Continuous,
    Tour,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Continuous => "continuous",
            SpaceKind::Tour => "tour",
        })
    }
}

/// Per-dimension box `[lower[d], upper[d]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        Self { lower, upper }
    }

    /// `[-bound, bound]` in every one of `dimension` dimensions.
    pub fn symmetric(dimension: usize, bound: f64) -> Self {
        Self {
            lower: vec![-bound; dimension],
            upper: vec![bound; dimension],
        }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn width(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    pub fn mean_width(&self) -> f64 {
        let d = self.dimension();
        (0..d).map(|i| self.width(i)).sum::<f64>() / d as f64
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position.len() == self.dimension()
            && position
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| *lo <= *x && *x <= *hi)
    }

    /// Projects `value` into dimension `d`'s interval.
    pub fn clamp(&self, d: usize, value: f64) -> f64 {
        value.max(self.lower[d]).min(self.upper[d])
    }
}

/// Dense square matrix over node pairs, row-major.
///
/// Used both for tour distances and for the learned edge state of the graph
/// algorithms (pheromone, soil).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeMatrix {
    n: usize,
    data: Vec<f64>,
}

impl EdgeMatrix {
    pub fn filled(n: usize, value: f64) -> Self {
        Self {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn from_flat(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "matrix of order {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Ok(Self { n, data: rows.concat() })
    }

    /// Euclidean distances between points, computed as `sqrt(dx*dx + dy*dy)`
    /// in full double precision.
    pub fn euclidean(cities: &[City]) -> Self {
        let n = cities.len();
        let mut data = vec![0.0; n * n];
        for (i, a) in cities.iter().enumerate() {
            for (j, b) in cities.iter().enumerate() {
                if i != j {
                    let (dx, dy) = (a.x - b.x, a.y - b.y);
                    data[i * n + j] = (dx * dx + dy * dy).sqrt();
                }
            }
        }
        Self { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_symmetric(&mut self, i: usize, j: usize, value: f64) {
        self.set(i, j, value);
        self.set(j, i, value);
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn map_in_place(&mut self, f: impl Fn(f64) -> f64) {
        self.data.iter_mut().for_each(|v| *v = f(*v));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct City {
    pub x: f64,
    pub y: f64,
}

/// Symmetric TSP instance. `cities` is present when the instance was defined
/// by coordinates; `distances` is then derived from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TourSpace {
    pub distances: EdgeMatrix,
    pub cities: Option<Vec<City>>,
}

impl TourSpace {
    pub fn from_cities(cities: Vec<City>) -> Self {
        Self {
            distances: EdgeMatrix::euclidean(&cities),
            cities: Some(cities),
        }
    }

    pub fn from_matrix(distances: EdgeMatrix) -> Self {
        Self {
            distances,
            cities: None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.distances.order()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SearchSpace {
    Continuous(Bounds),
    Tour(TourSpace),
}

impl SearchSpace {
    pub fn kind(&self) -> SpaceKind {
        match self {
            SearchSpace::Continuous(_) => SpaceKind::Continuous,
            SearchSpace::Tour(_) => SpaceKind::Tour,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    Builtin(BenchmarkFunction),
    TourLength,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub name: String,
    pub space: SearchSpace,
    pub objective: Objective,
}

/// A point of the search space: a position vector or a tour permutation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Candidate {
    Position(Vec<f64>),
    Tour(Vec<usize>),
}

impl Candidate {
    pub fn kind(&self) -> SpaceKind {
        match self {
            Candidate::Position(_) => SpaceKind::Continuous,
            Candidate::Tour(_) => SpaceKind::Tour,
        }
    }
}

impl Problem {
    pub fn continuous(name: impl Into<String>, bounds: Bounds, function: BenchmarkFunction) -> Self {
        Self {
            name: name.into(),
            space: SearchSpace::Continuous(bounds),
            objective: Objective::Builtin(function),
        }
    }

    pub fn tour(name: impl Into<String>, space: TourSpace) -> Self {
        Self {
            name: name.into(),
            space: SearchSpace::Tour(space),
            objective: Objective::TourLength,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.space.kind()
    }

    /// Bounds and objective function of a continuous problem.
    pub fn continuous_parts(&self) -> Result<(&Bounds, BenchmarkFunction)> {
        match (&self.space, self.objective) {
            (SearchSpace::Continuous(bounds), Objective::Builtin(f)) => Ok((bounds, f)),
            (SearchSpace::Continuous(_), Objective::TourLength) => Err(Error::InvalidState(
                "continuous space paired with the tour-length objective".into(),
            )),
            (SearchSpace::Tour(_), _) => Err(Error::UnsupportedOperation(format!(
                "`{}` is a tour problem, not a continuous one",
                self.name
            ))),
        }
    }

    pub fn distances(&self) -> Result<&EdgeMatrix> {
        match &self.space {
            SearchSpace::Tour(t) => Ok(&t.distances),
            SearchSpace::Continuous(_) => Err(Error::UnsupportedOperation(format!(
                "`{}` is a continuous problem, not a tour one",
                self.name
            ))),
        }
    }

    /// Objective value of `candidate`. Positions must have length `D` and
    /// lie within bounds; tours must be permutations of `0..n`.
    pub fn evaluate(&self, candidate: &Candidate) -> Result<f64> {
        match candidate {
            Candidate::Position(x) => self.evaluate_position(x),
            Candidate::Tour(t) => self.evaluate_tour(t),
        }
    }

    pub fn evaluate_position(&self, x: &[f64]) -> Result<f64> {
        let (bounds, f) = match self.continuous_parts() {
            Ok(parts) => parts,
            Err(Error::UnsupportedOperation(_)) => {
                return Err(Error::InvalidCandidate(
                    "position vector given for a tour problem".into(),
                ))
            }
            Err(e) => return Err(e),
        };
        if x.len() != bounds.dimension() {
            return Err(Error::InvalidCandidate(format!(
                "position has length {}, problem dimension is {}",
                x.len(),
                bounds.dimension()
            )));
        }
        if !bounds.contains(x) {
            return Err(Error::InvalidCandidate("position lies outside the bounds".into()));
        }
        Ok(f.eval(x))
    }

    pub fn evaluate_tour(&self, tour: &[usize]) -> Result<f64> {
        let dist = self
            .distances()
            .map_err(|_| Error::InvalidCandidate("tour given for a continuous problem".into()))?;
        tour_length(dist, tour)
    }
}

/// Projects each component of `position` into its bound interval.
pub fn clamp_to_bounds(space: &SearchSpace, position: &[f64]) -> Result<Vec<f64>> {
    let bounds = match space {
        SearchSpace::Continuous(b) => b,
        SearchSpace::Tour(_) => return Err(Error::UnsupportedOperation("clamp_to_bounds on a tour space".into())),
    };
    if position.len() != bounds.dimension() {
        return Err(Error::InvalidCandidate(format!(
            "position has length {}, problem dimension is {}",
            position.len(),
            bounds.dimension()
        )));
    }
    Ok(position.iter().enumerate().map(|(d, &x)| bounds.clamp(d, x)).collect())
}

/// Checks that `tour` is a permutation of `0..n`.
pub fn check_permutation(tour: &[usize], n: usize) -> Result<()> {
    if tour.len() != n {
        return Err(Error::InvalidCandidate(format!(
            "tour visits {} nodes, instance has {n}",
            tour.len()
        )));
    }
    let mut seen = vec![false; n];
    for &node in tour {
        if node >= n || std::mem::replace(&mut seen[node], true) {
            return Err(Error::InvalidCandidate(format!(
                "tour is not a permutation of 0..{n} (node {node})"
            )));
        }
    }
    Ok(())
}
