use super::{Diagnostic, DiagnosticCode};
use crate::problem::{Bounds, Objective, Problem, SearchSpace, TourSpace};

/// One diagnostic per violated invariant; empty when `problem` is valid.
pub fn validate_problem(problem: &Problem) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if problem.name.trim().is_empty() {
        out.push(Diagnostic::new(DiagnosticCode::EmptyName, "problem name is empty"));
    }
    match (&problem.space, problem.objective) {
        (SearchSpace::Continuous(bounds), Objective::Builtin(_)) => check_bounds(bounds, &mut out),
        (SearchSpace::Tour(space), Objective::TourLength) => check_tour(space, &mut out),
        (space, objective) => out.push(Diagnostic::new(
            DiagnosticCode::ObjectiveMismatch,
            format!("objective {objective:?} does not apply to a {} space", space.kind()),
        )),
    }
    out
}

fn check_bounds(bounds: &Bounds, out: &mut Vec<Diagnostic>) {
    if bounds.lower.len() != bounds.upper.len() {
        out.push(Diagnostic::new(
            DiagnosticCode::BoundsLengthMismatch,
            format!(
                "{} lower bounds but {} upper bounds",
                bounds.lower.len(),
                bounds.upper.len()
            ),
        ));
        return;
    }
    if bounds.lower.is_empty() {
        out.push(Diagnostic::new(
            DiagnosticCode::ZeroDimension,
            "dimension must be at least 1",
        ));
    }
    for (d, (lo, hi)) in bounds.lower.iter().zip(&bounds.upper).enumerate() {
        if !lo.is_finite() || !hi.is_finite() {
            out.push(Diagnostic::new(
                DiagnosticCode::NonFiniteBound,
                format!("dimension {d} has non-finite bounds [{lo}, {hi}]"),
            ));
        } else if lo >= hi {
            out.push(Diagnostic::new(
                DiagnosticCode::InvertedBounds,
                format!("dimension {d}: lower {lo} is not below upper {hi}"),
            ));
        }
    }
}

fn check_tour(space: &TourSpace, out: &mut Vec<Diagnostic>) {
    let dist = &space.distances;
    let n = dist.order();
    if n < 3 {
        out.push(Diagnostic::new(
            DiagnosticCode::TooFewNodes,
            format!("a tour needs at least 3 nodes, got {n}"),
        ));
    }
    if let Some(cities) = &space.cities {
        if cities.len() != n {
            out.push(Diagnostic::new(
                DiagnosticCode::CityCountMismatch,
                format!("{} cities but a distance matrix of order {n}", cities.len()),
            ));
        }
        if let Some(k) = cities.iter().position(|c| !c.x.is_finite() || !c.y.is_finite()) {
            out.push(Diagnostic::new(
                DiagnosticCode::NonFiniteCoordinate,
                format!("city {k} has a non-finite coordinate"),
            ));
        }
    }
    // One diagnostic per kind of violation, naming the first offending entry.
    let mut first = |code: DiagnosticCode, message: String| {
        if !out.iter().any(|d| d.code == code) {
            out.push(Diagnostic::new(code, message));
        }
    };
    for i in 0..n {
        for j in 0..n {
            let v = dist.get(i, j);
            if !v.is_finite() {
                first(DiagnosticCode::NonFiniteDistance, format!("distance ({i},{j}) is {v}"));
                continue;
            }
            if v < 0.0 {
                first(
                    DiagnosticCode::NegativeDistance,
                    format!("distance ({i},{j}) is negative: {v}"),
                );
            }
            if i == j && v != 0.0 {
                first(
                    DiagnosticCode::NonzeroDiagonal,
                    format!("distance ({i},{i}) is {v}, expected 0"),
                );
            }
            let w = dist.get(j, i);
            if i < j && w.is_finite() && v != w {
                first(
                    DiagnosticCode::AsymmetricDistance,
                    format!("distance ({i},{j}) = {v} but ({j},{i}) = {w}"),
                );
            }
        }
    }
}
