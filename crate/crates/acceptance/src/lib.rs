//! Support code for the acceptance suite: an exhaustive TSP oracle and the
//! pass/fail report printed by `cargo test -p swarmbench-acceptance`.

use std::fmt;
use std::time::{Duration, Instant};

use swarmbench_core::EdgeMatrix;

/// Length of the shortest closed tour, by enumerating every tour that starts
/// at node 0 and visits node 1 before node `n-1` direction-wise, i.e.
/// `(n-1)!/2` tours.
pub fn brute_force_optimum(dist: &EdgeMatrix) -> f64 {
    let n = dist.order();
    assert!(n >= 3, "need at least three nodes");
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut rest, 0, &mut |order| {
        if order[0] > order[order.len() - 1] {
            return;
        }
        let mut length = dist.get(0, order[0]) + dist.get(order[order.len() - 1], 0);
        for pair in order.windows(2) {
            length += dist.get(pair[0], pair[1]);
        }
        best = best.min(length);
    });
    best
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Number of distinct tours the oracle scores for `n` nodes.
pub fn tours_enumerated(n: usize) -> usize {
    (1..n).product::<usize>() / 2
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// Equal up to a relative `1e-9`; tour lengths summed in different orders
/// differ in the last bits.
pub fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl Outcome {
    /// Runs `check`, which returns whether the criterion held and a summary,
    /// then folds the runtime budget into the verdict.
    pub fn measure(name: &'static str, budget: Option<Duration>, check: impl FnOnce() -> (bool, String)) -> Self {
        let start = Instant::now();
        let (held, detail) = check();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        Self {
            name,
            passed: held && in_time,
            detail,
            elapsed,
            budget,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict}  {:<28} {}  [{:.2} s",
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )?;
        match self.budget {
            Some(b) => write!(f, " / {} s]", b.as_secs()),
            None => write!(f, "]"),
        }
    }
}
