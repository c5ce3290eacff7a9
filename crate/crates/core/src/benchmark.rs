//! Builtin continuous objective functions. All are minimized with optimum 0.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkFunction {
    Sphere,
    Rastrigin,
    Rosenbrock,
    Ackley,
}

impl BenchmarkFunction {
    pub const ALL: [BenchmarkFunction; 4] = [
        BenchmarkFunction::Ackley,
        BenchmarkFunction::Rastrigin,
        BenchmarkFunction::Rosenbrock,
        BenchmarkFunction::Sphere,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BenchmarkFunction::Sphere => "sphere",
            BenchmarkFunction::Rastrigin => "rastrigin",
            BenchmarkFunction::Rosenbrock => "rosenbrock",
            BenchmarkFunction::Ackley => "ackley",
        }
    }

    /// Symmetric per-dimension bound `b`; the standard domain is `[-b, b]^D`.
    pub fn standard_bound(self) -> f64 {
        match self {
            BenchmarkFunction::Sphere | BenchmarkFunction::Rastrigin => 5.12,
            BenchmarkFunction::Rosenbrock => 5.0,
            BenchmarkFunction::Ackley => 32.768,
        }
    }

    /// Location of the global minimum in `dimension` dimensions.
    pub fn optimum(self, dimension: usize) -> Vec<f64> {
        match self {
            BenchmarkFunction::Rosenbrock => vec![1.0; dimension],
            _ => vec![0.0; dimension],
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            BenchmarkFunction::Sphere => x.iter().map(|v| v * v).sum(),
            BenchmarkFunction::Rastrigin => {
                10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
            }
            BenchmarkFunction::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            BenchmarkFunction::Ackley => {
                if x.is_empty() {
                    return 0.0;
                }
                let n = x.len() as f64;
                let square_mean = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cos_mean = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * square_mean.sqrt()).exp() - cos_mean.exp() + 20.0 + E
            }
        }
    }
}

impl fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BenchmarkFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| format!("unknown builtin function `{s}`"))
    }
}
