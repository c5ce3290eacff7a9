//! Algorithm parameter sets and their schema.
//!
//! Each algorithm's [`ParamSpec`] table is the single source of truth for
//! parameter names, types, defaults and valid ranges. The CLI `--param`
//! handling and the HTTP schema endpoint both read it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Problem, SearchSpace, SpaceKind};
use crate::run::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmId {
    Pso,
    Abc,
    Fa,
    Aco,
    Iwd,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 5] = [
        AlgorithmId::Pso,
        AlgorithmId::Abc,
        AlgorithmId::Fa,
        AlgorithmId::Aco,
        AlgorithmId::Iwd,
    ];

    pub fn id(self) -> &'static str {
        match self {
            AlgorithmId::Pso => "pso",
            AlgorithmId::Abc => "abc",
            AlgorithmId::Fa => "fa",
            AlgorithmId::Aco => "aco",
            AlgorithmId::Iwd => "iwd",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmId::Pso => "Particle Swarm Optimization",
            AlgorithmId::Abc => "Artificial Bee Colony",
            AlgorithmId::Fa => "Firefly Algorithm",
            AlgorithmId::Aco => "Ant Colony Optimization (Ant System)",
            AlgorithmId::Iwd => "Intelligent Water Drops",
        }
    }

    /// The kind of search space this algorithm works on.
    pub fn space_kind(self) -> SpaceKind {
        match self {
            AlgorithmId::Pso | AlgorithmId::Abc | AlgorithmId::Fa => SpaceKind::Continuous,
            AlgorithmId::Aco | AlgorithmId::Iwd => SpaceKind::Tour,
        }
    }

    pub fn schema(self) -> &'static [ParamSpec] {
        match self {
            AlgorithmId::Pso => PSO_SCHEMA,
            AlgorithmId::Abc => ABC_SCHEMA,
            AlgorithmId::Fa => FA_SCHEMA,
            AlgorithmId::Aco => ACO_SCHEMA,
            AlgorithmId::Iwd => IWD_SCHEMA,
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamType {
    Real,
    Integer,
}

/// One row of a parameter schema. `default: None` means the value is derived
/// from the problem and run configuration (see the description).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub kind: ParamType,
    pub default: Option<f64>,
    pub min: Option<f64>,
    pub min_exclusive: bool,
    pub max: Option<f64>,
    pub max_exclusive: bool,
    pub description: &'static str,
}

impl ParamSpec {
    /// Checks type and range of `value`, returning a human-readable reason on failure.
    pub fn check(&self, value: f64) -> std::result::Result<(), String> {
        if !value.is_finite() {
            return Err("must be a finite number".into());
        }
        if self.kind == ParamType::Integer && value.fract() != 0.0 {
            return Err("must be an integer".into());
        }
        if let Some(min) = self.min {
            if value < min || (self.min_exclusive && value == min) {
                return Err(format!("must be {} {min}", if self.min_exclusive { ">" } else { "≥" }));
            }
        }
        if let Some(max) = self.max {
            if value > max || (self.max_exclusive && value == max) {
                return Err(format!("must be {} {max}", if self.max_exclusive { "<" } else { "≤" }));
            }
        }
        Ok(())
    }

    /// Interval notation of the valid range, e.g. `(0, 1]`.
    pub fn range_text(&self) -> String {
        let lo = match self.min {
            Some(v) => format!("{}{v}", if self.min_exclusive { "(" } else { "[" }),
            None => "(-inf".into(),
        };
        let hi = match self.max {
            Some(v) => format!("{v}{}", if self.max_exclusive { ")" } else { "]" }),
            None => "inf)".into(),
        };
        format!("{lo}, {hi}")
    }
}

const fn real(
    name: &'static str,
    default: Option<f64>,
    min: Option<f64>,
    min_exclusive: bool,
    max: Option<f64>,
    max_exclusive: bool,
    description: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        kind: ParamType::Real,
        default,
        min,
        min_exclusive,
        max,
        max_exclusive,
        description,
    }
}

const fn positive(name: &'static str, default: f64, description: &'static str) -> ParamSpec {
    real(name, Some(default), Some(0.0), true, None, false, description)
}

const fn open_unit(name: &'static str, default: f64, description: &'static str) -> ParamSpec {
    real(name, Some(default), Some(0.0), true, Some(1.0), true, description)
}

const fn count(name: &'static str, description: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: ParamType::Integer,
        default: None,
        min: Some(1.0),
        min_exclusive: false,
        max: None,
        max_exclusive: false,
        description,
    }
}

pub const PSO_SCHEMA: &[ParamSpec] = &[
    real("w", Some(0.7298), Some(0.0), false, Some(1.2), false, "inertia weight"),
    real(
        "c1",
        Some(1.49618),
        Some(0.0),
        false,
        None,
        false,
        "cognitive coefficient (pull to personal best)",
    ),
    real(
        "c2",
        Some(1.49618),
        Some(0.0),
        false,
        None,
        false,
        "social coefficient (pull to global best)",
    ),
    real(
        "vfrac",
        Some(0.5),
        Some(0.0),
        true,
        Some(1.0),
        false,
        "velocity clamp as a fraction of each bound width",
    ),
];

pub const ABC_SCHEMA: &[ParamSpec] = &[count(
    "limit",
    "trials without improvement before a source is abandoned; default food sources × dimension (food sources = population / 2)",
)];

pub const FA_SCHEMA: &[ParamSpec] = &[
    positive("beta0", 1.0, "attractiveness at distance zero"),
    real(
        "gamma",
        None,
        Some(0.0),
        true,
        None,
        false,
        "light absorption coefficient; default 1 / (mean bound width)²",
    ),
    real(
        "alpha0",
        Some(0.25),
        Some(0.0),
        false,
        Some(1.0),
        false,
        "initial random-walk scale, as a fraction of bound width",
    ),
    real(
        "alpha_decay",
        Some(0.97),
        Some(0.0),
        true,
        Some(1.0),
        false,
        "per-iteration multiplier of the random-walk scale",
    ),
];

pub const ACO_SCHEMA: &[ParamSpec] = &[
    real("alpha", Some(1.0), Some(0.0), false, None, false, "pheromone exponent"),
    real(
        "beta",
        Some(5.0),
        Some(0.0),
        false,
        None,
        false,
        "heuristic (1/distance) exponent",
    ),
    open_unit("rho", 0.5, "evaporation rate"),
    positive(
        "q",
        100.0,
        "deposit constant; an ant deposits q / tour length on each of its edges",
    ),
    positive("tau0", 0.1, "initial pheromone on every edge; must exceed tau_min"),
    positive("tau_min", 1e-12, "pheromone floor"),
    count("ants", "ants per iteration; default the number of cities"),
];

pub const IWD_SCHEMA: &[ParamSpec] = &[
    positive("a_v", 1000.0, "velocity update numerator"),
    positive("b_v", 0.01, "velocity update offset"),
    positive("c_v", 1.0, "velocity update soil weight"),
    positive("a_s", 1000.0, "soil update numerator"),
    positive("b_s", 0.01, "soil update offset"),
    positive("c_s", 1.0, "soil update time weight"),
    positive("initial_soil", 10000.0, "soil on every edge at start"),
    positive("initial_velocity", 200.0, "drop velocity at the start of each tour"),
    open_unit("rho_n", 0.9, "local soil update rate"),
    open_unit("rho_iwd", 0.9, "global (iteration-best) soil update rate"),
    positive(
        "epsilon_s",
        0.0001,
        "small constant in edge selection and the velocity floor",
    ),
    count("drops", "water drops per iteration; default the number of cities"),
];

/// Conversion between a parameter field and its schema value.
trait ParamValue {
    fn to_param(&self) -> Option<f64>;
    fn from_param(value: f64) -> Self;
}

impl ParamValue for f64 {
    fn to_param(&self) -> Option<f64> {
        Some(*self)
    }
    fn from_param(value: f64) -> Self {
        value
    }
}

impl ParamValue for Option<f64> {
    fn to_param(&self) -> Option<f64> {
        *self
    }
    fn from_param(value: f64) -> Self {
        Some(value)
    }
}

impl ParamValue for Option<usize> {
    fn to_param(&self) -> Option<f64> {
        self.map(|v| v as f64)
    }
    fn from_param(value: f64) -> Self {
        Some(value as usize)
    }
}

macro_rules! param_fields {
    ($ty:ty { $($field:ident),* $(,)? }) => {
        impl $ty {
            fn get_field(&self, name: &str) -> Option<Option<f64>> {
                match name {
                    $(stringify!($field) => Some(self.$field.to_param()),)*
                    _ => None,
                }
            }

            fn set_field(&mut self, name: &str, value: f64) -> bool {
                match name {
                    $(stringify!($field) => {
                        self.$field = ParamValue::from_param(value);
                        true
                    })*
                    _ => false,
                }
            }
        }
    };
}

/// Global-best PSO with inertia weight and velocity clamping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsoParams {
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    pub vfrac: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            w: 0.7298,
            c1: 1.49618,
            c2: 1.49618,
            vfrac: 0.5,
        }
    }
}

param_fields!(PsoParams { w, c1, c2, vfrac });

/// The number of food sources is half the population and is not a parameter.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AbcParams {
    pub limit: Option<usize>,
}

param_fields!(AbcParams { limit });

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaParams {
    pub beta0: f64,
    pub gamma: Option<f64>,
    pub alpha0: f64,
    pub alpha_decay: f64,
}

impl Default for FaParams {
    fn default() -> Self {
        Self {
            beta0: 1.0,
            gamma: None,
            alpha0: 0.25,
            alpha_decay: 0.97,
        }
    }
}

param_fields!(FaParams {
    beta0,
    gamma,
    alpha0,
    alpha_decay
});

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcoParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub q: f64,
    pub tau0: f64,
    pub tau_min: f64,
    pub ants: Option<usize>,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 5.0,
            rho: 0.5,
            q: 100.0,
            tau0: 0.1,
            tau_min: 1e-12,
            ants: None,
        }
    }
}

param_fields!(AcoParams {
    alpha,
    beta,
    rho,
    q,
    tau0,
    tau_min,
    ants
});

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IwdParams {
    pub a_v: f64,
    pub b_v: f64,
    pub c_v: f64,
    pub a_s: f64,
    pub b_s: f64,
    pub c_s: f64,
    pub initial_soil: f64,
    pub initial_velocity: f64,
    pub rho_n: f64,
    pub rho_iwd: f64,
    pub epsilon_s: f64,
    pub drops: Option<usize>,
}

impl Default for IwdParams {
    fn default() -> Self {
        Self {
            a_v: 1000.0,
            b_v: 0.01,
            c_v: 1.0,
            a_s: 1000.0,
            b_s: 0.01,
            c_s: 1.0,
            initial_soil: 10000.0,
            initial_velocity: 200.0,
            rho_n: 0.9,
            rho_iwd: 0.9,
            epsilon_s: 0.0001,
            drops: None,
        }
    }
}

param_fields!(IwdParams {
    a_v,
    b_v,
    c_v,
    a_s,
    b_s,
    c_s,
    initial_soil,
    initial_velocity,
    rho_n,
    rho_iwd,
    epsilon_s,
    drops,
});

/// A parameter set tagged with its algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", content = "params", rename_all = "lowercase")]
pub enum AlgorithmParams {
    Pso(PsoParams),
    Abc(AbcParams),
    Fa(FaParams),
    Aco(AcoParams),
    Iwd(IwdParams),
}

impl AlgorithmParams {
    pub fn defaults(id: AlgorithmId) -> Self {
        match id {
            AlgorithmId::Pso => AlgorithmParams::Pso(PsoParams::default()),
            AlgorithmId::Abc => AlgorithmParams::Abc(AbcParams::default()),
            AlgorithmId::Fa => AlgorithmParams::Fa(FaParams::default()),
            AlgorithmId::Aco => AlgorithmParams::Aco(AcoParams::default()),
            AlgorithmId::Iwd => AlgorithmParams::Iwd(IwdParams::default()),
        }
    }

    /// Defaults with `overrides` applied in order.
    pub fn with_overrides<'a>(id: AlgorithmId, overrides: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let mut params = Self::defaults(id);
        for (name, value) in overrides {
            params.set(name, value)?;
        }
        Ok(params)
    }

    pub fn id(&self) -> AlgorithmId {
        match self {
            AlgorithmParams::Pso(_) => AlgorithmId::Pso,
            AlgorithmParams::Abc(_) => AlgorithmId::Abc,
            AlgorithmParams::Fa(_) => AlgorithmId::Fa,
            AlgorithmParams::Aco(_) => AlgorithmId::Aco,
            AlgorithmParams::Iwd(_) => AlgorithmId::Iwd,
        }
    }

    /// Current value of `name`; `Some(None)` for a derived value not yet resolved.
    pub fn get(&self, name: &str) -> Option<Option<f64>> {
        match self {
            AlgorithmParams::Pso(p) => p.get_field(name),
            AlgorithmParams::Abc(p) => p.get_field(name),
            AlgorithmParams::Fa(p) => p.get_field(name),
            AlgorithmParams::Aco(p) => p.get_field(name),
            AlgorithmParams::Iwd(p) => p.get_field(name),
        }
    }

    /// Sets one parameter after checking its name, type and range.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let id = self.id();
        let spec = id
            .schema()
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownParameter {
                algorithm: id.id().to_string(),
                name: name.to_string(),
                valid: id.schema().iter().map(|s| s.name.to_string()).collect(),
            })?;
        spec.check(value).map_err(|m| Error::config(name, m))?;
        let known = match self {
            AlgorithmParams::Pso(p) => p.set_field(name, value),
            AlgorithmParams::Abc(p) => p.set_field(name, value),
            AlgorithmParams::Fa(p) => p.set_field(name, value),
            AlgorithmParams::Aco(p) => p.set_field(name, value),
            AlgorithmParams::Iwd(p) => p.set_field(name, value),
        };
        debug_assert!(known, "schema and struct disagree on `{name}`");
        Ok(())
    }

    /// `(name, value)` for every schema row, in schema order.
    pub fn values(&self) -> Vec<(&'static str, Option<f64>)> {
        self.id()
            .schema()
            .iter()
            .map(|s| (s.name, self.get(s.name).flatten()))
            .collect()
    }

    /// Checks every set value against the schema, plus cross-field rules.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.values() {
            if let Some(v) = value {
                let spec = self.id().schema().iter().find(|s| s.name == name).unwrap();
                spec.check(v).map_err(|m| Error::config(name, m))?;
            }
        }
        if let AlgorithmParams::Aco(p) = self {
            if p.tau0 <= p.tau_min {
                return Err(Error::config("tau0", "must exceed tau_min"));
            }
        }
        Ok(())
    }

    /// Fills every derived parameter from the problem and run configuration.
    pub fn resolve(&self, problem: &Problem, config: &RunConfig) -> Result<Self> {
        let mut resolved = self.clone();
        match (&mut resolved, &problem.space) {
            (AlgorithmParams::Pso(_), SearchSpace::Continuous(_)) => {}
            (AlgorithmParams::Abc(p), SearchSpace::Continuous(bounds)) => {
                let sources = config.population / 2;
                if sources < 2 {
                    return Err(Error::config(
                        "population",
                        "abc needs at least 2 food sources (population ≥ 4)",
                    ));
                }
                p.limit.get_or_insert(sources * bounds.dimension());
            }
            (AlgorithmParams::Fa(p), SearchSpace::Continuous(bounds)) => {
                let width = bounds.mean_width();
                p.gamma.get_or_insert(1.0 / (width * width));
            }
            (AlgorithmParams::Aco(p), SearchSpace::Tour(t)) => {
                p.ants.get_or_insert(t.node_count());
            }
            (AlgorithmParams::Iwd(p), SearchSpace::Tour(t)) => {
                p.drops.get_or_insert(t.node_count());
            }
            _ => {
                return Err(Error::config(
                    "algorithm",
                    format!(
                        "{} works on {} problems but `{}` is a {} problem",
                        self.id(),
                        self.id().space_kind(),
                        problem.name,
                        problem.kind()
                    ),
                ))
            }
        }
        resolved.validate()?;
        Ok(resolved)
    }
}
