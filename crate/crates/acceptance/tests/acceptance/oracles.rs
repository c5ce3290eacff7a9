use swarmbench_core::continuous::{abc_fitness, abc_onlooker_probs, fa_attractiveness};
use swarmbench_core::graph::{
    aco_pheromone_update, aco_transition_probs, iwd_edge_probs, iwd_global_update, iwd_local_soil, iwd_velocity_gain,
};
use swarmbench_core::params::{AcoParams, FaParams, IwdParams};
use swarmbench_core::{builtin_problem, EdgeMatrix, RandomStream};

const TOL: f64 = 1e-12;

/// Engine value and the value produced by the reference script.
fn cases() -> Vec<(&'static str, f64, f64)> {
    let mut out = Vec::new();
    let fa = FaParams {
        gamma: Some(1.0),
        ..FaParams::default()
    };
    out.push((
        "firefly beta(r=1)",
        fa_attractiveness(1.0, &fa).unwrap(),
        0.36787944117144233,
    ));
    out.push(("bee fitness f=0", abc_fitness(0.0).unwrap(), 1.0));
    out.push(("bee fitness f=-1", abc_fitness(-1.0).unwrap(), 2.0));
    out.push(("bee fitness f=3", abc_fitness(3.0).unwrap(), 0.25));

    let aco = AcoParams {
        beta: 0.0,
        ..AcoParams::default()
    };
    let mut tau = EdgeMatrix::filled(3, 1.0);
    tau.set_symmetric(0, 1, 2.0);
    let probs = aco_transition_probs(0, &[true, false, false], &tau, &EdgeMatrix::filled(3, 1.0), &aco).unwrap();
    out.push(("ant p(0->1)", probs[0].1, 2.0 / 3.0));
    out.push(("ant p(0->2)", probs[1].1, 1.0 / 3.0));

    let mut tau = EdgeMatrix::filled(4, 0.1);
    aco_pheromone_update(&mut tau, &[vec![0, 1, 2, 3]], &[4.0], &AcoParams::default()).unwrap();
    out.push(("pheromone on tour edge", tau.get(0, 1), 25.05));
    out.push(("pheromone on closing edge", tau.get(3, 0), 25.05));
    out.push(("pheromone off tour", tau.get(0, 2), 0.05));

    let iwd = IwdParams::default();
    out.push(("drop velocity gain", iwd_velocity_gain(0.0, &iwd), 100000.0));
    out.push(("local soil", iwd_local_soil(10000.0, 10.0, &iwd), 991.0));
    let mut soil = EdgeMatrix::filled(3, 5.0);
    soil.set_symmetric(0, 1, 0.0);
    soil.set_symmetric(0, 2, 1.0);
    let probs = iwd_edge_probs(0, &[true, false, false], &soil, &iwd).unwrap();
    out.push(("drop p(0->1)", probs[0].1, 0.9999000199960008));
    out.push(("drop p(0->2)", probs[1].1, 9.998000399920016e-05));
    let mut soil = EdgeMatrix::filled(10, 100.0);
    iwd_global_update(&mut soil, &(0..10).collect::<Vec<_>>(), 990.0, &iwd).unwrap();
    out.push(("global soil update", soil.get(0, 1), 91.00000000000001));

    let square = builtin_problem("tsp-square4", None).unwrap();
    out.push(("square tour", square.evaluate_tour(&[0, 1, 2, 3]).unwrap(), 4.0));
    let circle = builtin_problem("tsp-circle8", None).unwrap();
    out.push((
        "octagon perimeter",
        circle.evaluate_tour(&(0..8).collect::<Vec<_>>()).unwrap(),
        6.1229349178414365,
    ));
    out
}

pub fn scalars() -> (bool, String) {
    let cases = cases();
    let misses: Vec<String> = cases
        .iter()
        .filter(|(_, got, want)| (got - want).abs() > TOL)
        .map(|(label, got, want)| format!("{label}: {got} vs {want}"))
        .collect();
    let worst = cases
        .iter()
        .map(|(_, got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    if misses.is_empty() {
        (
            true,
            format!("{} values within 1e-12 (largest gap {worst:.1e})", cases.len()),
        )
    } else {
        (false, misses.join("; "))
    }
}

fn random_state(stream: &mut RandomStream) -> (usize, Vec<bool>) {
    let n = 3 + stream.below(30);
    let from = stream.below(n);
    let mut visited: Vec<bool> = (0..n).map(|_| stream.uniform() < 0.5).collect();
    visited[from] = true;
    if visited.iter().all(|&v| v) {
        visited[(from + 1) % n] = false;
    }
    (from, visited)
}

fn log_uniform(stream: &mut RandomStream, lo: f64, hi: f64) -> f64 {
    10f64.powf(stream.uniform_in(lo, hi))
}

#[derive(Default)]
struct Tally {
    checked: usize,
    bad: usize,
    worst: f64,
}

impl Tally {
    fn add(&mut self, probs: impl IntoIterator<Item = f64>) {
        let probs: Vec<f64> = probs.into_iter().collect();
        let gap = (probs.iter().sum::<f64>() - 1.0).abs();
        self.checked += 1;
        self.worst = self.worst.max(gap);
        if gap > TOL || probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            self.bad += 1;
        }
    }
}

pub fn normalization() -> (bool, String) {
    let mut stream = RandomStream::new(2024);
    let (mut aco, mut abc, mut iwd) = (Tally::default(), Tally::default(), Tally::default());
    for _ in 0..1000 {
        let (from, visited) = random_state(&mut stream);
        let n = visited.len();
        let params = AcoParams {
            alpha: stream.uniform_in(0.0, 5.0),
            beta: stream.uniform_in(0.0, 10.0),
            ..AcoParams::default()
        };
        let mut tau = EdgeMatrix::filled(n, 1.0);
        let mut dist = EdgeMatrix::filled(n, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                tau.set_symmetric(i, j, log_uniform(&mut stream, -12.0, 6.0));
                let d = if stream.uniform() < 0.05 {
                    0.0
                } else {
                    log_uniform(&mut stream, -3.0, 4.0)
                };
                dist.set_symmetric(i, j, d);
            }
        }
        aco.add(
            aco_transition_probs(from, &visited, &tau, &dist, &params)
                .unwrap()
                .into_iter()
                .map(|p| p.1),
        );

        let mut soil = EdgeMatrix::filled(n, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                soil.set_symmetric(i, j, stream.uniform_in(-1e5, 1e5));
            }
        }
        iwd.add(
            iwd_edge_probs(from, &visited, &soil, &IwdParams::default())
                .unwrap()
                .into_iter()
                .map(|p| p.1),
        );

        let fitness: Vec<f64> = (0..n)
            .map(|_| abc_fitness(stream.uniform_in(-1e3, 1e6)).unwrap())
            .collect();
        abc.add(abc_onlooker_probs(&fitness).unwrap());
    }
    let ok = [&aco, &abc, &iwd].iter().all(|t| t.bad == 0 && t.checked == 1000);
    let line = |name: &str, t: &Tally| {
        format!(
            "{name} {}/{} (max |sum-1| {:.1e})",
            t.checked - t.bad,
            t.checked,
            t.worst
        )
    };
    (
        ok,
        format!("{}, {}, {}", line("aco", &aco), line("abc", &abc), line("iwd", &iwd)),
    )
}
