//! Monte-Carlo random walks on a network: link traversal counts and the
//! empirical relative flow they converge to.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::DirectedNetwork;
use crate::ideal_flow::{min_scale, IdealFlowMatrix};
use crate::markov::StochasticMatrix;
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

/// Agents used per budget by [`convergence_report`] when the budget allows.
pub const DEFAULT_AGENTS: u64 = 100;

#[derive(Clone, Debug, PartialEq)]
pub enum StartDistribution {
    Uniform,
    /// Probability of starting at each node; must sum to one.
    Weights(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub agents: u64,
    pub steps: u64,
    pub seed: u64,
    pub start: StartDistribution,
}

impl SimulationConfig {
    pub fn new(agents: u64, steps: u64, seed: u64) -> Result<Self> {
        if agents == 0 || steps == 0 {
            return Err(Error::InvalidArgument(
                "agents and steps must both be positive".into(),
            ));
        }
        Ok(Self {
            agents,
            steps,
            seed,
            start: StartDistribution::Uniform,
        })
    }

    pub fn with_start(mut self, start: StartDistribution) -> Result<Self> {
        if let StartDistribution::Weights(w) = &start {
            let sum: f64 = w.iter().sum();
            if w.iter().any(|v| *v < 0.0 || !v.is_finite()) || (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "start distribution {w:?} is not a probability vector"
                )));
            }
        }
        self.start = start;
        Ok(self)
    }

    /// Total number of link traversals, `N·T`.
    pub fn budget(&self) -> u64 {
        self.agents * self.steps
    }
}

/// Link traversal counts `R` of a simulation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraversalCounts {
    order: usize,
    counts: Vec<u64>,
    pub agents: u64,
    pub steps: u64,
}

impl TraversalCounts {
    pub fn new(order: usize, counts: Vec<u64>, agents: u64, steps: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Empty);
        }
        if counts.len() != order * order {
            return Err(Error::DimensionMismatch {
                expected: order * order,
                found: counts.len(),
            });
        }
        Ok(Self {
            order,
            counts,
            agents,
            steps,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.order + j]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn outflow(&self, i: usize) -> u64 {
        (0..self.order).map(|j| self.get(i, j)).sum()
    }

    pub fn inflow(&self, j: usize) -> u64 {
        (0..self.order).map(|i| self.get(i, j)).sum()
    }
}

/// Cumulative transition table for one node.
struct Row {
    targets: Vec<usize>,
    cumulative: Vec<f64>,
}

impl Row {
    fn sample(&self, u: f64) -> usize {
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.targets[k.min(self.targets.len() - 1)]
    }
}

fn cumulative_rows(s: &SquareMatrix<f64>) -> Vec<Row> {
    s.rows()
        .map(|row| {
            let mut acc = 0.0;
            let (targets, cumulative) = row
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0.0)
                .map(|(j, p)| {
                    acc += p;
                    (j, acc)
                })
                .unzip();
            Row {
                targets,
                cumulative,
            }
        })
        .collect()
}

/// Runs `cfg.agents` independent walkers for `cfg.steps` steps each.
///
/// Agent `a` draws from its own ChaCha8 stream `(seed, a)`, so results are
/// identical however agents are scheduled across threads.
pub fn simulate(
    g: &DirectedNetwork,
    s: &StochasticMatrix<f64>,
    cfg: &SimulationConfig,
) -> Result<TraversalCounts> {
    let n = g.node_count();
    if s.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.order(),
        });
    }
    g.strong_connectivity().require_strongly_connected()?;
    for i in 0..n {
        for j in 0..n {
            if (*s.get(i, j) > 0.0) != g.has_edge(i, j) {
                return Err(Error::SupportMismatch { row: i, col: j });
            }
        }
    }
    let rows = cumulative_rows(s.matrix());
    let start = match &cfg.start {
        StartDistribution::Uniform => None,
        StartDistribution::Weights(w) => {
            if w.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
            let mut acc = 0.0;
            Some(Row {
                targets: (0..n).collect(),
                cumulative: w.iter().map(|p| {
                    acc += p;
                    acc
                })
                .collect(),
            })
        }
    };

    let counts = (0..cfg.agents)
        .into_par_iter()
        .fold(
            || vec![0u64; n * n],
            |mut counts, agent| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(agent);
                let mut node = match &start {
                    None => rng.random_range(0..n),
                    Some(row) => row.sample(rng.random()),
                };
                for _ in 0..cfg.steps {
                    let next = rows[node].sample(rng.random());
                    counts[node * n + next] += 1;
                    node = next;
                }
                counts
            },
        )
        .reduce(
            || vec![0u64; n * n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    TraversalCounts::new(n, counts, cfg.agents, cfg.steps)
}

/// Counts divided by the smallest nonzero count.
pub fn relative_flow(r: &TraversalCounts) -> Result<SquareMatrix<f64>> {
    let counts = SquareMatrix::from_fn(r.order(), |i, j| r.get(i, j) as f64);
    min_scale(&counts).map(|(m, _)| m)
}

/// Error of one simulation budget against the reference flow.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergencePoint {
    pub budget: u64,
    pub agents: u64,
    pub steps: u64,
    pub max_rel_err: f64,
    pub mean_rel_err: f64,
}

/// Elementwise relative error `|F̂ − F| / F` over the support of `reference`
/// (which must already be min-scaled): `(max, mean)`.
pub fn relative_errors(empirical: &SquareMatrix<f64>, reference: &SquareMatrix<f64>) -> (f64, f64) {
    let errs: Vec<f64> = reference
        .entries()
        .iter()
        .zip(empirical.entries())
        .filter(|(r, _)| **r != 0.0)
        .map(|(r, e)| (e - r).abs() / r)
        .collect();
    let max = errs.iter().copied().fold(0.0, f64::max);
    let mean = errs.iter().sum::<f64>() / errs.len().max(1) as f64;
    (max, mean)
}

/// Splits a budget `N·T` into `(agents, steps)`: the agent count is
/// `gcd(budget, DEFAULT_AGENTS)`, so budgets grow `T` at fixed `N`.
pub fn split_budget(budget: u64) -> (u64, u64) {
    let agents = num_integer::gcd(budget, DEFAULT_AGENTS);
    (agents, budget / agents)
}

/// Simulates each budget in turn (same seed) and measures the distance of
/// the empirical relative flow from `reference`.
pub fn convergence_report<T: Scalar>(
    g: &DirectedNetwork,
    s: &StochasticMatrix<f64>,
    budgets: &[u64],
    reference: &IdealFlowMatrix<T>,
    seed: u64,
) -> Result<Vec<ConvergencePoint>> {
    if budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("budgets must be increasing".into()));
    }
    let (reference, _) = min_scale(&reference.matrix().map(Scalar::to_f64))?;
    budgets
        .iter()
        .map(|&budget| {
            if budget == 0 {
                return Err(Error::InvalidArgument("budget must be positive".into()));
            }
            let (agents, steps) = split_budget(budget);
            let counts = simulate(g, s, &SimulationConfig::new(agents, steps, seed)?)?;
            let (max_rel_err, mean_rel_err) = relative_errors(&relative_flow(&counts)?, &reference);
            Ok(ConvergencePoint {
                budget,
                agents,
                steps,
                max_rel_err,
                mean_rel_err,
            })
        })
        .collect()
}

/// CSV with header `budget,max_rel_err,mean_rel_err`.
pub fn write_convergence_csv(points: &[ConvergencePoint], mut out: impl Write) -> Result<()> {
    writeln!(out, "budget,max_rel_err,mean_rel_err")?;
    for p in points {
        writeln!(out, "{},{:e},{:e}", p.budget, p.max_rel_err, p.mean_rel_err)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal_flow::ideal_flow_from_stochastic;

    fn two_cycle() -> (DirectedNetwork, StochasticMatrix<f64>) {
        let g = DirectedNetwork::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        let s = g.uniform_walk_matrix().unwrap().to_f64();
        (g, s)
    }

    fn running() -> (DirectedNetwork, StochasticMatrix<f64>) {
        let g = DirectedNetwork::from_pairs(3, &[(0, 1), (0, 2), (1, 2), (2, 0)]).unwrap();
        let s = g.uniform_walk_matrix().unwrap().to_f64();
        (g, s)
    }

    #[test]
    fn two_cycle_alternates() {
        let (g, s) = two_cycle();
        let cfg = SimulationConfig::new(1, 4, 7)
            .unwrap()
            .with_start(StartDistribution::Weights(vec![1.0, 0.0]))
            .unwrap();
        let r = simulate(&g, &s, &cfg).unwrap();
        assert_eq!((r.get(0, 0), r.get(0, 1), r.get(1, 0), r.get(1, 1)), (0, 2, 2, 0));
    }

    #[test]
    fn counts_total_budget_and_stay_on_edges() {
        let (g, s) = running();
        let cfg = SimulationConfig::new(17, 301, 5).unwrap();
        let r = simulate(&g, &s, &cfg).unwrap();
        assert_eq!(r.total(), 17 * 301);
        for i in 0..3 {
            for j in 0..3 {
                if !g.has_edge(i, j) {
                    assert_eq!(r.get(i, j), 0);
                }
            }
            assert!(r.outflow(i).abs_diff(r.inflow(i)) <= cfg.agents);
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let (g, s) = running();
        let cfg = SimulationConfig::new(64, 500, 99).unwrap();
        assert_eq!(simulate(&g, &s, &cfg).unwrap(), simulate(&g, &s, &cfg).unwrap());
        let other = SimulationConfig::new(64, 500, 100).unwrap();
        assert_ne!(simulate(&g, &s, &cfg).unwrap(), simulate(&g, &s, &other).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let (g, _) = running();
        let (_, s2) = two_cycle();
        let cfg = SimulationConfig::new(1, 1, 0).unwrap();
        assert!(matches!(simulate(&g, &s2, &cfg), Err(Error::DimensionMismatch { .. })));
        let chain = DirectedNetwork::from_pairs(2, &[(0, 1), (1, 1)]).unwrap();
        let s = chain.uniform_walk_matrix().unwrap().to_f64();
        assert!(matches!(simulate(&chain, &s, &cfg), Err(Error::Reducible { .. })));
        let full = DirectedNetwork::from_pairs(2, &[(0, 1), (1, 0), (0, 0)]).unwrap();
        let (_, swap) = two_cycle();
        assert!(matches!(
            simulate(&full, &swap, &cfg),
            Err(Error::SupportMismatch { row: 0, col: 0 })
        ));
        assert!(SimulationConfig::new(0, 5, 1).is_err());
        assert!(SimulationConfig::new(1, 1, 1)
            .unwrap()
            .with_start(StartDistribution::Weights(vec![0.7, 0.7]))
            .is_err());
    }

    #[test]
    fn relative_flow_examples() {
        let r = TraversalCounts::new(2, vec![0, 2, 2, 0], 1, 4).unwrap();
        assert_eq!(relative_flow(&r).unwrap(), SquareMatrix::from_ints([[0, 1], [1, 0]]));
        let r = TraversalCounts::new(3, vec![0, 5, 5, 0, 0, 5, 10, 0, 0], 1, 25).unwrap();
        assert_eq!(
            relative_flow(&r).unwrap(),
            SquareMatrix::from_ints([[0, 1, 1], [0, 0, 1], [2, 0, 0]])
        );
        let r = TraversalCounts::new(2, vec![0, 0, 7, 0], 7, 1).unwrap();
        assert_eq!(relative_flow(&r).unwrap(), SquareMatrix::from_ints([[0, 0], [1, 0]]));
        let r = TraversalCounts::new(2, vec![0; 4], 1, 1).unwrap();
        assert!(relative_flow(&r).is_err());
    }

    #[test]
    fn budget_split_is_exact() {
        assert_eq!(split_budget(1), (1, 1));
        assert_eq!(split_budget(1000), (100, 10));
        assert_eq!(split_budget(1_000_000), (100, 10_000));
        assert_eq!(split_budget(7), (1, 7));
        assert_eq!(split_budget(250), (50, 5));
    }

    #[test]
    fn two_cycle_converges_immediately() {
        let (g, s) = two_cycle();
        let reference = ideal_flow_from_stochastic(&g.uniform_walk_matrix().unwrap()).unwrap();
        let report = convergence_report(&g, &s, &[1000, 10_000, 100_000], &reference, 3).unwrap();
        assert!(report.iter().all(|p| p.max_rel_err == 0.0));
        let single = convergence_report(&g, &s, &[1], &reference, 3).unwrap();
        assert_eq!(single[0].max_rel_err, 1.0);
    }

    #[test]
    fn convergence_csv_format() {
        let pts = vec![ConvergencePoint {
            budget: 1000,
            agents: 100,
            steps: 10,
            max_rel_err: 0.5,
            mean_rel_err: 0.25,
        }];
        let mut buf = Vec::new();
        write_convergence_csv(&pts, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "budget,max_rel_err,mean_rel_err\n1000,5e-1,2.5e-1\n"
        );
    }

    #[test]
    fn budgets_must_increase() {
        let (g, s) = running();
        let reference = ideal_flow_from_stochastic(&g.uniform_walk_matrix().unwrap()).unwrap();
        assert!(convergence_report(&g, &s, &[100, 10], &reference, 0).is_err());
        assert!(convergence_report(&g, &s, &[0, 10], &reference, 0).is_err());
    }
}
