//! Conversions between premagic flow matrices and stochastic matrices, and
//! stationary distributions.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::support_connectivity;
use crate::matrix::{linalg, SquareMatrix};
use crate::scalar::{Rational, Scalar, DEFAULT_REL_TOL};

/// Row-stochastic matrix: non-negative, every row sums to one (exactly for
/// rationals, within `1e-9` for floats).
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix<T> {
    matrix: SquareMatrix<T>,
}

impl<T: Scalar> StochasticMatrix<T> {
    pub fn new(matrix: SquareMatrix<T>) -> Result<Self> {
        matrix.ensure_non_negative()?;
        let tol = if T::EXACT { 0.0 } else { DEFAULT_REL_TOL };
        for (row, sum) in matrix.row_sums().values.into_iter().enumerate() {
            if !(sum.clone() - T::one()).within(tol) {
                return Err(Error::NotStochastic {
                    row,
                    sum: sum.to_field(),
                });
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> SquareMatrix<T> {
        self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        self.matrix.get(i, j)
    }

    pub fn is_irreducible(&self) -> bool {
        support_connectivity(&self.matrix).strongly_connected
    }

    /// `xᵀS`
    pub fn left_multiply(&self, x: &[T]) -> Vec<T> {
        let n = self.order();
        (0..n)
            .map(|j| {
                (0..n).fold(T::zero(), |acc, i| {
                    acc + x[i].clone() * self.matrix.get(i, j).clone()
                })
            })
            .collect()
    }
}

impl StochasticMatrix<Rational> {
    pub fn to_f64(&self) -> StochasticMatrix<f64> {
        StochasticMatrix {
            matrix: self.matrix.to_f64(),
        }
    }
}

/// Per-node throughput `n_i`: common inflow and outflow of node `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeThroughputs<T>(Vec<T>);

impl<T: Scalar> NodeThroughputs<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(node) = values.iter().position(|v| !v.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "throughput of node {node} is {}, expected > 0",
                values[node]
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StationaryMethod {
    ExactSolve,
    PowerIteration,
}

/// Left fixed point `πS = π` with `Σπ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryDistribution<T> {
    pub values: Vec<T>,
    pub method: StationaryMethod,
    /// `‖πS − π‖∞`; zero for the exact solve.
    pub residual: f64,
    pub iterations: usize,
}

/// Splits a non-negative premagic matrix into its row-stochastic transition
/// matrix `s_ij = m_ij / n_i` and node throughputs `n_i`.
pub fn to_row_stochastic<T: Scalar>(
    m: &SquareMatrix<T>,
) -> Result<(StochasticMatrix<T>, NodeThroughputs<T>)> {
    m.ensure_non_negative()?;
    let sums = m.row_sums().values;
    if let Some(node) = sums.iter().position(Zero::is_zero) {
        return Err(Error::DanglingNode { node });
    }
    m.ensure_premagic(m.default_tolerance())?;
    let s = SquareMatrix::from_fn(m.order(), |i, j| m.get(i, j).clone() / sums[i].clone());
    Ok((StochasticMatrix::new(s)?, NodeThroughputs::new(sums)?))
}

/// Rebuilds `m_ij = n_i s_ij`.
///
/// The product is premagic only when `nᵀS = nᵀ`, so that condition is
/// checked first (exactly for rationals, to `1e-9` relative for floats).
pub fn premagic_from_stochastic<T: Scalar>(
    s: &StochasticMatrix<T>,
    n: &NodeThroughputs<T>,
) -> Result<SquareMatrix<T>> {
    let values = n.values();
    if values.len() != s.order() {
        return Err(Error::DimensionMismatch {
            expected: s.order(),
            found: values.len(),
        });
    }
    let inflow = s.left_multiply(values);
    let scale = values.iter().map(Scalar::to_f64).fold(0.0, f64::max);
    let tol = if T::EXACT { 0.0 } else { DEFAULT_REL_TOL * scale };
    let mut worst: Option<(usize, T)> = None;
    for (j, (a, b)) in inflow.iter().zip(values).enumerate() {
        let gap = (a.clone() - b.clone()).abs();
        if !gap.within(tol) && worst.as_ref().is_none_or(|(_, w)| gap > *w) {
            worst = Some((j, gap));
        }
    }
    if let Some((node, gap)) = worst {
        return Err(Error::NotConserving {
            node,
            deviation: gap.to_field(),
        });
    }
    Ok(SquareMatrix::from_fn(s.order(), |i, j| {
        values[i].clone() * s.get(i, j).clone()
    }))
}

/// Divides every entry by the total `κ`; returns `(M/κ, κ)`.
///
/// The result sums to one and stays premagic. Its rows sum to `n_i/κ`, so
/// it is doubly stochastic only when all throughputs are equal.
pub fn normalize_total<T: Scalar>(m: &SquareMatrix<T>) -> Result<(SquareMatrix<T>, T)> {
    m.ensure_non_negative()?;
    m.ensure_premagic(m.default_tolerance())?;
    let kappa = m.total();
    if kappa.is_zero() {
        return Err(Error::Degenerate("matrix has zero total".into()));
    }
    let inv = T::one() / kappa.clone();
    Ok((m.scale(&inv), kappa))
}

/// `m_ij = κ s_ij`
pub fn scale_by_total<T: Scalar>(s: &SquareMatrix<T>, kappa: &T) -> Result<SquareMatrix<T>> {
    if !kappa.is_positive() {
        return Err(Error::InvalidArgument(format!("total {kappa} must be positive")));
    }
    Ok(s.scale(kappa))
}

/// Exact stationary distribution by elimination on `(Sᵀ − I)π = 0`
/// augmented with `Σπ = 1`.
pub fn stationary_exact(s: &StochasticMatrix<Rational>) -> Result<StationaryDistribution<Rational>> {
    support_connectivity(s.matrix()).require_strongly_connected()?;
    let n = s.order();
    // n balance equations plus normalization, each with an RHS column.
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rational> = (0..n)
                .map(|i| {
                    let v = s.get(i, j).clone();
                    if i == j {
                        v - Rational::one()
                    } else {
                        v
                    }
                })
                .collect();
            row.push(Rational::zero());
            row
        })
        .collect();
    rows.push(vec![Rational::one(); n + 1]);

    let pivots = linalg::row_reduce(&mut rows, n + 1, 0.0);
    // Irreducible chains have a unique stationary vector, so the system
    // has full column rank and is consistent.
    assert!(
        pivots.len() == n && pivots.iter().all(|&c| c < n),
        "irreducible chain produced a singular stationary system"
    );
    let values: Vec<Rational> = (0..n).map(|i| rows[i][n].clone()).collect();
    debug_assert_eq!(s.left_multiply(&values), values);
    Ok(StationaryDistribution {
        values,
        method: StationaryMethod::ExactSolve,
        residual: 0.0,
        iterations: 0,
    })
}

/// Plain power iteration `π ← πS` from the uniform vector.
///
/// Periodic chains can oscillate forever; they report a convergence error
/// and should use [`stationary_exact`].
pub fn stationary_power(
    s: &StochasticMatrix<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<StationaryDistribution<f64>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    support_connectivity(s.matrix()).require_strongly_connected()?;
    let n = s.order();
    let mut pi = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for iteration in 0..=max_iters {
        let mut next = s.left_multiply(&pi);
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        residual = next
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            return Ok(StationaryDistribution {
                values: pi,
                method: StationaryMethod::PowerIteration,
                residual,
                iterations: iteration,
            });
        }
        pi = next;
    }
    Err(Error::Convergence {
        iterations: max_iters,
        residual,
    })
}

/// Random irreducible rational chain of the given order.
///
/// The support always contains the cycle `0 → 1 → … → 0` plus random extra
/// edges; with `aperiodic` every node also gets a self-loop. Weights are
/// random integers in `1..=9` before row normalization.
pub fn random_irreducible_stochastic(
    order: usize,
    seed: u64,
    aperiodic: bool,
) -> StochasticMatrix<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density: f64 = rng.random_range(0.0..0.6);
    let weights = SquareMatrix::from_fn(order, |i, j| {
        let on_cycle = j == (i + 1) % order;
        let on_loop = aperiodic && i == j;
        if on_cycle || on_loop || rng.random_bool(density) {
            Rational::from_i64(rng.random_range(1..=9))
        } else {
            Rational::zero()
        }
    });
    let sums = weights.row_sums().values;
    let s = SquareMatrix::from_fn(order, |i, j| weights.get(i, j) / &sums[i]);
    StochasticMatrix::new(s).expect("rows normalized exactly")
}
