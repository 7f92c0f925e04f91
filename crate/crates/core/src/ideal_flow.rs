//! Ideal flow matrices: the premagic flow `diag(π)·S` of an irreducible
//! chain, normalized by its smallest nonzero link flow.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::support_connectivity;
use crate::markov::{stationary_exact, StochasticMatrix};
use crate::matrix::SquareMatrix;
use crate::scalar::{lcm_of_denominators, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scaling {
    /// Smallest nonzero entry is one.
    MinScaled,
    /// Scaled to a chosen total κ.
    TotalScaled,
    Raw,
}

/// Non-negative premagic matrix with strongly connected support.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealFlowMatrix<T> {
    matrix: SquareMatrix<T>,
    kappa: T,
    scaling: Scaling,
}

impl<T: Scalar> IdealFlowMatrix<T> {
    /// Validates non-negativity, the premagic property and strong
    /// connectivity of the support.
    pub fn new(matrix: SquareMatrix<T>, scaling: Scaling) -> Result<Self> {
        matrix.ensure_non_negative()?;
        matrix.ensure_premagic(matrix.default_tolerance())?;
        support_connectivity(&matrix).require_strongly_connected()?;
        let kappa = matrix.total();
        if kappa.is_zero() {
            return Err(Error::Degenerate("flow matrix is all zero".into()));
        }
        Ok(Self {
            matrix,
            kappa,
            scaling,
        })
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> SquareMatrix<T> {
        self.matrix
    }

    /// Total flow `κ = ΣΣ f_ij`.
    pub fn kappa(&self) -> &T {
        &self.kappa
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    /// Node throughputs (row sums, equal to column sums).
    pub fn throughputs(&self) -> Vec<T> {
        self.matrix.row_sums().values
    }
}

/// `f_ij = π_i · s_ij`: row sums are `π`, column sums are `πS = π`.
pub fn raw_flow<T: Scalar>(s: &StochasticMatrix<T>, pi: &[T]) -> SquareMatrix<T> {
    SquareMatrix::from_fn(s.order(), |i, j| pi[i].clone() * s.get(i, j).clone())
}

/// The unscaled flow `diag(π)·S` with `Σ f = 1`.
pub fn raw_ideal_flow(s: &StochasticMatrix<Rational>) -> Result<IdealFlowMatrix<Rational>> {
    let pi = stationary_exact(s)?;
    IdealFlowMatrix::new(raw_flow(s, &pi.values), Scaling::Raw)
}

/// The ideal flow of an irreducible chain, min-scaled.
pub fn ideal_flow_from_stochastic(
    s: &StochasticMatrix<Rational>,
) -> Result<IdealFlowMatrix<Rational>> {
    let raw = raw_ideal_flow(s)?;
    let (scaled, _) = min_scale(raw.matrix())?;
    IdealFlowMatrix::new(scaled, Scaling::MinScaled)
}

/// Divides by the smallest nonzero entry; zeros are structural and do not
/// take part in the minimum. Returns `(scaled, divisor)`.
pub fn min_scale<T: Scalar>(m: &SquareMatrix<T>) -> Result<(SquareMatrix<T>, T)> {
    m.ensure_non_negative()?;
    let divisor = m
        .entries()
        .iter()
        .filter(|v| !v.is_zero())
        .fold(None::<&T>, |min, v| match min {
            Some(cur) if cur <= v => Some(cur),
            _ => Some(v),
        })
        .cloned()
        .ok_or_else(|| Error::Degenerate("matrix has no nonzero entry".into()))?;
    let scaled = m.map(|v| v.clone() / divisor.clone());
    Ok((scaled, divisor))
}

/// Whole-number form of a rational flow.
#[derive(Clone, Debug, PartialEq)]
pub struct WholeNumberFlow {
    /// Every entry has denominator one.
    pub matrix: SquareMatrix<Rational>,
    /// LCM of the entry denominators; the smallest integralizing factor.
    pub multiplier: BigInt,
}

impl WholeNumberFlow {
    pub fn integer_entries(&self) -> Vec<Vec<BigInt>> {
        self.matrix
            .rows()
            .map(|r| r.iter().map(|v| v.numer().clone()).collect())
            .collect()
    }
}

/// Multiplies by the LCM of all denominators.
pub fn to_whole_numbers(f: &IdealFlowMatrix<Rational>) -> WholeNumberFlow {
    let multiplier = lcm_of_denominators(f.matrix().entries());
    let factor = Rational::from_integer(multiplier.clone());
    WholeNumberFlow {
        matrix: f.matrix().scale(&factor),
        multiplier,
    }
}

/// Rescales so the entries sum to `kappa_target`.
pub fn rescale_to_total<T: Scalar>(
    f: &IdealFlowMatrix<T>,
    kappa_target: &T,
) -> Result<IdealFlowMatrix<T>> {
    if !kappa_target.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "target total {kappa_target} must be positive"
        )));
    }
    let factor = kappa_target.clone() / f.kappa().clone();
    Ok(IdealFlowMatrix {
        matrix: f.matrix().scale(&factor),
        kappa: kappa_target.clone(),
        scaling: Scaling::TotalScaled,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeBalance<T> {
    /// Column sum.
    pub inflow: T,
    /// Row sum.
    pub outflow: T,
    pub conserved: bool,
}

/// Inflow and outflow at every node; all conserved iff the matrix is
/// premagic.
pub fn verify_node_conservation<T: Scalar>(m: &SquareMatrix<T>) -> Vec<NodeBalance<T>> {
    let tol = m.default_tolerance();
    m.col_sums()
        .values
        .into_iter()
        .zip(m.row_sums().values)
        .map(|(inflow, outflow)| NodeBalance {
            conserved: (inflow.clone() - outflow.clone()).within(tol),
            inflow,
            outflow,
        })
        .collect()
}
