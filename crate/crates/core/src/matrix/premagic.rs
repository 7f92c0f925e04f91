use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, DEFAULT_REL_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `s₂ = Mj`
    RowSums,
    /// `s₁ᵀ = jᵀM`
    ColumnSums,
    /// `(M − Mᵀ)j`
    KernelResidual,
}

/// A length-`n` vector derived from a matrix of order `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SumVector<T> {
    pub values: Vec<T>,
    pub orientation: Orientation,
}

impl<T: Scalar> SumVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.within(tol))
    }

    pub fn max(&self) -> T {
        self.values
            .iter()
            .skip(1)
            .fold(self.values[0].clone(), |m, v| if *v > m { v.clone() } else { m })
    }

    pub fn min(&self) -> T {
        self.values
            .iter()
            .skip(1)
            .fold(self.values[0].clone(), |m, v| if *v < m { v.clone() } else { m })
    }
}

/// Closed-form facts about a 2×2 premagic matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Premagic2x2Report<T> {
    pub offdiag_equal: bool,
    /// `t = e₁ + e₂ = a + 2b + d`
    pub t: T,
    /// `ad − b²`
    pub det: T,
    /// `t + det = −b² + 2b + (a + d + ad)`
    pub identity_a_holds: bool,
    /// `e₁e₂ + det = c(a + d) + 2ad`
    pub identity_b_holds: bool,
    pub inverse: Option<SquareMatrix<T>>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn row_sums(&self) -> SumVector<T> {
        SumVector {
            values: self
                .rows()
                .map(|r| r.iter().fold(T::zero(), |acc, v| acc + v.clone()))
                .collect(),
            orientation: Orientation::RowSums,
        }
    }

    pub fn col_sums(&self) -> SumVector<T> {
        let mut values = vec![T::zero(); self.order()];
        for row in self.rows() {
            for (acc, v) in values.iter_mut().zip(row) {
                *acc = acc.clone() + v.clone();
            }
        }
        SumVector {
            values,
            orientation: Orientation::ColumnSums,
        }
    }

    /// `(M − Mᵀ)j`, computed directly from the antisymmetric part rather than
    /// from the sum vectors.
    pub fn antisymmetric_kernel_residual(&self) -> SumVector<T> {
        let n = self.order();
        SumVector {
            values: (0..n)
                .map(|i| {
                    (0..n).fold(T::zero(), |acc, j| {
                        acc + (self.get(i, j).clone() - self.get(j, i).clone())
                    })
                })
                .collect(),
            orientation: Orientation::KernelResidual,
        }
    }

    /// Row sums equal column sums to within `tol` (exactly when `tol == 0`).
    pub fn is_premagic(&self, tol: f64) -> bool {
        self.premagic_violation(tol).is_none()
    }

    /// [`Self::is_premagic`] with the domain's default tolerance: exact for
    /// rationals, `1e-9 · ‖M‖∞` for floats.
    pub fn is_premagic_default(&self) -> bool {
        self.is_premagic(self.default_tolerance())
    }

    pub fn default_tolerance(&self) -> f64 {
        if T::EXACT {
            0.0
        } else {
            DEFAULT_REL_TOL * self.norm_inf().to_f64()
        }
    }

    /// Errors with the worst node when the matrix is not premagic.
    pub fn ensure_premagic(&self, tol: f64) -> Result<()> {
        match self.premagic_violation(tol) {
            None => Ok(()),
            Some(node) => Err(Error::NotPremagic {
                node,
                row_sum: self.row_sums().values[node].to_field(),
                col_sum: self.col_sums().values[node].to_field(),
            }),
        }
    }

    fn premagic_violation(&self, tol: f64) -> Option<usize> {
        let rows = self.row_sums().values;
        let cols = self.col_sums().values;
        let mut worst: Option<(usize, T)> = None;
        for (i, (r, c)) in rows.into_iter().zip(cols).enumerate() {
            let gap = (r - c).abs();
            if !gap.within(tol) && worst.as_ref().is_none_or(|(_, w)| gap > *w) {
                worst = Some((i, gap));
            }
        }
        worst.map(|(i, _)| i)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        self.abs_entries().col_sums().max()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        self.abs_entries().row_sums().max()
    }

    fn abs_entries(&self) -> Self {
        self.map(|v| v.abs())
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        super::linalg::invert(self)
    }

    pub fn premagic_2x2_report(&self) -> Result<Premagic2x2Report<T>> {
        if self.order() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.order(),
            });
        }
        self.ensure_premagic(self.default_tolerance())?;
        let (a, b, c, d) = (
            self.get(0, 0).clone(),
            self.get(0, 1).clone(),
            self.get(1, 0).clone(),
            self.get(1, 1).clone(),
        );
        let two = T::from_i64(2);
        let e1 = a.clone() + b.clone();
        let e2 = b.clone() + d.clone();
        let t = a.clone() + two.clone() * b.clone() + d.clone();
        let det = a.clone() * d.clone() - b.clone() * b.clone();

        let lhs_a = t.clone() + det.clone();
        let rhs_a = -(b.clone() * b.clone())
            + two.clone() * b.clone()
            + (a.clone() + d.clone() + a.clone() * d.clone());
        let lhs_b = e1 * e2 + det.clone();
        let rhs_b = c.clone() * (a.clone() + d.clone()) + two * a.clone() * d.clone();

        let norm = self.norm_inf().to_f64();
        let singular_tol = if T::EXACT { 0.0 } else { DEFAULT_REL_TOL * norm * norm };
        let inverse = if det.within(singular_tol) {
            None
        } else {
            let inv = T::one() / det.clone();
            Some(Self::from_fn(2, |i, j| {
                let v = match (i, j) {
                    (0, 0) => d.clone(),
                    (1, 1) => a.clone(),
                    (0, 1) => -b.clone(),
                    _ => -c.clone(),
                };
                v * inv.clone()
            }))
        };

        Ok(Premagic2x2Report {
            offdiag_equal: b.approx_eq(&c),
            t,
            det,
            identity_a_holds: lhs_a.approx_eq(&rhs_a),
            identity_b_holds: lhs_b.approx_eq(&rhs_b),
            inverse,
        })
    }
}
