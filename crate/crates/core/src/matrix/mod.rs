//! Dense square matrices over a [`Scalar`] domain, together with the
//! premagic predicates and the operations under which premagic matrices
//! are closed.

pub(crate) mod linalg;
mod premagic;
mod random;

pub use premagic::{Orientation, Premagic2x2Report, SumVector};
pub use random::{random_irreducible_premagic, random_permutation, random_premagic};

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Dense `n × n` matrix stored row-major. The order is always at least 1.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix<T> {
    order: usize,
    entries: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.entries.chunks(self.order))
            .finish()
    }
}

impl<T: Scalar> fmt::Display for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let fields: Vec<String> = row.iter().map(Scalar::to_field).collect();
            writeln!(f, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

impl<T> SquareMatrix<T> {
    /// Builds a matrix from rows, rejecting empty or ragged/non-square input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::Empty);
        }
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != order {
                return Err(Error::NotSquare {
                    row: i,
                    found: row.len(),
                    expected: order,
                });
            }
            entries.extend(row);
        }
        Ok(Self { order, entries })
    }

    /// # Panics
    /// If `order == 0`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(order > 0, "matrix order must be positive");
        let entries = (0..order * order).map(|k| f(k / order, k % order)).collect();
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i < self.order && j < self.order, "index ({i}, {j}) out of range");
        &self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.order)
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Result<Self> {
        self.check_order(other.order)?;
        Ok(Self {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    fn check_order(&self, found: usize) -> Result<()> {
        if found == self.order {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.order,
                found,
            })
        }
    }
}

impl<T: Scalar> SquareMatrix<T> {
    /// Convenience constructor from a fixed-size integer array.
    pub fn from_ints<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| T::from_i64(rows[i][j]))
    }

    pub fn zeros(order: usize) -> Self {
        Self::from_fn(order, |_, _| T::zero())
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// The matrix of ones, `J`.
    pub fn ones(order: usize) -> Self {
        Self::from_fn(order, |_, _| T::one())
    }

    pub fn diagonal(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Self::from_fn(values.len(), |i, j| {
            if i == j {
                values[i].clone()
            } else {
                T::zero()
            }
        }))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_non_negative(&self) -> bool {
        self.entries.iter().all(|v| !v.is_negative())
    }

    /// First negative entry as a domain error.
    pub fn ensure_non_negative(&self) -> Result<()> {
        match self.entries.iter().position(|v| v.is_negative()) {
            None => Ok(()),
            Some(k) => Err(Error::NegativeEntry {
                row: k / self.order,
                col: k % self.order,
                value: self.entries[k].to_field(),
            }),
        }
    }

    /// Sum of all entries (the total flow κ for a flow matrix).
    pub fn total(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn subtract(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    /// Entrywise (direct) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    /// `M + kJ`; pass a negative `k` to shift down.
    pub fn shift(&self, k: &T) -> Self {
        self.map(|v| v.clone() + k.clone())
    }

    /// `M + kI`.
    pub fn add_scaled_identity(&self, k: &T) -> Self {
        let mut out = self.clone();
        for i in 0..self.order {
            out.entries[i * self.order + i] = out.entries[i * self.order + i].clone() + k.clone();
        }
        out
    }

    /// Adds `values[i]` to diagonal entry `i`.
    pub fn add_diagonal(&self, values: &[T]) -> Result<Self> {
        self.check_order(values.len())?;
        let mut out = self.clone();
        for (i, v) in values.iter().enumerate() {
            let k = i * self.order + i;
            out.entries[k] = out.entries[k].clone() + v.clone();
        }
        Ok(out)
    }

    /// `M − diag(M)`.
    pub fn strip_diagonal(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.order {
            out.entries[i * self.order + i] = T::zero();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_order(other.order)?;
        let n = self.order;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).fold(T::zero(), |acc, k| {
                acc + self.get(i, k).clone() * other.get(k, j).clone()
            })
        }))
    }

    /// `Σ coeffs[k] · matrices[k]`.
    pub fn linear_combination(coeffs: &[T], matrices: &[Self]) -> Result<Self> {
        if coeffs.len() != matrices.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for {} matrices",
                coeffs.len(),
                matrices.len()
            )));
        }
        let first = matrices.first().ok_or(Error::Empty)?;
        let mut acc = Self::zeros(first.order);
        for (k, m) in coeffs.iter().zip(matrices) {
            acc = acc.add(&m.scale(k))?;
        }
        Ok(acc)
    }

    /// `PᵀMP`: simultaneous relabelling of rows and columns, so that entry
    /// `(i, j)` moves to `(p(i), p(j))`.
    pub fn permute(&self, p: &PermutationMatrix) -> Result<Self> {
        self.check_order(p.order())?;
        let inverse = p.inverse();
        Ok(Self::from_fn(self.order, |a, b| {
            self.get(inverse.image(a), inverse.image(b)).clone()
        }))
    }

    /// Returns `(B, A)` with `B = (C + Cᵀ)/2` and `A = (C − Cᵀ)/2`.
    pub fn symmetric_antisymmetric_parts(&self) -> (Self, Self) {
        let t = self.transpose();
        let sym = self.map_pair(&t, |a, b| (a.clone() + b.clone()).half());
        let anti = self.map_pair(&t, |a, b| (a.clone() - b.clone()).half());
        (sym, anti)
    }

    /// `A ⊙ Aᵀ`; always symmetric with squared diagonal.
    pub fn hadamard_with_transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(i, j).clone() * self.get(j, i).clone())
    }

    fn map_pair(&self, other: &Self, f: impl FnMut(&T, &T) -> T) -> Self {
        self.zip_with(other, f).expect("same order")
    }
}

impl SquareMatrix<Rational> {
    pub fn to_f64(&self) -> SquareMatrix<f64> {
        self.map(Scalar::to_f64)
    }

    /// True when every entry has denominator one.
    pub fn is_integral(&self) -> bool {
        use num_traits::One;
        self.entries.iter().all(|v| v.denom().is_one())
    }
}

/// `A·Aᵀ` for a rectangular `r × c` matrix given as rows; the result is
/// `r × r`, symmetric, hence premagic.
pub fn gram_product<T: Scalar>(rows: &[Vec<T>]) -> Result<SquareMatrix<T>> {
    let cols = rows.first().ok_or(Error::Empty)?.len();
    if cols == 0 {
        return Err(Error::InvalidArgument("matrix has no columns".into()));
    }
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::NotSquare {
            row,
            found: r.len(),
            expected: cols,
        });
    }
    Ok(SquareMatrix::from_fn(rows.len(), |i, j| {
        rows[i]
            .iter()
            .zip(&rows[j])
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }))
}

/// A permutation matrix stored as the bijection `i ↦ image(i)`; the dense
/// form has a one at `(i, image(i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationMatrix {
    images: Vec<usize>,
}

impl PermutationMatrix {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Empty);
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &j in &images {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(order: usize) -> Self {
        Self {
            images: (0..order).collect(),
        }
    }

    /// Transposition of `a` and `b`.
    pub fn swap(order: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..order).collect();
        if a >= order || b >= order {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                node_count: order,
            });
        }
        images.swap(a, b);
        Self::new(images)
    }

    pub fn order(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    pub fn to_dense<T: Scalar>(&self) -> SquareMatrix<T> {
        SquareMatrix::from_fn(self.order(), |i, j| {
            if self.images[i] == j {
                T::one()
            } else {
                T::zero()
            }
        })
    }
}
