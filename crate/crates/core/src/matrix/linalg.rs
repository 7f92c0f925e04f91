use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reduces `rows` (each of length `cols`) to reduced row echelon form in
/// place, pivoting on the entry of largest magnitude in each column.
/// Entries with `|v| <= zero_tol` count as zero. Returns the pivot columns.
pub(crate) fn row_reduce<T: Scalar>(rows: &mut [Vec<T>], cols: usize, zero_tol: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].within(zero_tol))
            .max_by(|&a, &b| {
                rows[a][c]
                    .abs()
                    .partial_cmp(&rows[b][c].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - factor.clone() * pv.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn invert<T: Scalar>(m: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
    let n = m.order();
    let mut rows: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            row
        })
        .collect();
    let zero_tol = if T::EXACT {
        0.0
    } else {
        1e-13 * m.norm_inf().to_f64()
    };
    let pivots = row_reduce(&mut rows, n, zero_tol);
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    Ok(SquareMatrix::from_fn(n, |i, j| rows[i][n + j].clone()))
}
