//! Floating-point eigen-analysis of premagic matrices and numerical probes
//! of three open statements about their spectra.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::support_connectivity;
use crate::matrix::{random_irreducible_premagic, random_premagic, SquareMatrix};

/// Spectrum shift used by [`dominant_eigenpair`]; iterating on `M + I`
/// breaks the tie between `λ` and `−λ` on periodic supports.
pub const POWER_SHIFT: f64 = 1.0;

/// Dominant eigenvalue with a unit 2-norm, non-negative eigenvector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPair {
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
    /// `‖Mv − λv‖∞`
    pub residual: f64,
    pub iterations: usize,
}

fn mat_vec(m: &SquareMatrix<f64>, v: &[f64]) -> Vec<f64> {
    m.rows()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn two_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Power iteration on `M + I` for a non-negative matrix with strongly
/// connected support.
///
/// Stops once `‖Mv − λv‖∞ ≤ tol`, where `λ = vᵀMv` is the Rayleigh
/// quotient of the current unit iterate.
pub fn dominant_eigenpair(m: &SquareMatrix<f64>, tol: f64, max_iters: usize) -> Result<EigenPair> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    m.ensure_non_negative()?;
    support_connectivity(m).require_strongly_connected()?;
    let n = m.order();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut residual = f64::INFINITY;
    for iteration in 0..=max_iters {
        let mv = mat_vec(m, &v);
        let lambda: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        residual = mv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
            return Ok(EigenPair {
                eigenvalue: lambda,
                eigenvector: v.iter().map(|x| sign * x).collect(),
                residual,
                iterations: iteration,
            });
        }
        let mut next: Vec<f64> = mv.iter().zip(&v).map(|(a, b)| a + POWER_SHIFT * b).collect();
        let norm = two_norm(&next);
        if norm == 0.0 {
            return Err(Error::Degenerate("iterate vanished".into()));
        }
        next.iter_mut().for_each(|x| *x /= norm);
        v = next;
    }
    Err(Error::Convergence {
        iterations: max_iters,
        residual,
    })
}

/// Outcome of assembling all eigenvectors of a real matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenvectorRank {
    pub order: usize,
    pub rank: usize,
    /// Smallest over largest singular value of the eigenvector matrix;
    /// zero when fewer than `order` independent eigenvectors were found.
    pub singular_ratio: f64,
    pub eigenvalues: Vec<(f64, f64)>,
}

impl EigenvectorRank {
    pub fn full_rank(&self) -> bool {
        self.rank == self.order
    }
}

/// Singular values below `n · σ_max · ε · RANK_FACTOR` count as zero.
const RANK_FACTOR: f64 = 1e6;
/// Eigenvalues closer than this (relative to `‖M‖_F`) are treated as one
/// repeated eigenvalue.
const CLUSTER_TOL: f64 = 1e-7;

/// Computes every eigenpair of `m` (real Schur form for the eigenvalues,
/// null spaces of `M − λI` by SVD for the eigenvectors) and the numerical
/// rank of the resulting eigenvector matrix.
pub fn eigenvector_rank(m: &SquareMatrix<f64>) -> Result<EigenvectorRank> {
    let n = m.order();
    let a = DMatrix::from_row_slice(n, n, m.entries());
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), f64::EPSILON, 10_000)
        .ok_or(Error::Convergence {
            iterations: 10_000,
            residual: f64::NAN,
        })?;
    let eigenvalues: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();

    let mut clusters: Vec<Vec<Complex<f64>>> = Vec::new();
    for &lambda in &eigenvalues {
        match clusters
            .iter_mut()
            .find(|c| (c[0] - lambda).norm() <= CLUSTER_TOL * scale)
        {
            Some(c) => c.push(lambda),
            None => clusters.push(vec![lambda]),
        }
    }

    let ac: DMatrix<Complex<f64>> = a.map(|x| Complex::new(x, 0.0));
    let null_tol = n as f64 * scale * f64::EPSILON * RANK_FACTOR;
    let mut columns: Vec<nalgebra::DVector<Complex<f64>>> = Vec::new();
    for cluster in &clusters {
        let mean = cluster.iter().sum::<Complex<f64>>() / cluster.len() as f64;
        let shifted = &ac - DMatrix::<Complex<f64>>::identity(n, n) * mean;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested V");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
        let geometric = order
            .iter()
            .filter(|&&i| svd.singular_values[i] <= null_tol)
            .count()
            .clamp(1, cluster.len());
        for &i in order.iter().take(geometric) {
            columns.push(v_t.row(i).adjoint());
        }
    }

    let (rank, singular_ratio) = if columns.len() < n {
        (columns.len(), 0.0)
    } else {
        let v = DMatrix::from_columns(&columns);
        let sv = v.singular_values();
        let max = sv.max();
        let min = sv.min();
        let tol = n as f64 * max * f64::EPSILON * RANK_FACTOR;
        (sv.iter().filter(|&&s| s > tol).count(), min / max)
    };

    Ok(EigenvectorRank {
        order: n,
        rank,
        singular_ratio,
        eigenvalues: eigenvalues.iter().map(|c| (c.re, c.im)).collect(),
    })
}

/// Controls how test matrices are drawn for a conjecture sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorParams {
    pub min_order: usize,
    pub max_order: usize,
    pub seed: u64,
}

impl GeneratorParams {
    pub fn new(min_order: usize, max_order: usize, seed: u64) -> Result<Self> {
        if min_order == 0 || min_order > max_order {
            return Err(Error::InvalidArgument(format!(
                "invalid order range {min_order}..={max_order}"
            )));
        }
        Ok(Self {
            min_order,
            max_order,
            seed,
        })
    }

    /// `(order, seed)` of case `index`.
    pub fn case(&self, index: usize) -> (usize, u64) {
        let seed = splitmix64(self.seed.wrapping_add(index as u64));
        let span = (self.max_order - self.min_order + 1) as u64;
        (self.min_order + (seed % span) as usize, seed)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseDetail {
    pub case: usize,
    pub order: usize,
    pub seed: u64,
    pub consistent: bool,
    pub deviation: f64,
    pub metrics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub conjecture: u8,
    pub cases: usize,
    pub consistent: usize,
    pub worst_deviation: f64,
    pub details: Vec<CaseDetail>,
}

impl ConjectureReport {
    fn collect(conjecture: u8, details: Vec<CaseDetail>) -> Self {
        Self {
            conjecture,
            cases: details.len(),
            consistent: details.iter().filter(|d| d.consistent).count(),
            worst_deviation: details
                .iter()
                .map(|d| d.deviation)
                .fold(0.0, |a, b| if b.is_nan() || b > a { b } else { a }),
            details,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn run_cases(
    params: &GeneratorParams,
    cases: usize,
    check: impl Fn(usize, u64) -> Result<(bool, f64, BTreeMap<String, f64>)> + Sync,
) -> Vec<CaseDetail> {
    (0..cases)
        .into_par_iter()
        .map(|case| {
            let (order, seed) = params.case(case);
            match check(order, seed) {
                Ok((consistent, deviation, metrics)) => CaseDetail {
                    case,
                    order,
                    seed,
                    consistent,
                    deviation,
                    metrics,
                    error: None,
                },
                Err(e) => CaseDetail {
                    case,
                    order,
                    seed,
                    consistent: false,
                    deviation: f64::NAN,
                    metrics: BTreeMap::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn eigen_tol(m: &SquareMatrix<f64>) -> f64 {
    1e-12 * m.norm_inf().max(1.0)
}

const MAX_ITERS: usize = 1_000_000;

/// Perron bounds: `min row sum ≤ λ ≤ max row sum` (with float slack).
pub fn within_perron_bounds(m: &SquareMatrix<f64>, lambda: f64) -> bool {
    let sums = m.row_sums();
    let slack = 1e-9 * m.norm_inf().max(1.0);
    sums.min() - slack <= lambda && lambda <= sums.max() + slack
}

/// Records the 2-norm and Frobenius norm of the dominant eigenvector of
/// random non-negative irreducible premagic matrices. The eigenvector is
/// normalized to unit 2-norm, so this records what that normalization
/// gives rather than testing a scale-free property.
pub fn check_conjecture_1(params: &GeneratorParams, cases: usize) -> ConjectureReport {
    let details = run_cases(params, cases, |order, seed| {
        let m = random_irreducible_premagic::<f64>(order, seed);
        let pair = dominant_eigenpair(&m, eigen_tol(&m), MAX_ITERS)?;
        let two = two_norm(&pair.eigenvector);
        let frobenius = DMatrix::from_column_slice(order, 1, &pair.eigenvector).norm();
        let deviation = (two - 1.0).abs().max((frobenius - 1.0).abs());
        let mut metrics = BTreeMap::new();
        metrics.insert("two_norm".into(), two);
        metrics.insert("frobenius_norm".into(), frobenius);
        metrics.insert("eigenvalue".into(), pair.eigenvalue);
        metrics.insert("residual".into(), pair.residual);
        let perron = within_perron_bounds(&m, pair.eigenvalue);
        metrics.insert("perron_bounds".into(), if perron { 1.0 } else { 0.0 });
        Ok((deviation <= 1e-12 && perron, deviation, metrics))
    });
    ConjectureReport::collect(1, details)
}

/// Rank of the eigenvector matrix of random premagic matrices; a case is
/// consistent when the matrix is numerically diagonalizable.
pub fn check_conjecture_2(params: &GeneratorParams, cases: usize) -> ConjectureReport {
    let details = run_cases(params, cases, |order, seed| {
        let m = random_premagic::<f64>(order, seed);
        let r = eigenvector_rank(&m)?;
        let mut metrics = BTreeMap::new();
        metrics.insert("rank".into(), r.rank as f64);
        metrics.insert("singular_ratio".into(), r.singular_ratio);
        Ok((r.full_rank(), 1.0 - r.singular_ratio, metrics))
    });
    ConjectureReport::collect(2, details)
}

/// Relative tolerance for the eigenvalue scaling check.
pub const SCALING_TOL: f64 = 1e-9;

/// For each `k`, compares the dominant pair of `kM` with `(kλ, v)`.
/// Deviation is the worst of the relative eigenvalue error and the sine of
/// the angle between eigenvectors.
pub fn check_conjecture_3(params: &GeneratorParams, cases: usize, ks: &[f64]) -> ConjectureReport {
    let details = run_cases(params, cases, |order, seed| {
        if ks.iter().any(|k| k.is_nan() || *k <= 0.0) {
            return Err(Error::InvalidArgument("scaling factors must be positive".into()));
        }
        let m = random_irreducible_premagic::<f64>(order, seed);
        let base = dominant_eigenpair(&m, eigen_tol(&m), MAX_ITERS)?;
        let mut metrics = BTreeMap::new();
        metrics.insert("eigenvalue".into(), base.eigenvalue);
        let mut deviation: f64 = 0.0;
        for &k in ks {
            let scaled_m = m.scale(&k);
            let scaled = dominant_eigenpair(&scaled_m, eigen_tol(&scaled_m), MAX_ITERS)?;
            let rel = (scaled.eigenvalue - k * base.eigenvalue).abs() / (k * base.eigenvalue);
            let dot: f64 = scaled
                .eigenvector
                .iter()
                .zip(&base.eigenvector)
                .map(|(a, b)| a * b)
                .sum();
            let sine = scaled
                .eigenvector
                .iter()
                .zip(&base.eigenvector)
                .map(|(a, b)| (a - dot * b).powi(2))
                .sum::<f64>()
                .sqrt();
            metrics.insert(format!("k={k}:eigenvalue_rel_err"), rel);
            metrics.insert(format!("k={k}:vector_sine"), sine);
            deviation = deviation.max(rel).max(sine);
        }
        Ok((deviation <= SCALING_TOL, deviation, metrics))
    });
    ConjectureReport::collect(3, details)
}
