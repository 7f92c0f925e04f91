//! Seeded generators and brute-force oracles shared by the integration tests.
//!
//! Nothing here calls into the library's own generators, so the tests do not
//! check the library against itself.

#![allow(dead_code, clippy::needless_range_loop)]

use idealflow_core::{Rational, SquareMatrix};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type M = SquareMatrix<Rational>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    q(rng.random_range(-9..=9), rng.random_range(1..=6))
}

pub fn positive_rational(rng: &mut impl Rng) -> Rational {
    q(rng.random_range(1..=9), rng.random_range(1..=6))
}

pub fn shuffled(order: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..order).collect();
    p.shuffle(rng);
    p
}

/// Weighted sum of permutation matrices: every row and column sums to the
/// total weight.
fn permutation_sum(order: usize, rng: &mut impl Rng, signed: bool) -> Vec<Vec<Rational>> {
    let mut rows = vec![vec![Rational::zero(); order]; order];
    for _ in 0..rng.random_range(1..=order + 2) {
        let w = if signed { small_rational(rng) } else { positive_rational(rng) };
        for (i, j) in shuffled(order, rng).into_iter().enumerate() {
            rows[i][j] += w.clone();
        }
    }
    rows
}

/// Premagic with signed entries: permutation sum plus a symmetric part plus
/// a free diagonal.
pub fn signed_premagic(order: usize, rng: &mut impl Rng) -> M {
    let mut rows = permutation_sum(order, rng, true);
    for i in 0..order {
        rows[i][i] += small_rational(rng);
        for j in i + 1..order {
            let v = small_rational(rng);
            rows[i][j] += v.clone();
            rows[j][i] += v;
        }
    }
    M::from_rows(rows).unwrap()
}

/// Adds `w` along the directed cycle through `nodes`.
fn add_cycle(rows: &mut [Vec<Rational>], nodes: &[usize], w: &Rational) {
    for (k, &v) in nodes.iter().enumerate() {
        rows[v][nodes[(k + 1) % nodes.len()]] += w.clone();
    }
}

/// Non-negative premagic with every row sum positive: a random cycle-flow
/// sum plus one cycle through every node in random order.
pub fn nonneg_premagic(order: usize, rng: &mut impl Rng) -> M {
    let mut rows = vec![vec![Rational::zero(); order]; order];
    add_cycle(&mut rows, &shuffled(order, rng), &positive_rational(rng));
    for _ in 0..rng.random_range(0..=order + 2) {
        let len = rng.random_range(1..=order);
        let nodes = shuffled(order, rng);
        add_cycle(&mut rows, &nodes[..len], &positive_rational(rng));
    }
    M::from_rows(rows).unwrap()
}

/// Non-negative premagic whose support contains the cycle `i → i+1`.
pub fn irreducible_premagic(order: usize, rng: &mut impl Rng) -> M {
    let base = nonneg_premagic(order, rng);
    let mut rows: Vec<Vec<Rational>> = base.rows().map(<[_]>::to_vec).collect();
    add_cycle(&mut rows, &(0..order).collect::<Vec<_>>(), &positive_rational(rng));
    M::from_rows(rows).unwrap()
}

pub fn arbitrary(order: usize, rng: &mut impl Rng) -> M {
    SquareMatrix::from_fn(order, |_, _| small_rational(rng))
}

pub fn symmetric(order: usize, rng: &mut impl Rng) -> M {
    let a = arbitrary(order, rng);
    SquareMatrix::from_fn(order, |i, j| a.get(i.min(j), i.max(j)).clone())
}

/// Row sums equal column sums, by explicit loops.
pub fn premagic_oracle(m: &M) -> bool {
    let n = m.order();
    (0..n).all(|i| {
        let row: Rational = (0..n).map(|j| m.get(i, j).clone()).sum();
        let col: Rational = (0..n).map(|j| m.get(j, i).clone()).sum();
        row == col
    })
}

pub fn identity_oracle(m: &M) -> bool {
    let n = m.order();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let e = m.get(i, j);
            if i == j { e.is_one() } else { e.is_zero() }
        })
    })
}

/// Transitive closure by Floyd–Warshall; strongly connected iff every
/// pair reaches every other.
pub fn strongly_connected_oracle(order: usize, edges: &[(usize, usize)]) -> bool {
    let mut reach = vec![vec![false; order]; order];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..order {
        for i in 0..order {
            if reach[i][k] {
                for j in 0..order {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

/// Same-component relation from the closure: `i ~ j` iff each reaches the other.
pub fn mutual_reachability(order: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut reach = vec![vec![false; order]; order];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..order {
        for i in 0..order {
            for j in 0..order {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    (0..order)
        .map(|i| (0..order).map(|j| reach[i][j] && reach[j][i]).collect())
        .collect()
}

/// Left eigenvector of a float stochastic matrix by power iteration on the
/// lazy chain `(I + S)/2`, which is aperiodic whenever `S` is irreducible.
pub fn lazy_power_stationary(s: &SquareMatrix<f64>, tol: f64) -> Vec<f64> {
    let n = s.order();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..1_000_000 {
        let mut next = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                next[j] += pi[i] * s.get(i, j);
            }
        }
        let next: Vec<f64> = next.iter().zip(&pi).map(|(a, b)| 0.5 * (a + b)).collect();
        let delta = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        pi = next;
        if delta < tol {
            break;
        }
    }
    pi
}
