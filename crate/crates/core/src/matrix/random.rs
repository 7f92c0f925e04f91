//! Seeded generators of premagic test inputs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PermutationMatrix, SquareMatrix};
use crate::scalar::Scalar;

/// Uniformly random permutation of `0..order`.
pub fn random_permutation(order: usize, rng: &mut impl Rng) -> PermutationMatrix {
    let mut images: Vec<usize> = (0..order).collect();
    images.shuffle(rng);
    PermutationMatrix::new(images).expect("shuffle yields a permutation")
}

/// A non-negative premagic matrix of the given order, generally neither
/// symmetric nor of constant row sum.
///
/// Built as a sum of random cycle flows: a weight `a/b` (`a ∈ 1..=9`,
/// `b ∈ 1..=4`) is added along each edge of a random directed cycle through
/// 1 to `order` distinct nodes (a 1-cycle is a self-loop). Every cycle adds
/// the same amount to the in- and outflow of each node it visits.
pub fn random_premagic<T: Scalar>(order: usize, seed: u64) -> SquareMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = rng.random_range(1..=order + 2);
    let mut acc = SquareMatrix::zeros(order);
    for _ in 0..terms {
        let len = rng.random_range(1..=order);
        let mut nodes: Vec<usize> = (0..order).collect();
        let (cycle, _) = nodes.partial_shuffle(&mut rng, len);
        let weight = T::from_ratio(rng.random_range(1..=9), rng.random_range(1..=4));
        acc = add_cycle(&acc, cycle, weight);
    }
    acc
}

/// Like [`random_premagic`] but always includes the cycle
/// `0 → 1 → … → n−1 → 0` with positive weight, so the support is strongly
/// connected.
pub fn random_irreducible_premagic<T: Scalar>(order: usize, seed: u64) -> SquareMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let base = random_premagic::<T>(order, seed);
    let weight = T::from_ratio(rng.random_range(1..=9), rng.random_range(1..=4));
    let nodes: Vec<usize> = (0..order).collect();
    add_cycle(&base, &nodes, weight)
}

fn add_cycle<T: Scalar>(m: &SquareMatrix<T>, nodes: &[usize], weight: T) -> SquareMatrix<T> {
    let mut next = vec![None; m.order()];
    for (k, &v) in nodes.iter().enumerate() {
        next[v] = Some(nodes[(k + 1) % nodes.len()]);
    }
    SquareMatrix::from_fn(m.order(), |i, j| {
        if next[i] == Some(j) {
            m.get(i, j).clone() + weight.clone()
        } else {
            m.get(i, j).clone()
        }
    })
}
