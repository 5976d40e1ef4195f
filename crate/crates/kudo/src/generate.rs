//! Seeded random instances for the verification suites.

use std::sync::Arc;

use kudo_core::kudo::PartitionSequence;
use kudo_core::partition::Partition;
use kudo_core::space::{Density, FiniteSpace};
use kudo_core::walk::harmonic::StepLaw;
use kudo_core::walk::word::{inverse_letter, Letter, Word};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

/// A space with `1..=max_atoms` atoms and masses drawn from `[0.05, 1]`.
pub fn space<R: Rng>(rng: &mut R, max_atoms: usize) -> Arc<FiniteSpace> {
    let n = rng.random_range(1..=max_atoms);
    space_of_size(rng, n)
}

pub fn space_of_size<R: Rng>(rng: &mut R, n: usize) -> Arc<FiniteSpace> {
    let masses = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let atoms = (0..n).map(|i| format!("x{i}")).collect();
    FiniteSpace::new(atoms, masses, true).expect("positive masses")
}

/// A density with some exact zeros and a spread of magnitudes.
pub fn density<R: Rng>(rng: &mut R, space: &Arc<FiniteSpace>) -> Density {
    loop {
        let w: Vec<f64> = (0..space.len())
            .map(|_| match rng.random_range(0..5) {
                0 => 0.0,
                1 => rng.random_range(0.0..10.0),
                _ => rng.random_range(0.0..2.0),
            })
            .collect();
        if let Ok(f) = Density::normalized(space.clone(), w) {
            return f;
        }
    }
}

/// Raw values in `[0.5, 2]`, normalised, so the density lies in `[1/4, 4]`.
pub fn bounded_density<R: Rng>(rng: &mut R, space: &Arc<FiniteSpace>) -> Density {
    let w = (0..space.len()).map(|_| rng.random_range(0.5..=2.0)).collect();
    Density::normalized(space.clone(), w).expect("positive weights")
}

/// A partition with a random number of labels.
pub fn partition<R: Rng>(rng: &mut R, space: &Arc<FiniteSpace>) -> Partition {
    let n = space.len();
    let k = rng.random_range(1..=n);
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    Partition::from_labels(space.clone(), &labels).expect("labels match the space")
}

/// Preperiod of length `0..=2`, period of length `1..=max_period`.
pub fn sequence<R: Rng>(rng: &mut R, space: &Arc<FiniteSpace>, max_period: usize) -> PartitionSequence {
    let pre = (0..rng.random_range(0..=2)).map(|_| partition(rng, space)).collect();
    let period = (0..rng.random_range(1..=max_period)).map(|_| partition(rng, space)).collect();
    PartitionSequence::new(pre, period).expect("one space, nonempty period")
}

/// Test function with values in `[-1, 1]`.
pub fn signed_function<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Step law on `2k` letters with weights drawn from `[0.2, 1]`.
pub fn step_law<R: Rng>(rng: &mut R, k: usize) -> StepLaw {
    let w: Vec<f64> = (0..2 * k).map(|_| rng.random_range(0.2..=1.0)).collect();
    let total: f64 = w.iter().sum();
    StepLaw::new(k, w.into_iter().map(|v| v / total).collect()).expect("positive weights")
}

/// Reduced word of length `len` in `F_k`.
pub fn word<R: Rng>(rng: &mut R, k: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let x = rng.random_range(0..2 * k) as Letter;
        if letters.last().map_or(true, |&y| inverse_letter(y) != x) {
            letters.push(x);
        }
    }
    Word::from_letters(letters)
}
