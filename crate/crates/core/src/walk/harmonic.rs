//! Nearest-neighbour step laws on `F_k`, the harmonic measure they induce on
//! the space of infinite reduced words, and its finite cylinder truncations.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::word::{count_reduced, inverse_letter, reduced_words, word_index, Letter, Word, MAX_RANK};
use crate::error::{Error, Result};
use crate::math::{abs, powi};
use crate::partition::unit;
use crate::space::FiniteSpace;

/// Tolerance on the total mass of a step law.
pub const LAW_SUM_TOL: f64 = 1e-12;
/// Stopping threshold of the hitting-probability iteration.
pub const HITTING_TOL: f64 = 1e-15;
pub const HITTING_MAX_ITER: usize = 100_000;
/// Largest cylinder space that will be materialised.
pub const MAX_CYLINDERS: usize = 1 << 22;

/// A probability on the `2k` letters, positive on each.
#[derive(Debug, Clone, PartialEq)]
pub struct StepLaw {
    k: usize,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
    uniform: bool,
}

impl StepLaw {
    pub fn uniform(k: usize) -> Result<Self> {
        check_rank(k)?;
        let mut law = Self::build(k, alloc::vec![1.0 / (2 * k) as f64; 2 * k]);
        law.uniform = true;
        Ok(law)
    }

    /// `probs[x]` is the probability of letter `x`.
    pub fn new(k: usize, probs: Vec<f64>) -> Result<Self> {
        check_rank(k)?;
        if probs.len() != 2 * k {
            return Err(Error::BadStepLaw(alloc::format!(
                "expected {} letter probabilities, got {}",
                2 * k,
                probs.len()
            )));
        }
        if let Some(x) = probs.iter().position(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::BadStepLaw(alloc::format!(
                "letter {} has probability {}",
                super::word::letter_char(x as Letter),
                probs[x]
            )));
        }
        let sum: f64 = probs.iter().sum();
        if abs(sum - 1.0) > LAW_SUM_TOL {
            return Err(Error::BadStepLaw(alloc::format!("probabilities sum to {sum}")));
        }
        let uniform = probs.iter().all(|&p| p == probs[0]);
        let mut law = Self::build(k, probs);
        law.uniform = uniform;
        Ok(law)
    }

    fn build(k: usize, probs: Vec<f64>) -> Self {
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        StepLaw {
            k,
            probs,
            cumulative,
            uniform: false,
        }
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: Letter) -> f64 {
        self.probs[x as usize]
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Draws one letter.
    pub fn sample<R: RngCore>(&self, rng: &mut R) -> Letter {
        let u = unit(rng) * self.cumulative[self.cumulative.len() - 1];
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.probs.len() - 1) as Letter
    }
}

fn check_rank(k: usize) -> Result<()> {
    if !(2..=MAX_RANK).contains(&k) {
        return Err(Error::BadStepLaw(alloc::format!("rank must lie in 2..={MAX_RANK}, got {k}")));
    }
    Ok(())
}

/// Harmonic measure `ν` of the walk, described by the hitting probabilities
/// `F(x)` = P(the walk from `e` ever visits `x`).
///
/// `ν([x_1 … x_n]) = F(x_1)⋯F(x_n) · (1 − F(x_n⁻¹)) / (1 − F(x_n) F(x_n⁻¹))`:
/// reach `x_1 … x_n`, then settle in the subtree below it, possibly after
/// excursions through its parent.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMeasure {
    k: usize,
    hit: Vec<f64>,
    uniform: bool,
}

impl HarmonicMeasure {
    /// Solves `F(x) = μ(x) + Σ_{y ≠ x} μ(y) F(y⁻¹) F(x)` by monotone iteration
    /// from zero; the uniform law uses `F ≡ 1/(2k − 1)` directly.
    pub fn new(law: &StepLaw) -> Result<Self> {
        let k = law.rank();
        let n = 2 * k;
        if law.is_uniform() {
            return Ok(HarmonicMeasure {
                k,
                hit: alloc::vec![1.0 / (n - 1) as f64; n],
                uniform: true,
            });
        }
        let mut hit = alloc::vec![0.0; n];
        for _ in 0..HITTING_MAX_ITER {
            let mut next = alloc::vec![0.0; n];
            let mut delta: f64 = 0.0;
            for x in 0..n {
                let back: f64 = (0..n)
                    .filter(|&y| y != x)
                    .map(|y| law.prob(y as Letter) * hit[inverse_letter(y as Letter) as usize])
                    .sum();
                next[x] = law.prob(x as Letter) + back * hit[x];
                delta = delta.max(abs(next[x] - hit[x]));
            }
            hit = next;
            if delta <= HITTING_TOL {
                return Ok(HarmonicMeasure { k, hit, uniform: false });
            }
        }
        Err(Error::NoConvergence(HITTING_MAX_ITER))
    }

    pub fn hitting(&self, x: Letter) -> f64 {
        self.hit[x as usize]
    }

    /// `ν` of the cylinder of rays starting with `letters` (which must be
    /// reduced). The empty prefix has mass 1.
    pub fn cylinder(&self, letters: &[Letter]) -> f64 {
        let Some(&last) = letters.last() else {
            return 1.0;
        };
        let n = letters.len();
        if self.uniform {
            let q = (2 * self.k - 1) as f64;
            return powi(q, -((n - 1) as i32)) / (2 * self.k) as f64;
        }
        let reach: f64 = letters.iter().map(|&x| self.hit[x as usize]).product();
        let up = self.hit[inverse_letter(last) as usize];
        reach * (1.0 - up) / (1.0 - self.hit[last as usize] * up)
    }
}

/// The finite space of depth-`L` cylinders with their harmonic masses.
#[derive(Debug, Clone)]
pub struct CylinderSpace {
    law: StepLaw,
    harmonic: HarmonicMeasure,
    depth: usize,
    words: Vec<Word>,
    space: Arc<FiniteSpace>,
}

impl CylinderSpace {
    pub fn new(law: StepLaw, depth: usize) -> Result<Self> {
        let harmonic = HarmonicMeasure::new(&law)?;
        Self::with_harmonic(law, harmonic, depth)
    }

    /// Reuses an already solved harmonic measure.
    pub fn with_harmonic(law: StepLaw, harmonic: HarmonicMeasure, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        let k = law.rank();
        let count = (1..=depth).try_fold(2 * k, |acc, d| {
            if d == 1 {
                Some(acc)
            } else {
                acc.checked_mul(2 * k - 1)
            }
        });
        match count {
            Some(c) if c <= MAX_CYLINDERS => {}
            _ => return Err(Error::TooManyCylinders(count.unwrap_or(usize::MAX))),
        }
        let words = reduced_words(k, depth);
        let atoms = words.iter().map(Word::to_text).collect();
        let masses: Vec<f64> = words.iter().map(|w| harmonic.cylinder(w.letters())).collect();
        // the harmonic masses of a full level sum to one only up to the
        // accuracy of the hitting probabilities
        let space = FiniteSpace::new(atoms, masses, !law.is_uniform())?;
        Ok(CylinderSpace {
            law,
            harmonic,
            depth,
            words,
            space,
        })
    }

    pub fn rank(&self) -> usize {
        self.law.rank()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn law(&self) -> &StepLaw {
        &self.law
    }

    pub fn harmonic(&self) -> &HarmonicMeasure {
        &self.harmonic
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Atom index of the cylinder containing rays that start with `letters`
    /// (at least `depth` letters, reduced).
    pub fn index_of(&self, letters: &[Letter]) -> usize {
        word_index(self.rank(), &letters[..self.depth])
    }

    /// Same space at another depth, sharing the harmonic measure.
    pub fn at_depth(&self, depth: usize) -> Result<CylinderSpace> {
        Self::with_harmonic(self.law.clone(), self.harmonic.clone(), depth)
    }

    pub fn expected_len(&self) -> usize {
        count_reduced(self.rank(), self.depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_masses() {
        let c = CylinderSpace::new(StepLaw::uniform(2).unwrap(), 1).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.space().masses().iter().all(|&m| m == 0.25));
        let c = CylinderSpace::new(StepLaw::uniform(2).unwrap(), 2).unwrap();
        assert_eq!(c.len(), 12);
        assert!(c.space().masses().iter().all(|&m| abs(m - 1.0 / 12.0) < 1e-17));
        let c = CylinderSpace::new(StepLaw::uniform(3).unwrap(), 1).unwrap();
        assert_eq!(c.len(), 6);
        assert!(c.space().masses().iter().all(|&m| abs(m - 1.0 / 6.0) < 1e-17));
    }

    #[test]
    fn general_formula_matches_uniform_closed_form() {
        // a law that is uniform but not flagged as such goes through the iteration
        let law = StepLaw::build(2, alloc::vec![0.25; 4]);
        let h = HarmonicMeasure::new(&law).unwrap();
        for x in 0..4 {
            assert!(abs(h.hitting(x) - 1.0 / 3.0) < 1e-13);
        }
        let u = HarmonicMeasure::new(&StepLaw::uniform(2).unwrap()).unwrap();
        for w in reduced_words(2, 3) {
            assert!(abs(h.cylinder(w.letters()) - u.cylinder(w.letters())) < 1e-13);
        }
    }

    #[test]
    fn skewed_law_is_consistent() {
        let law = StepLaw::new(2, alloc::vec![0.4, 0.1, 0.3, 0.2]).unwrap();
        let h = HarmonicMeasure::new(&law).unwrap();
        for depth in 1..=4 {
            let total: f64 = reduced_words(2, depth).iter().map(|w| h.cylinder(w.letters())).sum();
            assert!(abs(total - 1.0) < 1e-12, "depth {depth}: {total}");
        }
        // each cylinder splits into its children
        for w in reduced_words(2, 2) {
            let children: f64 = (0..4u8)
                .filter(|&x| w.last() != Some(inverse_letter(x)))
                .map(|x| {
                    let mut c = w.letters().to_vec();
                    c.push(x);
                    h.cylinder(&c)
                })
                .sum();
            assert!(abs(children - h.cylinder(w.letters())) < 1e-13);
        }
    }

    #[test]
    fn bad_laws() {
        assert!(StepLaw::new(2, alloc::vec![0.5, 0.5, 0.0, 0.0]).is_err());
        assert!(StepLaw::new(2, alloc::vec![0.3, 0.3, 0.3, 0.3]).is_err());
        assert!(StepLaw::new(2, alloc::vec![0.5, 0.5]).is_err());
        assert!(StepLaw::uniform(1).is_err());
        let law = StepLaw::uniform(2).unwrap();
        assert_eq!(CylinderSpace::new(law, 0).unwrap_err(), Error::ZeroDepth);
    }
}
