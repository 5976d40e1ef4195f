//! Sub-σ-algebras of a finite space, represented by the partition of atoms
//! that generates them.
//!
//! Because atoms have positive mass, two σ-algebras agree modulo null sets
//! exactly when their generating partitions agree, so structural equality of
//! [`Partition`] (in canonical form) is equality in the space of information.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::math::abs;
use crate::space::{ensure_same, Density, FiniteSpace};

/// Largest space on which the exhaustive signed-event sweep is attempted.
pub const MAX_EXHAUSTIVE_ATOMS: usize = 20;

/// A partition of the atoms of a [`FiniteSpace`].
///
/// Canonical form: blocks are ordered by their smallest atom and atoms are
/// sorted inside each block.
#[derive(Debug, Clone)]
pub struct Partition {
    space: Arc<FiniteSpace>,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.block_of == other.block_of && crate::space::same_space(&self.space, &other.space)
    }
}

impl Partition {
    /// Builds a partition from any per-atom labelling; atoms sharing a label
    /// share a block.
    pub fn from_labels<T: PartialEq>(space: Arc<FiniteSpace>, labels: &[T]) -> Result<Self> {
        if labels.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: labels.len(),
            });
        }
        let mut reps: Vec<&T> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for label in labels {
            let id = match reps.iter().position(|r| *r == label) {
                Some(id) => id,
                None => {
                    reps.push(label);
                    reps.len() - 1
                }
            };
            block_of.push(id);
        }
        Ok(Self::from_canonical_labels(space, block_of))
    }

    /// Labels already numbered in order of first appearance.
    fn from_canonical_labels(space: Arc<FiniteSpace>, block_of: Vec<usize>) -> Self {
        let count = block_of.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (atom, &b) in block_of.iter().enumerate() {
            blocks[b].push(atom);
        }
        Partition {
            space,
            block_of,
            blocks,
        }
    }

    /// Relabels arbitrary `usize` labels in order of first appearance.
    pub(crate) fn from_usize_labels(space: Arc<FiniteSpace>, labels: &[usize]) -> Self {
        let max = labels.iter().copied().max().unwrap_or(0);
        let mut map = vec![usize::MAX; max + 1];
        let mut next = 0;
        let block_of = labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        Self::from_canonical_labels(space, block_of)
    }

    /// Builds a partition from explicit blocks of atom indices.
    pub fn from_blocks(space: Arc<FiniteSpace>, blocks: &[Vec<usize>]) -> Result<Self> {
        let n = space.len();
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(alloc::format!("block {b} is empty")));
            }
            for &atom in block {
                if atom >= n {
                    return Err(Error::InvalidPartition(alloc::format!(
                        "atom index {atom} out of range"
                    )));
                }
                if labels[atom] != usize::MAX {
                    return Err(Error::InvalidPartition(alloc::format!(
                        "atom `{}` appears in two blocks",
                        space.atoms()[atom]
                    )));
                }
                labels[atom] = b;
            }
        }
        if let Some(atom) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(alloc::format!(
                "atom `{}` is not covered",
                space.atoms()[atom]
            )));
        }
        Ok(Self::from_usize_labels(space, &labels))
    }

    /// One block: the trivial σ-algebra.
    pub fn trivial(space: Arc<FiniteSpace>) -> Self {
        let n = space.len();
        Self::from_canonical_labels(space, vec![0; n])
    }

    /// Singletons: the full σ-algebra.
    pub fn discrete(space: Arc<FiniteSpace>) -> Self {
        let n = space.len();
        Self::from_canonical_labels(space, (0..n).collect())
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_masses(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.blocks.len()];
        for (atom, &b) in self.block_of.iter().enumerate() {
            out[b] += self.space.mass(atom);
        }
        out
    }

    /// Common refinement, generating `σ(P) ∨ σ(Q)`.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        ensure_same(&self.space, &other.space)?;
        let width = other.num_blocks();
        let labels: Vec<usize> = self
            .block_of
            .iter()
            .zip(&other.block_of)
            .map(|(p, q)| p * width + q)
            .collect();
        Ok(Self::from_usize_labels(self.space.clone(), &labels))
    }

    /// Finest partition generating `σ(P) ∩ σ(Q)`: connected components of
    /// the graph on atoms linking atoms that share a `P`-block or a `Q`-block.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        ensure_same(&self.space, &other.space)?;
        let mut uf = UnionFind::new(self.space.len());
        for block in self.blocks.iter().chain(&other.blocks) {
            for &atom in &block[1..] {
                uf.union(block[0], atom);
            }
        }
        let labels: Vec<usize> = (0..self.space.len()).map(|x| uf.find(x)).collect();
        Ok(Self::from_usize_labels(self.space.clone(), &labels))
    }

    /// **Direction:** `P.refines(Q)` is true iff `σ(Q) ⊆ σ(P)`, i.e. every
    /// block of `Q` is a union of blocks of `P` (`P` is the finer one).
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        ensure_same(&self.space, &other.space)?;
        Ok(self
            .blocks
            .iter()
            .all(|block| block.iter().all(|&x| other.block_of[x] == other.block_of[block[0]])))
    }

    /// `E_A(f)`: on each block the `ξ`-weighted average of `f`.
    pub fn cond_exp(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.space.check_len(f)?;
        let masses = self.space.masses();
        let mut sums = vec![0.0; self.blocks.len()];
        let mut weights = vec![0.0; self.blocks.len()];
        for (atom, &b) in self.block_of.iter().enumerate() {
            sums[b] += masses[atom] * f[atom];
            weights[b] += masses[atom];
        }
        Ok(self.block_of.iter().map(|&b| sums[b] / weights[b]).collect())
    }

    /// `E_A(f)` of a density, again a density.
    pub fn cond_exp_density(&self, f: &Density) -> Result<Density> {
        ensure_same(&self.space, f.space())?;
        let values = self.cond_exp(f.values())?;
        Ok(Density::from_parts(self.space.clone(), values))
    }

    /// `‖E_A(f)‖₁` for the signed event `f = 1_E − 1_{E^c}`, where atom `i`
    /// is in `E` iff bit `i` of `mask` is set.
    pub fn signed_event_norm(&self, mask: u64) -> f64 {
        let masses = self.space.masses();
        let mut sums = vec![0.0; self.blocks.len()];
        for (atom, &b) in self.block_of.iter().enumerate() {
            if mask >> atom & 1 == 1 {
                sums[b] += masses[atom];
            } else {
                sums[b] -= masses[atom];
            }
        }
        sums.iter().map(|s| abs(*s)).sum()
    }

    /// `‖E_A(f)‖₁`.
    pub fn cond_exp_norm(&self, f: &[f64]) -> Result<f64> {
        let e = self.cond_exp(f)?;
        Ok(self.space.l1_norm(&e))
    }
}

/// Which test functions certify `‖E_A f‖₁ ≤ ‖E_B f‖₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFamily {
    /// Every signed event `1_E − 1_{E^c}` (`2^(N−1)` functions up to sign).
    /// On `N ≤ 20` atoms this is a complete certificate: if `σ(A) ⊄ σ(B)`,
    /// an `A`-measurable `±1` function that changes sign inside one
    /// `B`-block has `‖E_A f‖₁ = 1 > ‖E_B f‖₁`.
    AllEvents,
    /// Signed indicators of the blocks of the supplied partitions' join plus
    /// `extra` seeded random functions with values in `[−1, 1]`. Incomplete.
    Sampled { extra: usize, seed: u64 },
}

/// Signed-event masks `E ∋ atom 0` (the complements give the same norms).
pub(crate) fn signed_event_masks(atoms: usize) -> Result<impl Iterator<Item = u64>> {
    if atoms > MAX_EXHAUSTIVE_ATOMS {
        return Err(Error::TooLargeForExhaustive {
            atoms,
            max: MAX_EXHAUSTIVE_ATOMS,
        });
    }
    let half = 1u64 << atoms.saturating_sub(1);
    Ok((0..half).map(|m| (m << 1) | 1))
}

/// Test functions of the sampled family for the given partitions.
pub fn sampled_family(partitions: &[&Partition], extra: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let first = partitions.first().ok_or(Error::EmptyPeriod)?;
    let space = first.space().clone();
    let mut join = (*first).clone();
    for p in &partitions[1..] {
        join = join.join(p)?;
    }
    let n = space.len();
    let mut family: Vec<Vec<f64>> = join
        .blocks()
        .iter()
        .map(|block| {
            let mut f = vec![-1.0; n];
            for &x in block {
                f[x] = 1.0;
            }
            f
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        family.push((0..n).map(|_| 2.0 * unit(&mut rng) - 1.0).collect());
    }
    Ok(family)
}

/// Uniform draw from `[0, 1)` with 53 random bits.
pub(crate) fn unit<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Kudo's norm test: true iff `‖E_A f‖₁ ≤ ‖E_B f‖₁ + tol` for every `f` in the
/// family. With [`TestFamily::AllEvents`] this decides `σ(A) ⊆ σ(B)`.
pub fn norm_dominates(a: &Partition, b: &Partition, family: TestFamily, tol: f64) -> Result<bool> {
    ensure_same(a.space(), b.space())?;
    match family {
        TestFamily::AllEvents => {
            let mut masks = signed_event_masks(a.space().len())?;
            Ok(masks.all(|m| a.signed_event_norm(m) <= b.signed_event_norm(m) + tol))
        }
        TestFamily::Sampled { extra, seed } => {
            for f in sampled_family(&[a, b], extra, seed)? {
                if a.cond_exp_norm(&f)? > b.cond_exp_norm(&f)? + tol {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
