//! The boundary action of `F_k` on partitions and functions of cylinders.

use alloc::vec::Vec;

use super::cocycle::rn_density;
use super::harmonic::CylinderSpace;
use super::word::Word;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::space::ensure_same;

fn check_depths(from: &CylinderSpace, to: &CylinderSpace, shift: usize) -> Result<()> {
    if from.rank() != to.rank() || from.law() != to.law() {
        return Err(Error::SpaceMismatch);
    }
    if to.depth() < from.depth() + shift {
        return Err(Error::DepthExceeded {
            needed: from.depth() + shift,
            available: to.depth(),
        });
    }
    Ok(())
}

/// Refines nothing: the same σ-algebra, seen on deeper cylinders.
pub fn lift_partition(a: &Partition, from: &CylinderSpace, to: &CylinderSpace) -> Result<Partition> {
    translate_partition(a, from, to, &Word::identity())
}

/// `gA = {gE : E ∈ A}` on cylinders of depth at least `L + |g|`. A ray `b`
/// lies in `gE` iff `g⁻¹b ∈ E`, and the first `L` letters of `g⁻¹b` are
/// determined by the first `L + |g|` letters of `b`.
pub fn translate_partition(a: &Partition, from: &CylinderSpace, to: &CylinderSpace, g: &Word) -> Result<Partition> {
    ensure_same(a.space(), from.space())?;
    check_depths(from, to, g.len())?;
    let g_inv = g.inverse();
    let labels: Vec<usize> = to
        .words()
        .iter()
        .map(|u| a.block_of(from.index_of(g_inv.mul(u).letters())))
        .collect();
    Partition::from_labels(to.space().clone(), &labels)
}

/// `f ∘ g` on the deeper space, for `f` measurable at the shallow depth.
pub fn compose_with(f: &[f64], from: &CylinderSpace, to: &CylinderSpace, g: &Word) -> Result<Vec<f64>> {
    from.space().check_len(f)?;
    check_depths(from, to, g.len())?;
    Ok(to.words().iter().map(|u| f[from.index_of(g.mul(u).letters())]).collect())
}

/// Both sides of `‖E_{gA} f‖₁ = ‖E_A(ρ_{g⁻¹} · (f ∘ g))‖₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormIdentity {
    pub lhs: f64,
    pub rhs: f64,
}

/// Evaluates the transport identity on cylinders of depth `to`, with `f` and
/// `A` given at depth `from`.
pub fn transform_identity(
    a: &Partition,
    f: &[f64],
    from: &CylinderSpace,
    to: &CylinderSpace,
    g: &Word,
) -> Result<NormIdentity> {
    let ga = translate_partition(a, from, to, g)?;
    let lifted_a = lift_partition(a, from, to)?;
    let lifted_f = compose_with(f, from, to, &Word::identity())?;
    let lhs = ga.cond_exp_norm(&lifted_f)?;
    let rho = rn_density(to, &g.inverse())?;
    let moved = compose_with(f, from, to, g)?;
    let product: Vec<f64> = rho.values().iter().zip(&moved).map(|(r, v)| r * v).collect();
    let rhs = lifted_a.cond_exp_norm(&product)?;
    Ok(NormIdentity { lhs, rhs })
}
