//! Furstenberg entropy of the walk and averaged entropies of partitions of
//! the cylinder space.

use alloc::vec::Vec;

use super::cocycle::{projected_rn_density, rn_density, rn_on_cylinder};
use super::eta::{Eta, GAMMA};
use super::harmonic::CylinderSpace;
use super::word::{Letter, Word};
use crate::entropy::ent;
use crate::error::{Error, Result};
use crate::linalg;
use crate::math::{abs, ln, powi};
use crate::partition::Partition;
use crate::phi::BuiltinPhi;
use crate::space::{ensure_same, Density};

/// `h = Σ_x μ(x) Σ_c ν(c) (−ln ρ_{x⁻¹}(c))`, exact at any depth `≥ 1`.
pub fn furstenberg_exact(cyl: &CylinderSpace) -> f64 {
    let h = cyl.harmonic();
    let law = cyl.law();
    let masses = cyl.space().masses();
    (0..law.probs().len() as Letter)
        .map(|x| {
            let inv = Word::letter(x).inverse();
            let inner: f64 = cyl
                .words()
                .iter()
                .zip(masses)
                .map(|(c, m)| -m * ln(rn_on_cylinder(h, &inv, c.letters())))
                .sum();
            law.prob(x) * inner
        })
        .sum()
}

/// `Ent_ν(ρ) = ∫ ρ ln ρ dν`.
pub fn kl_entropy(rho: &Density) -> f64 {
    ent(&BuiltinPhi::Standard, rho)
}

/// One element of the support of `η_μ` with its Radon–Nikodym density.
#[derive(Debug, Clone)]
pub struct KernelEntry {
    pub g: Word,
    pub weight: f64,
    pub rho: Density,
}

/// The densities `{ρ_g : g ∈ supp η}` on a cylinder space, weighted by `η`.
#[derive(Debug, Clone)]
pub struct Kernel {
    entries: Vec<KernelEntry>,
    gamma_truncated: f64,
}

impl Kernel {
    /// Exact densities; every word in the support must fit the depth.
    pub fn new(cyl: &CylinderSpace, eta: &Eta) -> Result<Self> {
        let mut entries = Vec::with_capacity(eta.weights().len());
        for (g, &weight) in eta.weights() {
            entries.push(KernelEntry {
                g: g.clone(),
                weight,
                rho: rn_density(cyl, g)?,
            });
        }
        Ok(Kernel {
            entries,
            gamma_truncated: eta.gamma_truncated(),
        })
    }

    /// Cylinder averages of the densities, allowed for any depth.
    pub fn projected(cyl: &CylinderSpace, eta: &Eta) -> Self {
        let entries = eta
            .weights()
            .iter()
            .map(|(g, &weight)| KernelEntry {
                g: g.clone(),
                weight,
                rho: projected_rn_density(cyl, g),
            })
            .collect();
        Kernel {
            entries,
            gamma_truncated: eta.gamma_truncated(),
        }
    }

    pub fn entries(&self) -> &[KernelEntry] {
        &self.entries
    }

    pub fn gamma_truncated(&self) -> f64 {
        self.gamma_truncated
    }

    /// `Σ_g η(g) Ent(E_A ρ_g)`, not normalised.
    pub fn averaged_entropy(&self, a: &Partition) -> Result<f64> {
        let mut total = 0.0;
        for e in &self.entries {
            total += e.weight * kl_entropy(&a.cond_exp_density(&e.rho)?);
        }
        Ok(total)
    }

    /// Averaged entropy divided by the truncated `γ`; for the discrete
    /// partition this is the Furstenberg entropy of the walk.
    pub fn factor_entropy(&self, a: &Partition) -> Result<f64> {
        Ok(self.averaged_entropy(a)? / self.gamma_truncated)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerCheck {
    pub j: usize,
    /// `Σ_g μ^{*j}(g) Ent(ρ_g)`.
    pub lhs: f64,
    /// `j · h`.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub h: f64,
    pub gamma: f64,
    pub gamma_truncated: f64,
    pub layers: Vec<LayerCheck>,
    /// `Σ_g η_K(g) Ent(ρ_g)`.
    pub lhs_total: f64,
    /// `h · γ_K`.
    pub rhs_total: f64,
    pub ok: bool,
}

/// Tolerance of the layer identities.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Checks `Σ_g μ^{*j}(g) Ent(ρ_g) = j h` for every layer `j ≤ K`, and the
/// summed form `∫ Ent(ρ_g) dη_K = γ_K h`.
pub fn entropy_identity_check(cyl: &CylinderSpace, eta: &Eta) -> Result<IdentityReport> {
    if eta.max_len() > cyl.depth() {
        return Err(Error::DepthExceeded {
            needed: eta.max_len(),
            available: cyl.depth(),
        });
    }
    let h = furstenberg_exact(cyl);
    let mut layers = Vec::with_capacity(eta.terms());
    let mut ok = true;
    for j in 1..=eta.terms() {
        let mut lhs = 0.0;
        for (g, p) in eta.layer(j) {
            lhs += p * kl_entropy(&rn_density(cyl, g)?);
        }
        let rhs = j as f64 * h;
        ok &= abs(lhs - rhs) <= IDENTITY_TOL;
        layers.push(LayerCheck { j, lhs, rhs });
    }
    let kernel = Kernel::new(cyl, eta)?;
    let lhs_total = kernel.averaged_entropy(&Partition::discrete(cyl.space().clone()))?;
    let rhs_total = h * eta.gamma_truncated();
    ok &= abs(lhs_total - rhs_total) <= IDENTITY_TOL;
    Ok(IdentityReport {
        h,
        gamma: GAMMA,
        gamma_truncated: eta.gamma_truncated(),
        layers,
        lhs_total,
        rhs_total,
        ok,
    })
}

/// Factor entropy of `A` with the exact kernel at depth `L ≥ K`.
pub fn factor_entropy(cyl: &CylinderSpace, eta: &Eta, a: &Partition) -> Result<f64> {
    ensure_same(cyl.space(), a.space())?;
    Kernel::new(cyl, eta)?.factor_entropy(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    /// `Λ = max_x max(ρ_x, 1/ρ_x)` over letters; `λ_g = Λ^|g|`.
    pub lambda_letter: f64,
    /// Every `ρ_g` lies in `[λ_g⁻¹, λ_g]`.
    pub bounded: bool,
    /// `Σ_g η(g) Ent(ρ_g)`.
    pub averaged_entropy: f64,
    pub rank: usize,
    pub atoms: usize,
    /// The densities span the whole function space.
    pub dense: bool,
    pub ok: bool,
}

pub const PIVOT_TOL: f64 = 1e-10;

/// Boundedness and spanning of `{ρ_g : g ∈ supp η}` on the cylinder space.
///
/// When `η` reaches beyond the depth the densities are replaced by their
/// cylinder averages; those are what the finite space sees, and the
/// boundedness check carries over because averaging preserves the bounds.
pub fn kernel_condition_check(cyl: &CylinderSpace, eta: &Eta) -> KernelReport {
    let kernel = Kernel::projected(cyl, eta);
    let h = cyl.harmonic();
    let lambda_letter = (0..cyl.law().probs().len() as Letter)
        .map(|x| {
            let g = Word::letter(x);
            cyl.words()
                .iter()
                .map(|u| {
                    let v = rn_on_cylinder(h, &g, u.prefix(1).letters());
                    v.max(1.0 / v)
                })
                .fold(1.0, f64::max)
        })
        .fold(1.0, f64::max);
    let mut bounded = true;
    let mut averaged_entropy = 0.0;
    for e in kernel.entries() {
        let lambda = powi(lambda_letter, e.g.len() as i32) * (1.0 + 1e-12);
        bounded &= e.rho.values().iter().all(|&v| v <= lambda && v * lambda >= 1.0);
        averaged_entropy += e.weight * kl_entropy(&e.rho);
    }
    let rows: Vec<Vec<f64>> = kernel.entries().iter().map(|e| e.rho.values().to_vec()).collect();
    let rank = linalg::rank(&rows, PIVOT_TOL);
    let atoms = cyl.len();
    KernelReport {
        lambda_letter,
        bounded,
        averaged_entropy,
        rank,
        atoms,
        dense: rank == atoms,
        ok: bounded && rank == atoms && averaged_entropy.is_finite(),
    }
}
