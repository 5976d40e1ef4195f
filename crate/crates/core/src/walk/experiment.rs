//! Entropy convergence of partition sequences on the cylinder space, measured
//! against the averaged entropy `h_η`.

use alloc::vec::Vec;

use super::furstenberg::{kl_entropy, Kernel};
use crate::error::{Error, Result};
use crate::kudo::{kudo_limits, PartitionSequence};
use crate::math::{abs, sqrt};
use crate::partition::Partition;
use crate::space::ensure_same;

const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Slack on the norm bounds below.
pub const BOUND_SLACK: f64 = 1e-9;

/// One partition of the period.
///
/// For each `g` with weight `w_g`, Pinsker's inequality and
/// `w_g Ent(E_A ρ_g) ≤ h(A)` give
/// `‖1 − E_{A_n} ρ_g‖₁ ≤ √2 (h(A_n) / w_g)^(1/2)`; since `A_n ⊆ A⁺`, the
/// entropy gap `Ent(E_{A⁺}ρ_g) − Ent(E_{A_n}ρ_g)` is a relative entropy and
/// `‖E_{A⁺} ρ_g − E_{A_n} ρ_g‖₁ ≤ √2 ((h(A⁺) − h(A_n)) / w_g)^(1/2)`.
/// Here `h` is the unnormalised averaged entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodRow {
    pub h_raw: f64,
    /// `h_raw / γ_K`.
    pub h_eta: f64,
    /// `max_g ‖1 − E_{A_n} ρ_g‖₁`.
    pub gap_to_trivial: f64,
    /// `max_g ‖E_{A⁺} ρ_g − E_{A_n} ρ_g‖₁`.
    pub gap_to_plus: f64,
    pub trivial_bound_ok: bool,
    pub plus_bound_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub h_plus_raw: f64,
    pub h_plus_eta: f64,
    pub rows: Vec<PeriodRow>,
    /// Every `h(A_n)` in the period equals `h(A⁺)` within the tolerance.
    pub entropy_reaches_plus: bool,
    /// Every `h(A_n)` is at most the tolerance.
    pub entropy_vanishes: bool,
    /// `max_n max_g ‖E_{A⁺} ρ_g − E_{A_n} ρ_g‖₁`.
    pub strong_gap: f64,
    pub ok: bool,
}

pub fn entropy_convergence_experiment(kernel: &Kernel, seq: &PartitionSequence, tol: f64) -> Result<ConvergenceReport> {
    let first = kernel.entries().first().ok_or(Error::EmptySpace)?;
    ensure_same(first.rho.space(), seq.space())?;
    let a_plus = kudo_limits(seq).a_plus;
    let h_plus_raw = kernel.averaged_entropy(&a_plus)?;
    let tops: Vec<Vec<f64>> = kernel
        .entries()
        .iter()
        .map(|e| a_plus.cond_exp(e.rho.values()))
        .collect::<Result<_>>()?;
    let space = seq.space();
    let mut rows = Vec::with_capacity(seq.period().len());
    for a in seq.period() {
        let mut h_raw = 0.0;
        let mut images = Vec::with_capacity(kernel.entries().len());
        for e in kernel.entries() {
            let img = a.cond_exp_density(&e.rho)?;
            h_raw += e.weight * kl_entropy(&img);
            images.push(img);
        }
        let mut row = PeriodRow {
            h_raw,
            h_eta: h_raw / kernel.gamma_truncated(),
            gap_to_trivial: 0.0,
            gap_to_plus: 0.0,
            trivial_bound_ok: true,
            plus_bound_ok: true,
        };
        for ((e, img), top) in kernel.entries().iter().zip(&images).zip(&tops) {
            let w = e.weight;
            let to_trivial: f64 = space
                .masses()
                .iter()
                .zip(img.values())
                .map(|(m, v)| m * abs(1.0 - v))
                .sum();
            let to_plus = space.l1_distance(top, img.values());
            row.gap_to_trivial = row.gap_to_trivial.max(to_trivial);
            row.gap_to_plus = row.gap_to_plus.max(to_plus);
            row.trivial_bound_ok &= to_trivial <= SQRT_2 * sqrt(h_raw.max(0.0) / w) + BOUND_SLACK;
            row.plus_bound_ok &= to_plus <= SQRT_2 * sqrt((h_plus_raw - h_raw).max(0.0) / w) + BOUND_SLACK;
        }
        rows.push(row);
    }
    let entropy_reaches_plus = rows.iter().all(|r| abs(r.h_raw - h_plus_raw) <= tol);
    let entropy_vanishes = rows.iter().all(|r| r.h_raw <= tol);
    let strong_gap = rows.iter().map(|r| r.gap_to_plus).fold(0.0, f64::max);
    let ok = rows.iter().all(|r| r.trivial_bound_ok && r.plus_bound_ok);
    Ok(ConvergenceReport {
        h_plus_raw,
        h_plus_eta: h_plus_raw / kernel.gamma_truncated(),
        rows,
        entropy_reaches_plus,
        entropy_vanishes,
        strong_gap,
        ok,
    })
}

/// Both sides of `‖∫f_ψ − E_A f_ψ‖₁ ≤ √2 ‖ψ‖_∞ h(A)^(1/2)` where
/// `f_ψ = Σ_g η(g) ψ(g) ρ_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainedBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `psi[i]` is the value of `ψ` at the `i`-th kernel entry.
pub fn chained_bound_check(kernel: &Kernel, a: &Partition, psi: &[f64]) -> Result<ChainedBound> {
    let entries = kernel.entries();
    if psi.len() != entries.len() {
        return Err(Error::LengthMismatch {
            expected: entries.len(),
            got: psi.len(),
        });
    }
    let first = entries.first().ok_or(Error::EmptySpace)?;
    let space = first.rho.space();
    ensure_same(space, a.space())?;
    let mut f = alloc::vec![0.0; space.len()];
    for (e, p) in entries.iter().zip(psi) {
        for (x, r) in f.iter_mut().zip(e.rho.values()) {
            *x += e.weight * p * r;
        }
    }
    let mean = space.integrate(&f);
    let ea = a.cond_exp(&f)?;
    let lhs: f64 = space
        .masses()
        .iter()
        .zip(&ea)
        .map(|(m, v)| m * abs(mean - v))
        .sum();
    let sup = psi.iter().fold(0.0f64, |acc, v| acc.max(abs(*v)));
    let rhs = SQRT_2 * sup * sqrt(kernel.averaged_entropy(a)?.max(0.0));
    Ok(ChainedBound {
        lhs,
        rhs,
        ok: lhs <= rhs + BOUND_SLACK,
    })
}
