//! Φ-entropy of densities and of partitions.

use crate::error::{Error, Result};
use crate::math::{abs, sqrt};
use crate::partition::Partition;
use crate::phi::{BuiltinPhi, Phi};
use crate::quadrature;
use crate::space::{ensure_same, Density};

/// Relative tolerance of the adaptive quadrature in [`sandwich_check`].
pub const QUAD_REL_TOL: f64 = 1e-10;

/// `Ent^Φ(f) = Σ ξ(x) Φ(f(x))`, with the convention `Φ(0) = 0`.
pub fn ent(phi: &dyn Phi, f: &Density) -> f64 {
    f.space()
        .masses()
        .iter()
        .zip(f.values())
        .filter(|(_, &v)| v != 0.0)
        .map(|(m, &v)| m * phi.value(v))
        .sum()
}

/// Layer-cake form `∫_0^∞ ξ({f ≥ u}) Φ'(u) du`, summed exactly over the
/// plateaus of `u ↦ ξ({f ≥ u})`.
pub fn ent_layer_cake(phi: &dyn Phi, f: &Density) -> f64 {
    let profile = f.survival_profile();
    let mut prev = 0.0;
    let mut prev_phi = 0.0;
    let mut total = 0.0;
    for (&v, &mass) in profile.breakpoints().iter().zip(profile.mass_at_least()) {
        let cur_phi = if v == 0.0 { 0.0 } else { phi.value(v) };
        if v > prev {
            total += mass * (cur_phi - prev_phi);
        }
        prev = v;
        prev_phi = cur_phi;
    }
    total
}

/// The two-sided estimate of `Ent^Φ(f)` by the survival integral at cut-off `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub delta: f64,
    /// `∫_δ^∞ α_f Φ'' dt + Φ'(δ)`.
    pub middle: f64,
    /// `−Φ(δ) − δΦ'(δ)`: the two remainder terms `∫_0^δ ξ({f ≥ u}) Φ'(u) du`
    /// and `(α_f(δ) − 1) Φ'(δ)` are bounded by `−Φ(δ)` and `−δΦ'(δ)`.
    pub bound: f64,
    pub ok: bool,
    /// `−2 max(Φ(δ), δΦ'(δ))`, the sharper form sometimes quoted. It is not
    /// valid in general: for `f ≡ 1` and `Φ = t ln t` the remainder is `δ`,
    /// which exceeds it as `δ → t_o`.
    pub stated_bound: f64,
    pub stated_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub ent: f64,
    pub layer_cake: f64,
    pub sandwich: Sandwich,
}

/// Slack added to the right-hand side of the sandwich inequality.
pub const SANDWICH_SLACK: f64 = 1e-9;

/// `∫_δ^∞ α_f(t) Φ''(t) dt`, integrated segment by segment between the kinks
/// of `α_f` (it vanishes beyond `max f`).
pub fn alpha_phi2_integral(phi: &dyn Phi, f: &Density, delta: f64) -> f64 {
    let profile = f.survival_profile();
    let mut points = alloc::vec![delta];
    points.extend(profile.breakpoints().iter().copied().filter(|&v| v > delta));
    let mut total = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (profile.eval(a), profile.eval(b));
        let c1 = (fb - fa) / (b - a);
        let c0 = fa - c1 * a;
        total += match phi.weighted_d2_integral(a, b, c0, c1) {
            Some(v) => v,
            None => quadrature::integrate(|t| (c0 + c1 * t) * phi.d2(t), a, b, QUAD_REL_TOL),
        };
    }
    total
}

/// Computes `Ent^Φ(f)` both directly and by layers, and the survival-integral
/// estimate at cut-off `δ ∈ (0, t_o)`.
pub fn sandwich_check(phi: &dyn Phi, f: &Density, delta: f64) -> Result<EntropyReport> {
    let t_o = phi.t_o();
    if !(delta > 0.0 && delta < t_o) {
        return Err(Error::DeltaOutOfRange { delta, t_o });
    }
    let value = ent(phi, f);
    let middle = alpha_phi2_integral(phi, f, delta) + phi.d1(delta);
    let bound = -phi.value(delta) - delta * phi.d1(delta);
    let stated_bound = -2.0 * phi.value(delta).max(delta * phi.d1(delta));
    let gap = abs(value - middle);
    Ok(EntropyReport {
        ent: value,
        layer_cake: ent_layer_cake(phi, f),
        sandwich: Sandwich {
            delta,
            middle,
            bound,
            ok: gap <= bound + SANDWICH_SLACK,
            stated_bound,
            stated_ok: gap <= stated_bound + SANDWICH_SLACK,
        },
    })
}

/// `H^Φ_ρ(A) = Ent^Φ(E_A ρ)`.
pub fn h_phi(phi: &dyn Phi, rho: &Density, a: &Partition) -> Result<f64> {
    Ok(ent(phi, &a.cond_exp_density(rho)?))
}

/// Both sides of the Pinsker–Csiszár–Kullback inequality
/// `‖1 − f‖₁ ≤ √2 Ent(f)^(1/2)` for the standard generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PckGap {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

pub fn pck_gap(f: &Density) -> PckGap {
    let space = f.space();
    let lhs: f64 = space
        .masses()
        .iter()
        .zip(f.values())
        .map(|(m, v)| m * abs(1.0 - v))
        .sum();
    let e = ent(&BuiltinPhi::Standard, f).max(0.0);
    let rhs = core::f64::consts::SQRT_2 * sqrt(e);
    PckGap {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-12,
    }
}

/// Both sides of `max_n ‖E_{A⁺}ρ − E_{A_n}ρ‖₁ ≤ √2 (H_ρ(A⁺) − min_n H_ρ(A_n))^(1/2)`
/// over a periodic tail, for the standard generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantBound {
    /// Smallest `λ ≥ 1` with `λ⁻¹ ≤ ρ ≤ λ`.
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// On a finite space `A⁺` is an upper Kudo-limit of a periodic tail exactly
/// when it refines every partition of the tail, which is what is checked here.
pub fn quant_bound_check(rho: &Density, a_plus: &Partition, tail: &[Partition]) -> Result<QuantBound> {
    if tail.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    ensure_same(rho.space(), a_plus.space())?;
    for a in tail {
        if !a_plus.refines(a)? {
            return Err(Error::NotUpperLimit);
        }
    }
    let (lo, hi) = (rho.min(), rho.max());
    if lo.is_nan() || lo <= 0.0 {
        return Err(Error::UnboundedDensity);
    }
    let lambda = hi.max(1.0 / lo);

    let phi = BuiltinPhi::Standard;
    let top = a_plus.cond_exp(rho.values())?;
    let h_plus = h_phi(&phi, rho, a_plus)?;
    let mut lhs: f64 = 0.0;
    let mut h_min = f64::INFINITY;
    for a in tail {
        let e = a.cond_exp_density(rho)?;
        lhs = lhs.max(rho.space().l1_distance(&top, e.values()));
        h_min = h_min.min(ent(&phi, &e));
    }
    let rhs = core::f64::consts::SQRT_2 * sqrt((h_plus - h_min).max(0.0));
    Ok(QuantBound {
        lambda,
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-9,
    })
}
