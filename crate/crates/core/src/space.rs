//! Finite atomic probability spaces, densities on them, and the survival
//! integral `α_f(t) = ∫_t^∞ ξ({f ≥ τ}) dτ`.
//!
//! Atoms carry strictly positive mass. Null atoms are rejected instead of
//! being carried around, so every block of every partition has positive mass
//! and conditional expectations are always defined.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::abs;

/// Tolerance for equality constraints (mass sums, density normalisation,
/// inequality slack in decision procedures).
pub const EQ_TOL: f64 = 1e-12;

/// Tolerance for cross-checks against independent numerical oracles.
pub const ORACLE_TOL: f64 = 1e-8;

/// An atomic probability space `(X, ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    atoms: Vec<String>,
    masses: Vec<f64>,
}

impl FiniteSpace {
    /// Validates and builds a space.
    ///
    /// With `normalize = false` the masses must already sum to one within
    /// [`EQ_TOL`]; with `normalize = true` they are rescaled.
    pub fn new(atoms: Vec<String>, masses: Vec<f64>, normalize: bool) -> Result<Arc<Self>> {
        if atoms.len() != masses.len() {
            return Err(Error::LengthMismatch {
                expected: atoms.len(),
                got: masses.len(),
            });
        }
        if atoms.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(Error::DuplicateAtom(a.clone()));
            }
        }
        for (index, &mass) in masses.iter().enumerate() {
            if !(mass > 0.0 && mass.is_finite()) {
                return Err(Error::NonPositiveMass { index, mass });
            }
        }
        let sum: f64 = masses.iter().sum();
        let masses = if normalize {
            masses.into_iter().map(|m| m / sum).collect()
        } else {
            if abs(sum - 1.0) > EQ_TOL {
                return Err(Error::MassSumMismatch { sum });
            }
            masses
        };
        Ok(Arc::new(FiniteSpace { atoms, masses }))
    }

    /// `n` equally weighted atoms labelled `x1, …, xn`.
    pub fn uniform(n: usize) -> Result<Arc<Self>> {
        let atoms = (1..=n).map(|i| alloc::format!("x{i}")).collect();
        let masses = alloc::vec![1.0 / n as f64; n];
        Self::new(atoms, masses, n > 0)
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, atom: usize) -> f64 {
        self.masses[atom]
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// `∫ f dξ`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.len());
        self.masses.iter().zip(f).map(|(m, v)| m * v).sum()
    }

    /// `‖f‖_{L¹(ξ)}`.
    pub fn l1_norm(&self, f: &[f64]) -> f64 {
        self.masses.iter().zip(f).map(|(m, v)| m * abs(*v)).sum()
    }

    /// `‖f − g‖_{L¹(ξ)}`.
    pub fn l1_distance(&self, f: &[f64], g: &[f64]) -> f64 {
        self.masses
            .iter()
            .zip(f.iter().zip(g))
            .map(|(m, (a, b))| m * abs(a - b))
            .sum()
    }

    pub(crate) fn check_len(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: f.len(),
            });
        }
        Ok(())
    }
}

/// True when both handles describe the same space.
pub fn same_space(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn ensure_same(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A probability density `f ≥ 0` with `∫ f dξ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    space: Arc<FiniteSpace>,
    values: Vec<f64>,
}

impl Density {
    pub fn new(space: Arc<FiniteSpace>, values: Vec<f64>) -> Result<Self> {
        space.check_len(&values)?;
        for (index, &value) in values.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::NegativeDensity { index, value });
            }
        }
        let integral = space.integrate(&values);
        if abs(integral - 1.0) > EQ_TOL {
            return Err(Error::DensityNotNormalized { integral });
        }
        Ok(Density { space, values })
    }

    /// Rescales non-negative weights so they integrate to one.
    pub fn normalized(space: Arc<FiniteSpace>, weights: Vec<f64>) -> Result<Self> {
        space.check_len(&weights)?;
        let integral = space.integrate(&weights);
        if !(integral > 0.0 && integral.is_finite()) {
            return Err(Error::DensityNotNormalized { integral });
        }
        Self::new(space, weights.into_iter().map(|w| w / integral).collect())
    }

    /// The constant density `1`.
    pub fn one(space: Arc<FiniteSpace>) -> Self {
        let values = alloc::vec![1.0; space.len()];
        Density { space, values }
    }

    /// Skips validation; callers guarantee the invariants (e.g. conditional
    /// expectations of densities).
    pub(crate) fn from_parts(space: Arc<FiniteSpace>, values: Vec<f64>) -> Self {
        Density { space, values }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `α_f(t) = Σ_x ξ(x)·(f(x) − t)⁺`, the closed form of the survival integral.
    pub fn alpha(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::NegativeThreshold(t));
        }
        Ok(self
            .space
            .masses()
            .iter()
            .zip(&self.values)
            .map(|(m, v)| if *v > t { m * (v - t) } else { 0.0 })
            .sum())
    }

    /// `∫ |f − t| dξ`, computed directly.
    pub fn abs_moment(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::NegativeThreshold(t));
        }
        Ok(self
            .space
            .masses()
            .iter()
            .zip(&self.values)
            .map(|(m, v)| m * abs(v - t))
            .sum())
    }

    pub fn survival_profile(&self) -> SurvivalProfile {
        SurvivalProfile::new(self.space.masses(), &self.values)
    }
}

/// Exact piecewise-linear representation of `t ↦ α_f(t)`.
///
/// Kinks sit at the distinct values `v_1 < … < v_m` of `f`. Between
/// consecutive kinks `α_f` has slope `−ξ({f ≥ v_{i+1}})`, to the left of `v_1`
/// slope `−1`, and it vanishes from `v_m` on.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalProfile {
    breakpoints: Vec<f64>,
    mass_at_least: Vec<f64>,
    alpha_at: Vec<f64>,
}

impl SurvivalProfile {
    fn new(masses: &[f64], values: &[f64]) -> Self {
        let mut pairs: Vec<(f64, f64)> = values.iter().copied().zip(masses.iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut breakpoints: Vec<f64> = Vec::new();
        let mut plateau: Vec<f64> = Vec::new();
        for (v, m) in pairs {
            match breakpoints.last() {
                Some(&last) if last == v => *plateau.last_mut().unwrap() += m,
                _ => {
                    breakpoints.push(v);
                    plateau.push(m);
                }
            }
        }

        let n = breakpoints.len();
        let mut mass_at_least = alloc::vec![0.0; n];
        let mut acc = 0.0;
        for i in (0..n).rev() {
            acc += plateau[i];
            mass_at_least[i] = acc;
        }
        let mut alpha_at = alloc::vec![0.0; n];
        for i in (0..n.saturating_sub(1)).rev() {
            alpha_at[i] = alpha_at[i + 1] + mass_at_least[i + 1] * (breakpoints[i + 1] - breakpoints[i]);
        }
        SurvivalProfile {
            breakpoints,
            mass_at_least,
            alpha_at,
        }
    }

    /// Sorted distinct values of `f`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// `ξ({f ≥ v_i})` for each breakpoint.
    pub fn mass_at_least(&self) -> &[f64] {
        &self.mass_at_least
    }

    /// `α_f(v_i)` for each breakpoint.
    pub fn alpha_at_breakpoints(&self) -> &[f64] {
        &self.alpha_at
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.breakpoints.len();
        if n == 0 || t >= self.breakpoints[n - 1] {
            return 0.0;
        }
        // first breakpoint strictly above t
        let j = self.breakpoints.partition_point(|&v| v <= t);
        if j == 0 {
            return self.alpha_at[0] + (self.breakpoints[0] - t);
        }
        self.alpha_at[j] + self.mass_at_least[j] * (self.breakpoints[j] - t)
    }
}

/// Second-order stochastic domination: true iff `α_{f1}(t) ≤ α_{f2}(t) + tol`
/// for every `t ≥ 0`.
///
/// Both profiles are piecewise linear, so checking `t = 0` and the union of
/// their kinks decides the inequality on all of `[0, ∞)`.
pub fn dominates_second_order(f1: &Density, f2: &Density, tol: f64) -> Result<bool> {
    ensure_same(f1.space(), f2.space())?;
    let p1 = f1.survival_profile();
    let p2 = f2.survival_profile();
    Ok(profile_points(&[&p1, &p2]).into_iter().all(|t| p1.eval(t) <= p2.eval(t) + tol))
}

/// `0` followed by every kink of every profile.
pub(crate) fn profile_points(profiles: &[&SurvivalProfile]) -> Vec<f64> {
    let mut pts: Vec<f64> = core::iter::once(0.0)
        .chain(profiles.iter().flat_map(|p| p.breakpoints().iter().copied()))
        .filter(|&t| t >= 0.0)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
