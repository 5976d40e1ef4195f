//! Kudo limits of eventually periodic sequences of partitions, and the
//! matching notions of upper and lower limits for sequences of densities.
//!
//! Every tail quantity (`limsup`, `liminf`, limits) is computed over the
//! period alone; the preperiod never matters.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::entropy::{ent, h_phi};
use crate::error::{Error, Result};
use crate::partition::{sampled_family, signed_event_masks, Partition, TestFamily};
use crate::phi::Phi;
use crate::space::{ensure_same, profile_points, Density, FiniteSpace};

/// A preperiod followed by a period repeated forever.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSequence {
    space: Arc<FiniteSpace>,
    preperiod: Vec<Partition>,
    period: Vec<Partition>,
}

impl PartitionSequence {
    pub fn new(preperiod: Vec<Partition>, period: Vec<Partition>) -> Result<Self> {
        let space = period.first().ok_or(Error::EmptyPeriod)?.space().clone();
        for p in preperiod.iter().chain(&period) {
            ensure_same(&space, p.space())?;
        }
        Ok(PartitionSequence {
            space,
            preperiod,
            period,
        })
    }

    pub fn constant(p: Partition) -> Self {
        PartitionSequence {
            space: p.space().clone(),
            preperiod: Vec::new(),
            period: alloc::vec![p],
        }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn preperiod(&self) -> &[Partition] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Partition] {
        &self.period
    }

    /// The `n`-th term, counting from 0.
    pub fn nth(&self, n: usize) -> &Partition {
        match n.checked_sub(self.preperiod.len()) {
            None => &self.preperiod[n],
            Some(k) => &self.period[k % self.period.len()],
        }
    }

    /// The image sequence `E_{A_n}(f)`.
    pub fn images(&self, f: &Density) -> Result<DensitySequence> {
        let map = |ps: &[Partition]| -> Result<Vec<Density>> {
            ps.iter().map(|p| p.cond_exp_density(f)).collect()
        };
        DensitySequence::new(map(&self.preperiod)?, map(&self.period)?)
    }
}

/// Eventually periodic sequence of densities on one space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySequence {
    preperiod: Vec<Density>,
    period: Vec<Density>,
}

impl DensitySequence {
    pub fn new(preperiod: Vec<Density>, period: Vec<Density>) -> Result<Self> {
        let space = period.first().ok_or(Error::EmptyPeriod)?.space().clone();
        for f in preperiod.iter().chain(&period) {
            ensure_same(&space, f.space())?;
        }
        Ok(DensitySequence { preperiod, period })
    }

    pub fn constant(f: Density) -> Self {
        DensitySequence {
            preperiod: Vec::new(),
            period: alloc::vec![f],
        }
    }

    pub fn preperiod(&self) -> &[Density] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Density] {
        &self.period
    }
}

/// Minimal upper and maximal lower Kudo-limit.
#[derive(Debug, Clone, PartialEq)]
pub struct KudoLimits {
    pub a_plus: Partition,
    pub a_minus: Partition,
    /// True iff the sequence converges strongly, i.e. `A⁺ = A⁻`.
    pub converges: bool,
}

/// `A⁺` is the join and `A⁻` the meet of the partitions in the period.
///
/// On a finite space with smallest atom mass `δ > 0`, `ξ(B Δ B_n) → 0` forces
/// `B ∈ A_n` eventually, so the lower limit is the meet of the recurrent
/// partitions; dually, a σ-algebra passes the upper norm test exactly when it
/// contains every recurrent one, so the minimal such is their join.
pub fn kudo_limits(seq: &PartitionSequence) -> KudoLimits {
    let mut a_plus = seq.period[0].clone();
    let mut a_minus = seq.period[0].clone();
    for p in &seq.period[1..] {
        a_plus = a_plus.join(p).expect("sequence lives on one space");
        a_minus = a_minus.meet(p).expect("sequence lives on one space");
    }
    let converges = a_plus == a_minus;
    KudoLimits {
        a_plus,
        a_minus,
        converges,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `limsup_n ‖E_{A_n} f‖₁ ≤ ‖E_A f‖₁`.
    Upper,
    /// `‖E_A f‖₁ ≤ liminf_n ‖E_{A_n} f‖₁`.
    Lower,
}

fn violates(side: Side, candidate: f64, tail: impl Iterator<Item = f64>, tol: f64) -> bool {
    match side {
        Side::Upper => tail.fold(f64::NEG_INFINITY, f64::max) > candidate + tol,
        Side::Lower => candidate > tail.fold(f64::INFINITY, f64::min) + tol,
    }
}

/// A test function on which `A` fails the norm test, if one exists in the
/// family.
pub fn sigma_violation(
    seq: &PartitionSequence,
    a: &Partition,
    side: Side,
    family: TestFamily,
    tol: f64,
) -> Result<Option<Vec<f64>>> {
    ensure_same(&seq.space, a.space())?;
    match family {
        TestFamily::AllEvents => {
            for mask in signed_event_masks(seq.space.len())? {
                let norms = seq.period.iter().map(|p| p.signed_event_norm(mask));
                if violates(side, a.signed_event_norm(mask), norms, tol) {
                    let psi = (0..seq.space.len())
                        .map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 })
                        .collect();
                    return Ok(Some(psi));
                }
            }
            Ok(None)
        }
        TestFamily::Sampled { extra, seed } => {
            let mut all: Vec<&Partition> = seq.period.iter().collect();
            all.push(a);
            for psi in sampled_family(&all, extra, seed)? {
                let mut norms = Vec::with_capacity(seq.period.len());
                for p in &seq.period {
                    norms.push(p.cond_exp_norm(&psi)?);
                }
                if violates(side, a.cond_exp_norm(&psi)?, norms.into_iter(), tol) {
                    return Ok(Some(psi));
                }
            }
            Ok(None)
        }
    }
}

/// Whether `A` belongs to `Σ⁺` (upper) or `Σ⁻` (lower) according to the
/// norm test over `family`.
pub fn verify_sigma_membership(
    seq: &PartitionSequence,
    a: &Partition,
    side: Side,
    family: TestFamily,
    tol: f64,
) -> Result<bool> {
    Ok(sigma_violation(seq, a, side, family, tol)?.is_none())
}

/// Turns a violating test function `ψ ∈ [−1, 1]` into the density
/// `ρ = c(ψ + 1)`. At `t = c` the survival integrals of `E_A ρ` and `E_{A_n} ρ`
/// differ by `c/2` times the gap of the norm test, so `E_A ρ` fails to be the
/// corresponding limit of `E_{A_n} ρ`.
pub fn witness_density(space: &Arc<FiniteSpace>, psi: &[f64]) -> Result<Density> {
    let shifted: Vec<f64> = psi.iter().map(|v| v + 1.0).collect();
    Density::normalized(space.clone(), shifted)
}

fn alpha_limit_check(f: &Density, seq: &DensitySequence, side: Side, tol: f64) -> Result<bool> {
    for g in &seq.period {
        ensure_same(f.space(), g.space())?;
    }
    let mut profiles = Vec::with_capacity(seq.period.len() + 1);
    profiles.push(f.survival_profile());
    profiles.extend(seq.period.iter().map(Density::survival_profile));
    let refs: Vec<_> = profiles.iter().collect();
    for t in profile_points(&refs) {
        let tail = profiles[1..].iter().map(|p| p.eval(t));
        if violates(side, profiles[0].eval(t), tail, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `limsup_n α_{f_n}(t) ≤ α_f(t) + tol` for all `t ≥ 0`.
pub fn is_upper_limit_density(f: &Density, seq: &DensitySequence, tol: f64) -> Result<bool> {
    alpha_limit_check(f, seq, Side::Upper, tol)
}

/// `α_f(t) ≤ liminf_n α_{f_n}(t) + tol` for all `t ≥ 0`.
pub fn is_lower_limit_density(f: &Density, seq: &DensitySequence, tol: f64) -> Result<bool> {
    alpha_limit_check(f, seq, Side::Lower, tol)
}

/// The same verdict as [`is_upper_limit_density`] / [`is_lower_limit_density`]
/// but phrased through the moments `∫|f − t| dξ` at the kinks.
pub fn limit_by_abs_moments(f: &Density, seq: &DensitySequence, side: Side, tol: f64) -> Result<bool> {
    for g in &seq.period {
        ensure_same(f.space(), g.space())?;
    }
    let mut profiles = Vec::with_capacity(seq.period.len() + 1);
    profiles.push(f.survival_profile());
    profiles.extend(seq.period.iter().map(Density::survival_profile));
    let refs: Vec<_> = profiles.iter().collect();
    for t in profile_points(&refs) {
        let mut tail = Vec::with_capacity(seq.period.len());
        for g in &seq.period {
            tail.push(g.abs_moment(t)?);
        }
        if violates(side, f.abs_moment(t)?, tail.into_iter(), tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The four entropies of the semicontinuity sandwich
/// `H(A⁻) ≤ min_n H(A_n) ≤ max_n H(A_n) ≤ H(A⁺)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Semicontinuity {
    pub h_minus: f64,
    pub min_period: f64,
    pub max_period: f64,
    pub h_plus: f64,
    pub ok: bool,
}

/// Slack allowed at each step of the semicontinuity chain.
pub const SEMICONTINUITY_SLACK: f64 = 1e-10;

pub fn semicontinuity_experiment(phi: &dyn Phi, rho: &Density, seq: &PartitionSequence) -> Result<Semicontinuity> {
    let limits = kudo_limits(seq);
    let h_minus = h_phi(phi, rho, &limits.a_minus)?;
    let h_plus = h_phi(phi, rho, &limits.a_plus)?;
    let mut min_period = f64::INFINITY;
    let mut max_period = f64::NEG_INFINITY;
    for p in &seq.period {
        let h = ent(phi, &p.cond_exp_density(rho)?);
        min_period = min_period.min(h);
        max_period = max_period.max(h);
    }
    let s = SEMICONTINUITY_SLACK;
    Ok(Semicontinuity {
        h_minus,
        min_period,
        max_period,
        h_plus,
        ok: h_minus <= min_period + s && min_period <= max_period + s && max_period <= h_plus + s,
    })
}

/// `max_n ‖E_{A⁺} f − E_{A_n} f‖₁` over the period; zero iff the sequence
/// converges strongly on `f`.
pub fn strong_convergence_gap(seq: &PartitionSequence, f: &[f64]) -> Result<f64> {
    let top = kudo_limits(seq).a_plus.cond_exp(f)?;
    let mut gap: f64 = 0.0;
    for p in &seq.period {
        gap = gap.max(seq.space.l1_distance(&top, &p.cond_exp(f)?));
    }
    Ok(gap)
}

/// `max_n ‖E_{A_n} φ − E_{A_n} E_A φ‖₁` over the period.
pub fn projection_defect(seq: &PartitionSequence, a: &Partition, phi: &[f64]) -> Result<f64> {
    ensure_same(&seq.space, a.space())?;
    let projected = a.cond_exp(phi)?;
    let mut worst: f64 = 0.0;
    for p in &seq.period {
        let lhs = p.cond_exp(phi)?;
        let rhs = p.cond_exp(&projected)?;
        worst = worst.max(seq.space.l1_distance(&lhs, &rhs));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::BuiltinPhi;
    use crate::space::EQ_TOL;
    use alloc::vec;

    fn setup() -> (Arc<FiniteSpace>, Partition, Partition) {
        let s = FiniteSpace::uniform(4).unwrap();
        let p = Partition::from_blocks(s.clone(), &[vec![0, 1], vec![2, 3]]).unwrap();
        let q = Partition::from_blocks(s.clone(), &[vec![0, 2], vec![1, 3]]).unwrap();
        (s, p, q)
    }

    fn rho(s: &Arc<FiniteSpace>) -> Density {
        Density::new(s.clone(), vec![1.5, 0.5, 1.25, 0.75]).unwrap()
    }

    const ALL: TestFamily = TestFamily::AllEvents;

    #[test]
    fn constant_sequence() {
        let (_, p, _) = setup();
        let k = kudo_limits(&PartitionSequence::constant(p.clone()));
        assert_eq!(k.a_plus, p);
        assert_eq!(k.a_minus, p);
        assert!(k.converges);
    }

    #[test]
    fn alternating_sequence() {
        let (s, p, q) = setup();
        let seq = PartitionSequence::new(vec![], vec![p.clone(), q.clone()]).unwrap();
        let k = kudo_limits(&seq);
        assert_eq!(k.a_plus, Partition::discrete(s.clone()));
        assert_eq!(k.a_minus, Partition::trivial(s.clone()));
        assert!(!k.converges);
        assert!(verify_sigma_membership(&seq, &k.a_plus, Side::Upper, ALL, EQ_TOL).unwrap());
        assert!(verify_sigma_membership(&seq, &k.a_minus, Side::Lower, ALL, EQ_TOL).unwrap());
        assert!(!verify_sigma_membership(&seq, &p, Side::Upper, ALL, EQ_TOL).unwrap());
        let t = Partition::trivial(s);
        assert!(verify_sigma_membership(&seq, &t, Side::Lower, ALL, EQ_TOL).unwrap());
    }

    #[test]
    fn preperiod_is_ignored() {
        let (s, _, _) = setup();
        let t = Partition::trivial(s.clone());
        let seq = PartitionSequence::new(vec![Partition::discrete(s)], vec![t.clone()]).unwrap();
        let k = kudo_limits(&seq);
        assert_eq!((k.a_plus, k.a_minus), (t.clone(), t));
        assert_eq!(seq.nth(0).num_blocks(), 4);
        assert_eq!(seq.nth(7).num_blocks(), 1);
    }

    #[test]
    fn empty_period_rejected() {
        assert_eq!(PartitionSequence::new(vec![], vec![]), Err(Error::EmptyPeriod));
    }

    #[test]
    fn density_limits() {
        let (s, p, q) = setup();
        let r = rho(&s);
        let c = DensitySequence::constant(r.clone());
        assert!(is_upper_limit_density(&r, &c, EQ_TOL).unwrap());
        assert!(is_lower_limit_density(&r, &c, EQ_TOL).unwrap());

        let seq = PartitionSequence::new(vec![], vec![p.clone(), q.clone()]).unwrap();
        let images = seq.images(&r).unwrap();
        let top = p.join(&q).unwrap().cond_exp_density(&r).unwrap();
        assert!(is_upper_limit_density(&top, &images, EQ_TOL).unwrap());
        let bottom = p.meet(&q).unwrap().cond_exp_density(&r).unwrap();
        assert!(bottom.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert!(is_lower_limit_density(&bottom, &images, EQ_TOL).unwrap());
        assert!(!is_upper_limit_density(&bottom, &images, EQ_TOL).unwrap());
        for side in [Side::Upper, Side::Lower] {
            for cand in [&top, &bottom] {
                assert_eq!(
                    limit_by_abs_moments(cand, &images, side, EQ_TOL).unwrap(),
                    alpha_limit_check(cand, &images, side, EQ_TOL).unwrap()
                );
            }
        }
    }

    #[test]
    fn witness_breaks_upper_limit() {
        let (s, p, q) = setup();
        let seq = PartitionSequence::new(vec![], vec![p.clone(), q]).unwrap();
        let psi = sigma_violation(&seq, &p, Side::Upper, ALL, EQ_TOL).unwrap().unwrap();
        let w = witness_density(&s, &psi).unwrap();
        let images = seq.images(&w).unwrap();
        let cand = p.cond_exp_density(&w).unwrap();
        assert!(!is_upper_limit_density(&cand, &images, EQ_TOL).unwrap());
    }

    #[test]
    fn semicontinuity_examples() {
        let (s, p, q) = setup();
        let phi = BuiltinPhi::Standard;
        let r = rho(&s);
        let c = semicontinuity_experiment(&phi, &r, &PartitionSequence::constant(p.clone())).unwrap();
        assert!(c.h_minus == c.min_period && c.min_period == c.max_period && c.max_period == c.h_plus);
        let seq = PartitionSequence::new(vec![], vec![p.clone(), q.clone()]).unwrap();
        let c = semicontinuity_experiment(&phi, &r, &seq).unwrap();
        assert!(c.ok);
        assert!(c.h_minus.abs() < 1e-15);
        assert_eq!(c.h_plus, ent(&phi, &r));
        let j = p.join(&q).unwrap();
        let seq = PartitionSequence::new(vec![], vec![p, j]).unwrap();
        let c = semicontinuity_experiment(&phi, &r, &seq).unwrap();
        assert!(c.ok);
        assert_eq!(c.max_period, c.h_plus);
    }

    #[test]
    fn strong_convergence_examples() {
        let (s, p, q) = setup();
        let r = rho(&s);
        assert_eq!(strong_convergence_gap(&PartitionSequence::constant(p.clone()), r.values()).unwrap(), 0.0);
        let alt = PartitionSequence::new(vec![], vec![p.clone(), q.clone()]).unwrap();
        assert!(strong_convergence_gap(&alt, r.values()).unwrap() > 0.0);
        let j = PartitionSequence::constant(p.join(&q).unwrap());
        assert_eq!(strong_convergence_gap(&j, r.values()).unwrap(), 0.0);
    }

    #[test]
    fn projection_defect_vanishes_at_a_plus() {
        let (_, p, q) = setup();
        let seq = PartitionSequence::new(vec![], vec![p.clone(), q.clone()]).unwrap();
        let a_plus = kudo_limits(&seq).a_plus;
        let phi = [0.3, -1.0, 2.0, 0.7];
        assert!(projection_defect(&seq, &a_plus, &phi).unwrap() <= 1e-12);
        assert!(projection_defect(&seq, &p, &phi).unwrap() > 0.1);
    }
}
