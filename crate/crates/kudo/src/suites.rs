//! Randomized verification suites.
//!
//! Case `i` of a run with seed `s` draws everything from its own generator
//! seeded with `s + i`, so cases are independent, replayable one by one and
//! may run on any number of threads.

use std::sync::Arc;

use kudo_core::entropy::{self, SANDWICH_SLACK};
use kudo_core::kudo::{self, PartitionSequence, Side};
use kudo_core::partition::{Partition, TestFamily};
use kudo_core::phi::{BuiltinPhi, Phi};
use kudo_core::space::{dominates_second_order, Density, FiniteSpace};
use kudo_core::walk::cocycle::cocycle_defect;
use kudo_core::walk::eta::eta_mu;
use kudo_core::walk::experiment::chained_bound_check;
use kudo_core::walk::furstenberg::{entropy_identity_check, kernel_condition_check, Kernel};
use kudo_core::walk::harmonic::{CylinderSpace, StepLaw};
use kudo_core::walk::translate::transform_identity;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Context, Result};
use crate::generate::{self, case_rng};
use crate::lattice;
use crate::report::Violation;

/// Outcome of one case: the two sides of the checked relation.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
    pub inputs: Value,
}

impl Case {
    /// `lhs ≤ rhs + tol`.
    fn at_most(lhs: f64, rhs: f64, tol: f64, inputs: Value) -> Self {
        Case {
            lhs,
            rhs,
            ok: lhs <= rhs + tol,
            inputs,
        }
    }

    /// Boolean checks: `lhs` counts the failed ones.
    fn failures(failed: usize, inputs: Value) -> Self {
        Case {
            lhs: failed as f64,
            rhs: 0.0,
            ok: failed == 0,
            inputs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub seed: u64,
    pub count: u64,
    pub passed: u64,
    pub failed: u64,
    /// Largest `lhs − rhs` over all cases.
    pub worst_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRun {
    pub summary: SuiteSummary,
    pub violations: Vec<Violation>,
}

type CaseFn = fn(&mut ChaCha8Rng, Option<f64>) -> Result<Case>;

struct Suite {
    name: &'static str,
    about: &'static str,
    run: CaseFn,
}

const SUITES: &[Suite] = &[
    Suite {
        name: "moment_identity",
        about: "∫|f − t| = 2α_f(t) − ∫f + t on spaces of up to 64 atoms",
        run: moment_identity,
    },
    Suite {
        name: "layer_cake",
        about: "direct and layer-cake Φ-entropy agree for t ln t, t², t³",
        run: layer_cake,
    },
    Suite {
        name: "sandwich",
        about: "|Ent − M(δ)| ≤ −Φ(δ) − δΦ'(δ) for δ ∈ {0.2, 0.5, 0.9}·t_o",
        run: sandwich,
    },
    Suite {
        name: "sandwich_stated",
        about: "the sharper form −2max(Φ(δ), δΦ'(δ)); expected to fail, mostly at δ = 0.9·t_o",
        run: sandwich_stated,
    },
    Suite {
        name: "pck",
        about: "‖1 − f‖₁ ≤ √2 Ent(f)^(1/2)",
        run: pck,
    },
    Suite {
        name: "domination",
        about: "E_A f ⪯ f, and α-profiles and absolute moments give the same verdict",
        run: domination,
    },
    Suite {
        name: "kudo",
        about: "A⁺ ∈ Σ⁺, A⁻ ∈ Σ⁻, A⁻ ⊆ A⁺, and A⁺ = A⁻ iff strong convergence",
        run: kudo_case,
    },
    Suite {
        name: "lattice",
        about: "A⁺ is the least element of Σ⁺ and A⁻ the greatest of Σ⁻ over the whole lattice",
        run: lattice_case,
    },
    Suite {
        name: "semicontinuity",
        about: "H(A⁻) ≤ min H(A_n) ≤ max H(A_n) ≤ H(A⁺) for 20 bounded densities",
        run: semicontinuity,
    },
    Suite {
        name: "limit_dictionary",
        about: "Σ± membership matches the limit behaviour of E_A ρ, with witnesses for non-members",
        run: limit_dictionary,
    },
    Suite {
        name: "quant_bound",
        about: "max ‖E_{A⁺}ρ − E_{A_n}ρ‖₁ ≤ √2 (H(A⁺) − min H(A_n))^(1/2)",
        run: quant_bound,
    },
    Suite {
        name: "tower",
        about: "E_{A_n} E_{A⁺} φ = E_{A_n} φ along the period",
        run: tower,
    },
    Suite {
        name: "cocycle",
        about: "ρ_{g1 g2} = ρ_{g1} · ρ_{g2} ∘ g1⁻¹ on cylinders",
        run: cocycle,
    },
    Suite {
        name: "layer_identity",
        about: "Σ_g μ^{*j}(g) Ent(ρ_g) = j h for every layer",
        run: layer_identity,
    },
    Suite {
        name: "transform",
        about: "‖E_{gA} f‖₁ = ‖E_A(ρ_{g⁻¹} · f∘g)‖₁",
        run: transform,
    },
    Suite {
        name: "chained_bound",
        about: "‖∫f_ψ − E_A f_ψ‖₁ ≤ √2 ‖ψ‖_∞ h(A)^(1/2) for 100 ψ along a sequence",
        run: chained_bound,
    },
    Suite {
        name: "kernel",
        about: "bounded densities spanning the cylinder functions at K = 2L",
        run: kernel,
    },
];

/// `(name, description)` of every suite.
pub fn suites() -> impl Iterator<Item = (&'static str, &'static str)> {
    SUITES.iter().map(|s| (s.name, s.about))
}

fn find(name: &str) -> Result<&'static Suite> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| {
        let names: Vec<_> = SUITES.iter().map(|s| s.name).collect();
        CliError::Usage(format!("unknown suite `{name}`; expected one of {}", names.join(", ")))
    })
}

pub fn run_case(suite: &str, seed: u64, index: u64, tol: Option<f64>) -> Result<Case> {
    (find(suite)?.run)(&mut case_rng(seed, index), tol)
}

/// Runs `count` cases in parallel; results are collected in case order.
pub fn run_suite(suite: &str, seed: u64, count: u64, tol: Option<f64>) -> Result<SuiteRun> {
    let s = find(suite)?;
    let cases: Vec<Case> = (0..count)
        .into_par_iter()
        .map(|i| (s.run)(&mut case_rng(seed, i), tol))
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut worst_gap = f64::NEG_INFINITY;
    for (i, c) in cases.into_iter().enumerate() {
        let gap = c.lhs - c.rhs;
        worst_gap = worst_gap.max(gap);
        if !c.ok {
            violations.push(Violation {
                suite: s.name.to_string(),
                case: i as u64,
                inputs: c.inputs,
                lhs: c.lhs,
                rhs: c.rhs,
                gap,
            });
        }
    }
    let failed = violations.len() as u64;
    Ok(SuiteRun {
        summary: SuiteSummary {
            suite: s.name.to_string(),
            seed,
            count,
            passed: count - failed,
            failed,
            worst_gap,
        },
        violations,
    })
}

fn density_json(f: &Density) -> Value {
    json!({ "masses": f.space().masses(), "values": f.values() })
}

fn labels_json(ps: &[Partition]) -> Value {
    ps.iter().map(|p| p.labels().to_vec()).collect()
}

fn sequence_json(seq: &PartitionSequence) -> Value {
    json!({
        "masses": seq.space().masses(),
        "preperiod": labels_json(seq.preperiod()),
        "period": labels_json(seq.period()),
    })
}

pub const PHIS: [BuiltinPhi; 3] = [BuiltinPhi::Standard, BuiltinPhi::Power(2.0), BuiltinPhi::Power(3.0)];

fn random_phi(rng: &mut ChaCha8Rng) -> BuiltinPhi {
    match rng.random_range(0..3) {
        0 => BuiltinPhi::Standard,
        1 => BuiltinPhi::Power(2.0),
        _ => BuiltinPhi::Power(3.0),
    }
}

/// The sequence shared by the lattice, semicontinuity, limit-dictionary and
/// quantitative suites: it is the first thing drawn from the case generator.
pub fn small_sequence(rng: &mut ChaCha8Rng) -> (Arc<FiniteSpace>, PartitionSequence) {
    let space = generate::space(rng, 8);
    let seq = generate::sequence(rng, &space, 3);
    (space, seq)
}

pub const DENSITIES_PER_SEQUENCE: usize = 20;

fn moment_identity(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let space = generate::space(rng, 64);
    let f = generate::density(rng, &space);
    // land on a kink a quarter of the time
    let t = if rng.random_range(0..4) == 0 {
        f.values()[rng.random_range(0..space.len())]
    } else {
        rng.random_range(0.0..=1.2 * f.max())
    };
    let lhs = f.abs_moment(t).context("moment")?;
    let rhs = 2.0 * f.alpha(t).context("alpha")? - space.integrate(f.values()) + t;
    Ok(Case::at_most((lhs - rhs).abs(), 0.0, tol.unwrap_or(1e-10), json!({ "density": density_json(&f), "t": t })))
}

fn layer_cake(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let space = generate::space(rng, 64);
    let f = generate::density(rng, &space);
    let gap = PHIS
        .iter()
        .map(|phi| (entropy::ent(phi, &f) - entropy::ent_layer_cake(phi, &f)).abs())
        .fold(0.0, f64::max);
    Ok(Case::at_most(gap, 0.0, tol.unwrap_or(1e-9), json!({ "density": density_json(&f) })))
}

pub const SANDWICH_FRACTIONS: [f64; 3] = [0.2, 0.5, 0.9];

fn sandwich_with(rng: &mut ChaCha8Rng, tol: Option<f64>, stated: bool) -> Result<Case> {
    let space = generate::space(rng, 32);
    // a constant density every eighth case: the extreme of the remainder
    let f = if rng.random_range(0..8) == 0 {
        Density::one(space.clone())
    } else {
        generate::density(rng, &space)
    };
    let mut worst: Option<(f64, f64, &BuiltinPhi, f64)> = None;
    for phi in &PHIS {
        for frac in SANDWICH_FRACTIONS {
            let delta = frac * phi.t_o();
            let r = entropy::sandwich_check(phi, &f, delta).context("sandwich")?;
            let lhs = (r.ent - r.sandwich.middle).abs();
            let rhs = if stated { r.sandwich.stated_bound } else { r.sandwich.bound };
            if worst.map_or(true, |(l, r, _, _)| lhs - rhs > l - r) {
                worst = Some((lhs, rhs, phi, delta));
            }
        }
    }
    let (lhs, rhs, phi, delta) = worst.expect("nine cut-offs");
    let inputs = json!({ "density": density_json(&f), "phi": phi.name(), "delta": delta });
    Ok(Case::at_most(lhs, rhs, tol.unwrap_or(SANDWICH_SLACK), inputs))
}

fn sandwich(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    sandwich_with(rng, tol, false)
}

fn sandwich_stated(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    sandwich_with(rng, tol, true)
}

fn pck(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let space = generate::space(rng, 64);
    let f = generate::density(rng, &space);
    let g = entropy::pck_gap(&f);
    Ok(Case::at_most(g.lhs, g.rhs, tol.unwrap_or(1e-12), json!({ "density": density_json(&f) })))
}

fn domination(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let tol = tol.unwrap_or(1e-12);
    let space = generate::space(rng, 16);
    let f = generate::density(rng, &space);
    let g = generate::density(rng, &space);
    let a = generate::partition(rng, &space);
    let ef = a.cond_exp_density(&f).context("conditional expectation")?;
    let mut failed = 0;
    // Jensen: conditioning can only lower the survival integral
    failed += usize::from(!dominates_second_order(&ef, &f, tol).context("domination")?);
    for (x, y) in [(&f, &g), (&g, &f), (&ef, &f), (&f, &ef)] {
        let by_alpha = dominates_second_order(x, y, tol).context("domination")?;
        let by_moments = kudo::limit_by_abs_moments(y, &kudo::DensitySequence::constant(x.clone()), Side::Upper, 2.0 * tol)
            .context("moments")?;
        failed += usize::from(by_alpha != by_moments);
    }
    let inputs = json!({ "f": density_json(&f), "g": density_json(&g), "partition": a.labels() });
    Ok(Case::failures(failed, inputs))
}

fn kudo_case(rng: &mut ChaCha8Rng, _tol: Option<f64>) -> Result<Case> {
    let space = generate::space(rng, 12);
    let seq = generate::sequence(rng, &space, 4);
    let limits = kudo::kudo_limits(&seq);
    let family = TestFamily::AllEvents;
    let mut failed = 0;
    failed += usize::from(!kudo::verify_sigma_membership(&seq, &limits.a_plus, Side::Upper, family, 1e-12).context("Σ⁺")?);
    failed += usize::from(!kudo::verify_sigma_membership(&seq, &limits.a_minus, Side::Lower, family, 1e-12).context("Σ⁻")?);
    failed += usize::from(!limits.a_plus.refines(&limits.a_minus).context("refinement")?);
    let f = generate::signed_function(rng, space.len());
    let gap = kudo::strong_convergence_gap(&seq, &f).context("strong convergence")?;
    if limits.converges {
        failed += usize::from(gap > 1e-12);
    }
    // a non-convergent sequence must fail strong convergence on some event
    if !limits.converges {
        let moved = kudo::sigma_violation(&seq, &limits.a_minus, Side::Upper, family, 1e-12).context("Σ⁺")?;
        failed += usize::from(moved.is_none());
    }
    Ok(Case::failures(failed, json!({ "sequence": sequence_json(&seq) })))
}

fn lattice_case(rng: &mut ChaCha8Rng, _tol: Option<f64>) -> Result<Case> {
    let (space, seq) = small_sequence(rng);
    let limits = kudo::kudo_limits(&seq);
    let all = lattice::all_partitions(&space);
    let check = lattice::lattice_check(&seq, &limits.a_plus, &limits.a_minus, &all, 1e-12);
    let failed = [
        check.a_plus_is_member,
        check.a_minus_is_member,
        check.a_plus_is_minimum,
        check.a_minus_is_maximum,
    ]
    .iter()
    .filter(|ok| !**ok)
    .count();
    Ok(Case::failures(failed, json!({ "sequence": sequence_json(&seq), "check": check })))
}

fn semicontinuity(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let tol = tol.unwrap_or(kudo::SEMICONTINUITY_SLACK);
    let (space, seq) = small_sequence(rng);
    let phi = random_phi(rng);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_rho = None;
    for _ in 0..DENSITIES_PER_SEQUENCE {
        let rho = generate::bounded_density(rng, &space);
        let s = kudo::semicontinuity_experiment(&phi, &rho, &seq).context("semicontinuity")?;
        let gap = (s.h_minus - s.min_period)
            .max(s.min_period - s.max_period)
            .max(s.max_period - s.h_plus);
        if gap > worst {
            worst = gap;
            worst_rho = Some(rho);
        }
    }
    let inputs = json!({
        "sequence": sequence_json(&seq),
        "phi": phi.name(),
        "rho": worst_rho.map(|r| r.values().to_vec()),
    });
    Ok(Case::at_most(worst, 0.0, tol, inputs))
}

/// Every candidate on either side: members must make `E_C ρ` the matching
/// limit for every sampled `ρ`; non-members must be refuted by the witness
/// density built from their violating test function.
fn limit_dictionary(rng: &mut ChaCha8Rng, _tol: Option<f64>) -> Result<Case> {
    let (space, seq) = small_sequence(rng);
    let limits = kudo::kudo_limits(&seq);
    let rhos: Vec<Density> = (0..DENSITIES_PER_SEQUENCE)
        .map(|_| generate::bounded_density(rng, &space))
        .collect();
    let mut candidates = vec![limits.a_plus.clone(), limits.a_minus.clone()];
    candidates.extend(seq.period().iter().cloned());
    candidates.push(generate::partition(rng, &space));
    candidates.push(generate::partition(rng, &space));
    let mut failed = 0;
    let mut checks = 0;
    for side in [Side::Upper, Side::Lower] {
        for c in &candidates {
            checks += 1;
            let violation = kudo::sigma_violation(&seq, c, side, TestFamily::AllEvents, 1e-12).context("norm test")?;
            match violation {
                None => {
                    for rho in &rhos {
                        let images = seq.images(rho).context("images")?;
                        let top = c.cond_exp_density(rho).context("conditional expectation")?;
                        let by_alpha = limit_check(&top, &images, side, 1e-12)?;
                        let by_moments = kudo::limit_by_abs_moments(&top, &images, side, 2e-12).context("moments")?;
                        failed += usize::from(!by_alpha || !by_moments);
                    }
                }
                Some(psi) => {
                    let gap = norm_gap(&seq, c, side, &psi)?;
                    let w = kudo::witness_density(&space, &psi).context("witness")?;
                    let shifted: Vec<f64> = psi.iter().map(|p| p + 1.0).collect();
                    let c_const = 1.0 / space.integrate(&shifted);
                    let images = seq.images(&w).context("images")?;
                    let top = c.cond_exp_density(&w).context("conditional expectation")?;
                    // predicted α-gap is c·gap/2, so a quarter of it must still show
                    failed += usize::from(limit_check(&top, &images, side, c_const * gap / 4.0)?);
                }
            }
        }
    }
    let inputs = json!({ "sequence": sequence_json(&seq), "candidates": labels_json(&candidates), "checks": checks });
    Ok(Case::failures(failed, inputs))
}

fn limit_check(f: &Density, seq: &kudo::DensitySequence, side: Side, tol: f64) -> Result<bool> {
    match side {
        Side::Upper => kudo::is_upper_limit_density(f, seq, tol),
        Side::Lower => kudo::is_lower_limit_density(f, seq, tol),
    }
    .context("limit")
}

/// How far `A` misses the norm test on `ψ`.
fn norm_gap(seq: &PartitionSequence, a: &Partition, side: Side, psi: &[f64]) -> Result<f64> {
    let own = a.cond_exp_norm(psi).context("norm")?;
    let mut norms = Vec::new();
    for p in seq.period() {
        norms.push(p.cond_exp_norm(psi).context("norm")?);
    }
    Ok(match side {
        Side::Upper => norms.iter().fold(f64::MIN, |m, v| m.max(*v)) - own,
        Side::Lower => own - norms.iter().fold(f64::MAX, |m, v| m.min(*v)),
    })
}

/// Densities drawn for the quantitative bound lie in `[1/λ, λ]` with this `λ`.
pub const MAX_LAMBDA: f64 = 4.0;

fn quant_bound(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let tol = tol.unwrap_or(1e-9);
    let (space, seq) = small_sequence(rng);
    let limits = kudo::kudo_limits(&seq);
    let mut worst: Option<(f64, f64, Density)> = None;
    let mut lambda: f64 = 1.0;
    for _ in 0..DENSITIES_PER_SEQUENCE {
        let rho = generate::bounded_density(rng, &space);
        let q = entropy::quant_bound_check(&rho, &limits.a_plus, seq.period()).context("quantitative bound")?;
        lambda = lambda.max(q.lambda);
        if worst.as_ref().map_or(true, |(l, r, _)| q.lhs - q.rhs > l - r) {
            worst = Some((q.lhs, q.rhs, rho));
        }
    }
    let (lhs, rhs, rho) = worst.expect("densities drawn");
    let inputs = json!({ "sequence": sequence_json(&seq), "rho": rho.values(), "lambda": lambda });
    let mut case = Case::at_most(lhs, rhs, tol, inputs);
    case.ok &= lambda <= MAX_LAMBDA;
    Ok(case)
}

fn tower(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let space = generate::space(rng, 16);
    let seq = generate::sequence(rng, &space, 4);
    let phi = generate::signed_function(rng, space.len());
    let a_plus = kudo::kudo_limits(&seq).a_plus;
    let defect = kudo::projection_defect(&seq, &a_plus, &phi).context("projection")?;
    Ok(Case::at_most(defect, 0.0, tol.unwrap_or(1e-10), json!({ "sequence": sequence_json(&seq), "phi": phi })))
}

fn law_json(law: &StepLaw) -> Value {
    json!({ "k": law.rank(), "probs": law.probs() })
}

fn cocycle(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let k = rng.random_range(2..=3);
    let law = generate::step_law(rng, k);
    let depth = 4;
    let n1 = rng.random_range(0..depth);
    let n2 = rng.random_range(0..=depth - n1);
    let g1 = generate::word(rng, k, n1);
    let g2 = generate::word(rng, k, n2);
    let inputs = json!({ "law": law_json(&law), "depth": depth, "g1": g1.to_text(), "g2": g2.to_text() });
    let cyl = CylinderSpace::new(law, depth).context("cylinders")?;
    let defect = cocycle_defect(&cyl, &g1, &g2).context("cocycle")?;
    Ok(Case::at_most(defect, 0.0, tol.unwrap_or(1e-10), inputs))
}

fn layer_identity(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let tol = tol.unwrap_or(kudo_core::walk::furstenberg::IDENTITY_TOL);
    let law = generate::step_law(rng, 2);
    let terms = rng.random_range(1..=3);
    let inputs = json!({ "law": law_json(&law), "depth": 4, "terms": terms });
    let eta = eta_mu(&law, terms);
    let cyl = CylinderSpace::new(law, 4).context("cylinders")?;
    let r = entropy_identity_check(&cyl, &eta).context("identity")?;
    let gap = r
        .layers
        .iter()
        .map(|l| (l.lhs - l.rhs).abs())
        .fold((r.lhs_total - r.rhs_total).abs(), f64::max);
    Ok(Case::at_most(gap, 0.0, tol, inputs))
}

fn transform(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let law = generate::step_law(rng, 2);
    let len = rng.random_range(0..=2);
    let g = generate::word(rng, 2, len);
    let from = CylinderSpace::new(law.clone(), 2).context("cylinders")?;
    let to = CylinderSpace::new(law.clone(), 2 + g.len()).context("cylinders")?;
    let a = generate::partition(rng, from.space());
    let f = generate::signed_function(rng, from.len());
    let r = transform_identity(&a, &f, &from, &to, &g).context("transport")?;
    let inputs = json!({ "law": law_json(&law), "g": g.to_text(), "partition": a.labels(), "f": f });
    Ok(Case::at_most((r.lhs - r.rhs).abs(), 0.0, tol.unwrap_or(1e-10), inputs))
}

pub const PSI_PER_SEQUENCE: usize = 100;

fn chained_bound(rng: &mut ChaCha8Rng, tol: Option<f64>) -> Result<Case> {
    let tol = tol.unwrap_or(kudo_core::walk::experiment::BOUND_SLACK);
    let cyl = CylinderSpace::new(StepLaw::uniform(2).context("law")?, 2).context("cylinders")?;
    let kernel = Kernel::new(&cyl, &eta_mu(cyl.law(), 2)).context("kernel")?;
    let seq = generate::sequence(rng, cyl.space(), 3);
    let limits = kudo::kudo_limits(&seq);
    let mut worst: Option<(f64, f64, Vec<f64>)> = None;
    for _ in 0..PSI_PER_SEQUENCE {
        let psi = generate::signed_function(rng, kernel.entries().len());
        for a in seq.preperiod().iter().chain(seq.period()).chain([&limits.a_plus, &limits.a_minus]) {
            let b = chained_bound_check(&kernel, a, &psi).context("chained bound")?;
            if worst.as_ref().map_or(true, |(l, r, _)| b.lhs - b.rhs > l - r) {
                worst = Some((b.lhs, b.rhs, psi.clone()));
            }
        }
    }
    let (lhs, rhs, psi) = worst.expect("nonempty period");
    Ok(Case::at_most(lhs, rhs, tol, json!({ "sequence": sequence_json(&seq), "psi": psi })))
}

fn kernel(rng: &mut ChaCha8Rng, _tol: Option<f64>) -> Result<Case> {
    let law = generate::step_law(rng, 2);
    let depth = rng.random_range(1..=2);
    let eta = eta_mu(&law, 2 * depth);
    let inputs = json!({ "law": law_json(&law), "depth": depth, "terms": 2 * depth });
    let cyl = CylinderSpace::new(law, depth).context("cylinders")?;
    let r = kernel_condition_check(&cyl, &eta);
    Ok(Case::failures(usize::from(!r.bounded) + (r.atoms - r.rank), inputs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_few_cases() {
        for (name, _) in suites() {
            if name == "sandwich_stated" {
                continue;
            }
            let run = run_suite(name, 3, 8, None).unwrap();
            assert_eq!(run.summary.failed, 0, "{name}: {:?}", run.violations.first());
        }
    }

    #[test]
    fn stated_sandwich_fails_on_constants() {
        let run = run_suite("sandwich_stated", 1, 64, None).unwrap();
        assert!(run.summary.failed > 0);
        assert!(run.violations.iter().all(|v| v.gap > 0.0));
    }

    #[test]
    fn cases_replay() {
        let run = run_suite("moment_identity", 9, 5, None).unwrap();
        let again = run_case("moment_identity", 9, 3, None).unwrap();
        assert!(again.ok);
        assert_eq!(run.summary.count, 5);
        assert!(run_suite("nope", 0, 1, None).is_err());
    }
}
