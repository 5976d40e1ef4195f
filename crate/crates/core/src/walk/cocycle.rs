//! The Radon–Nikodym cocycle `ρ_g = d(gν)/dν` on cylinders.

use alloc::vec::Vec;

use super::harmonic::{CylinderSpace, HarmonicMeasure};
use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::math::abs;
use crate::space::Density;

/// `ν(g·[w])` for a nonempty reduced prefix `w`.
///
/// If `g · w` keeps part of `w`, the image is the cylinder of the reduced
/// product. If `g = v · w⁻¹` swallows all of `w`, the image is everything
/// except the cylinder `[v · w_last⁻¹]`.
pub fn image_mass(h: &HarmonicMeasure, g: &Word, w: &[Letter]) -> f64 {
    let wl = Word::from_letters(w.iter().copied());
    let c = g.cancellation(&wl);
    if c < w.len() {
        h.cylinder(g.mul(&wl).letters())
    } else {
        let keep = g.len() - w.len() + 1;
        1.0 - h.cylinder(&g.letters()[..keep])
    }
}

/// `ν(g⁻¹[u]) / ν([u])`: the average of `ρ_g` over the cylinder `[u]`. It is
/// the exact value of `ρ_g` there as soon as `|u| ≥ |g|`.
pub fn rn_on_cylinder(h: &HarmonicMeasure, g: &Word, u: &[Letter]) -> f64 {
    image_mass(h, &g.inverse(), u) / h.cylinder(u)
}

/// `ρ_g` on the depth-`L` cylinders; needs `|g| ≤ L` so that it is exactly
/// cylinder-measurable.
pub fn rn_density(cyl: &CylinderSpace, g: &Word) -> Result<Density> {
    if g.len() > cyl.depth() {
        return Err(Error::DepthExceeded {
            needed: g.len(),
            available: cyl.depth(),
        });
    }
    Ok(projected_rn_density(cyl, g))
}

/// Conditional expectation of `ρ_g` onto the depth-`L` cylinders, for any `g`.
pub fn projected_rn_density(cyl: &CylinderSpace, g: &Word) -> Density {
    let h = cyl.harmonic();
    let values: Vec<f64> = cyl.words().iter().map(|u| rn_on_cylinder(h, g, u.letters())).collect();
    Density::from_parts(cyl.space().clone(), values)
}

/// Largest relative defect of `ρ_{g1 g2}(b) = ρ_{g1}(b) · ρ_{g2}(g1⁻¹ b)` over
/// the depth-`L` cylinders. Needs `|g1| + |g2| ≤ L` and `|g1| < L`.
pub fn cocycle_defect(cyl: &CylinderSpace, g1: &Word, g2: &Word) -> Result<f64> {
    let depth = cyl.depth();
    if g1.len() + g2.len() > depth || g1.len() >= depth {
        return Err(Error::DepthExceeded {
            needed: (g1.len() + g2.len()).max(g1.len() + 1),
            available: depth,
        });
    }
    let h = cyl.harmonic();
    let g12 = g1.mul(g2);
    let g1_inv = g1.inverse();
    let mut worst: f64 = 0.0;
    for u in cyl.words() {
        let lhs = rn_on_cylinder(h, &g12, u.letters());
        let moved = g1_inv.mul(u);
        let rhs = rn_on_cylinder(h, g1, u.letters()) * rn_on_cylinder(h, g2, moved.letters());
        worst = worst.max(abs(lhs - rhs) / lhs);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::powi;
    use crate::walk::harmonic::StepLaw;
    use crate::walk::word::reduced_words;

    fn uniform(k: usize, depth: usize) -> CylinderSpace {
        CylinderSpace::new(StepLaw::uniform(k).unwrap(), depth).unwrap()
    }

    fn horofunction(k: usize, g: &Word, u: &Word) -> f64 {
        let q = (2 * k - 1) as f64;
        powi(q, 2 * g.common_prefix_len(u.letters()) as i32 - g.len() as i32)
    }

    #[test]
    fn identity_is_one() {
        let c = uniform(2, 3);
        let rho = rn_density(&c, &Word::identity()).unwrap();
        assert!(rho.values().iter().all(|&v| abs(v - 1.0) < 1e-15));
    }

    #[test]
    fn generator_example() {
        let c = uniform(2, 1);
        let a = Word::parse(2, "a").unwrap();
        let rho = rn_density(&c, &a).unwrap();
        for (u, &v) in c.words().iter().zip(rho.values()) {
            let want = if u.to_text() == "a" { 3.0 } else { 1.0 / 3.0 };
            assert!(abs(v - want) < 1e-14, "{u}: {v}");
        }
        assert!(abs(c.space().integrate(rho.values()) - 1.0) < 1e-15);
    }

    #[test]
    fn matches_horofunction_for_uniform_walks() {
        for k in 2..=3 {
            let depth = 4;
            let c = uniform(k, depth);
            for n in 0..=depth {
                for g in reduced_words(k, n) {
                    let rho = rn_density(&c, &g).unwrap();
                    for (u, &v) in c.words().iter().zip(rho.values()) {
                        let want = horofunction(k, &g, u);
                        assert!(abs(v - want) <= 1e-12 * want, "k={k} g={g} u={u}");
                    }
                    assert!(abs(c.space().integrate(rho.values()) - 1.0) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn depth_guard() {
        let c = uniform(2, 2);
        let g = Word::parse(2, "aba").unwrap();
        assert!(matches!(rn_density(&c, &g), Err(Error::DepthExceeded { .. })));
        // the projection is the cylinder average of the horofunction
        let rho = projected_rn_density(&c, &Word::parse(2, "aB").unwrap());
        let c1 = uniform(2, 1);
        let rho1 = projected_rn_density(&c1, &Word::parse(2, "aB").unwrap());
        assert!(abs(rho1.values()[0] - 11.0 / 3.0) < 1e-14);
        assert!(abs(c.space().integrate(rho.values()) - 1.0) < 1e-14);
    }

    #[test]
    fn cocycle_identity() {
        let laws = [
            StepLaw::uniform(2).unwrap(),
            StepLaw::new(2, alloc::vec![0.4, 0.1, 0.3, 0.2]).unwrap(),
        ];
        for law in laws {
            let c = CylinderSpace::new(law, 4).unwrap();
            for n1 in 0..=2 {
                for n2 in 0..=2 {
                    for g1 in reduced_words(2, n1) {
                        for g2 in reduced_words(2, n2) {
                            assert!(cocycle_defect(&c, &g1, &g2).unwrap() < 1e-12);
                        }
                    }
                }
            }
            let a = Word::parse(2, "a").unwrap();
            assert!(cocycle_defect(&c, &a, &a.inverse()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn skewed_law_normalises() {
        let law = StepLaw::new(2, alloc::vec![0.4, 0.1, 0.3, 0.2]).unwrap();
        let c = CylinderSpace::new(law, 3).unwrap();
        for n in 0..=3 {
            for g in reduced_words(2, n) {
                let rho = rn_density(&c, &g).unwrap();
                assert!(abs(c.space().integrate(rho.values()) - 1.0) < 1e-11);
            }
        }
    }
}
