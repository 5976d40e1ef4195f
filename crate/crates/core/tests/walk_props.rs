use kudo_core::walk::cocycle::{cocycle_defect, rn_density};
use kudo_core::walk::furstenberg::furstenberg_exact;
use kudo_core::walk::harmonic::{CylinderSpace, StepLaw};
use kudo_core::walk::word::{reduced_words, Word};
use proptest::prelude::*;

/// `(2k − 1)^(2|g ∧ b| − |g|)`, with `g ∧ b` the common prefix.
fn horofunction(k: usize, g: &Word, b: &Word) -> f64 {
    let q = (2 * k - 1) as f64;
    q.powi(2 * g.common_prefix_len(b.letters()) as i32 - g.len() as i32)
}

#[test]
fn first_letter_entropy_oracle() {
    // −ln ρ_{x⁻¹} is −ln q on [x⁻¹] (mass 1/2k) and ln q elsewhere
    for k in 2..=4 {
        let q = (2 * k - 1) as f64;
        let m = 1.0 / (2 * k) as f64;
        let oracle = (1.0 - 2.0 * m) * q.ln();
        let cyl = CylinderSpace::new(StepLaw::uniform(k).unwrap(), 2).unwrap();
        assert!((furstenberg_exact(&cyl) - oracle).abs() < 1e-12);
    }
    assert!((0.5 * 3f64.ln() - 0.549_306_144_334_054_9).abs() < 1e-15);
}

#[test]
fn uniform_density_is_horofunction() {
    let k = 2;
    let cyl = CylinderSpace::new(StepLaw::uniform(k).unwrap(), 5).unwrap();
    for n in 0..=3 {
        for g in reduced_words(k, n) {
            let rho = rn_density(&cyl, &g).unwrap();
            for (u, &v) in cyl.words().iter().zip(rho.values()) {
                let want = horofunction(k, &g, u);
                assert!((v - want).abs() <= 1e-12 * want);
            }
            let lambda = 3f64.powi(g.len() as i32);
            assert!(rho.values().iter().all(|&v| v <= lambda * (1.0 + 1e-12) && v * lambda >= 1.0 - 1e-12));
        }
    }
}

fn law() -> impl Strategy<Value = StepLaw> {
    prop::collection::vec(0.05f64..1.0, 4).prop_map(|w| {
        let s: f64 = w.iter().sum();
        let mut p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let rest: f64 = p[..3].iter().sum();
        p[3] = 1.0 - rest;
        StepLaw::new(2, p).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cocycle_for_random_laws(law in law(), i in 0usize..12, j in 0usize..12) {
        let cyl = CylinderSpace::new(law, 4).unwrap();
        let words = reduced_words(2, 2);
        let (g1, g2) = (&words[i], &words[j]);
        prop_assert!(cocycle_defect(&cyl, g1, g2).unwrap() < 1e-12);
        let rho = rn_density(&cyl, g1).unwrap();
        prop_assert!((cyl.space().integrate(rho.values()) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn entropy_positive_and_stable(law in law()) {
        let h1 = furstenberg_exact(&CylinderSpace::new(law.clone(), 1).unwrap());
        let h3 = furstenberg_exact(&CylinderSpace::new(law, 3).unwrap());
        prop_assert!(h1 > 0.0);
        prop_assert!((h1 - h3).abs() < 1e-11);
    }
}
