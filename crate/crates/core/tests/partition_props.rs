use std::collections::BTreeSet;
use std::sync::Arc;

use kudo_core::partition::{norm_dominates, Partition, TestFamily};
use kudo_core::space::{Density, FiniteSpace};
use proptest::prelude::*;

/// All events of `σ(P)`, as bitmasks: unions of blocks.
fn sigma(p: &Partition) -> BTreeSet<u32> {
    let blocks: Vec<u32> = p
        .blocks()
        .iter()
        .map(|b| b.iter().fold(0u32, |m, &x| m | 1 << x))
        .collect();
    (0u32..1 << blocks.len())
        .map(|sel| (0..blocks.len()).filter(|i| sel >> i & 1 == 1).fold(0, |m, i| m | blocks[i]))
        .collect()
}

/// Closes a family of events under complement and union.
fn generated(n: usize, events: &BTreeSet<u32>) -> BTreeSet<u32> {
    let full = (1u32 << n) - 1;
    let mut out: BTreeSet<u32> = events.iter().copied().chain([0, full]).collect();
    loop {
        let mut next = out.clone();
        for &a in &out {
            next.insert(full & !a);
            for &b in &out {
                next.insert(a | b);
            }
        }
        if next.len() == out.len() {
            return out;
        }
        out = next;
    }
}

fn partition(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..n, n)
}

fn space(n: usize) -> Arc<FiniteSpace> {
    let masses = (0..n).map(|i| 1.0 + i as f64).collect();
    let atoms = (0..n).map(|i| format!("w{i}")).collect();
    FiniteSpace::new(atoms, masses, true).unwrap()
}

fn pair() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    (1usize..8).prop_flat_map(|n| (Just(n), partition(n), partition(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn join_generates_both((n, a, b) in pair()) {
        let s = space(n);
        let p = Partition::from_labels(s.clone(), &a).unwrap();
        let q = Partition::from_labels(s, &b).unwrap();
        let both: BTreeSet<u32> = sigma(&p).union(&sigma(&q)).copied().collect();
        prop_assert_eq!(sigma(&p.join(&q).unwrap()), generated(n, &both));
    }

    #[test]
    fn meet_is_intersection((n, a, b) in pair()) {
        let s = space(n);
        let p = Partition::from_labels(s.clone(), &a).unwrap();
        let q = Partition::from_labels(s, &b).unwrap();
        let common: BTreeSet<u32> = sigma(&p).intersection(&sigma(&q)).copied().collect();
        prop_assert_eq!(sigma(&p.meet(&q).unwrap()), common);
    }

    #[test]
    fn refines_is_inclusion((n, a, b) in pair()) {
        let s = space(n);
        let p = Partition::from_labels(s.clone(), &a).unwrap();
        let q = Partition::from_labels(s, &b).unwrap();
        prop_assert_eq!(p.refines(&q).unwrap(), sigma(&q).is_subset(&sigma(&p)));
    }

    #[test]
    fn exhaustive_norm_test_decides_inclusion((n, a, b) in pair()) {
        let s = space(n);
        let p = Partition::from_labels(s.clone(), &a).unwrap();
        let q = Partition::from_labels(s, &b).unwrap();
        let verdict = norm_dominates(&p, &q, TestFamily::AllEvents, 1e-12).unwrap();
        prop_assert_eq!(verdict, sigma(&p).is_subset(&sigma(&q)));
    }

    #[test]
    fn lattice_laws((n, a, b) in pair()) {
        let s = space(n);
        let p = Partition::from_labels(s.clone(), &a).unwrap();
        let q = Partition::from_labels(s, &b).unwrap();
        let j = p.join(&q).unwrap();
        let m = p.meet(&q).unwrap();
        prop_assert_eq!(j.clone(), q.join(&p).unwrap());
        prop_assert_eq!(m.clone(), q.meet(&p).unwrap());
        prop_assert!(j.refines(&p).unwrap() && j.refines(&q).unwrap());
        prop_assert!(p.refines(&m).unwrap() && q.refines(&m).unwrap());
        prop_assert_eq!(p.join(&m).unwrap(), p.clone());
        prop_assert_eq!(p.meet(&j).unwrap(), p);
    }

    #[test]
    fn conditional_expectation_properties(
        (n, a, b) in pair(),
        w in prop::collection::vec(0.1f64..3.0, 8),
    ) {
        let s = space(n);
        let p = Partition::from_labels(s.clone(), &a).unwrap();
        let q = Partition::from_labels(s.clone(), &b).unwrap();
        let f = Density::normalized(s.clone(), w[..n].to_vec()).unwrap();
        let e = p.cond_exp(f.values()).unwrap();
        // integral preserved, idempotent, tower property through the join
        prop_assert!((s.integrate(&e) - 1.0).abs() < 1e-12);
        let ee = p.cond_exp(&e).unwrap();
        prop_assert!(e.iter().zip(&ee).all(|(x, y)| (x - y).abs() < 1e-12));
        let j = p.join(&q).unwrap();
        let tower = p.cond_exp(&j.cond_exp(f.values()).unwrap()).unwrap();
        prop_assert!(e.iter().zip(&tower).all(|(x, y)| (x - y).abs() < 1e-12));
        // contraction in L¹
        prop_assert!(s.l1_norm(&e) <= s.l1_norm(f.values()) + 1e-12);
    }
}
