//! Exhaustive enumeration of the partition lattice of a small space.

use std::sync::Arc;

use kudo_core::partition::Partition;
use kudo_core::space::FiniteSpace;

/// Every set partition of `n` atoms as a restricted growth string:
/// `labels[0] = 0` and `labels[i] ≤ 1 + max(labels[..i])`.
pub fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut labels = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        out.push(labels.clone());
        // rightmost position that can still be incremented
        let mut i = n - 1;
        while i > 0 && labels[i] == maxes[i - 1] + 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        labels[i] += 1;
        maxes[i] = maxes[i - 1].max(labels[i]);
        for j in i + 1..n {
            labels[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

pub fn all_partitions(space: &Arc<FiniteSpace>) -> Vec<Partition> {
    restricted_growth_strings(space.len())
        .into_iter()
        .map(|l| Partition::from_labels(space.clone(), &l).expect("labels match the space"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(restricted_growth_strings(n).len(), b);
        }
        let s = FiniteSpace::uniform(4).unwrap();
        let all = all_partitions(&s);
        for (i, p) in all.iter().enumerate() {
            assert!(all[i + 1..].iter().all(|q| q != p));
        }
    }
}

/// `‖E_P(1_E − 1_{E^c})‖₁` for every event `E` containing atom 0, reusing one
/// buffer.
pub fn event_norms(p: &Partition) -> Vec<f64> {
    let space = p.space();
    let n = space.len();
    let masses = space.masses();
    let mut sums = vec![0.0; p.num_blocks()];
    (0u64..1 << (n - 1))
        .map(|m| {
            let mask = (m << 1) | 1;
            sums.iter_mut().for_each(|s| *s = 0.0);
            for (atom, &b) in p.labels().iter().enumerate() {
                if mask >> atom & 1 == 1 {
                    sums[b] += masses[atom];
                } else {
                    sums[b] -= masses[atom];
                }
            }
            sums.iter().map(|s| s.abs()).sum()
        })
        .collect()
}

/// Outcome of sweeping the whole lattice for members of `Σ⁺` and `Σ⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LatticeCheck {
    pub candidates: usize,
    pub upper_members: usize,
    pub lower_members: usize,
    pub a_plus_is_member: bool,
    pub a_minus_is_member: bool,
    /// Every member of `Σ⁺` contains `A⁺`.
    pub a_plus_is_minimum: bool,
    /// Every member of `Σ⁻` is contained in `A⁻`.
    pub a_minus_is_maximum: bool,
}

impl LatticeCheck {
    pub fn ok(&self) -> bool {
        self.a_plus_is_member && self.a_minus_is_member && self.a_plus_is_minimum && self.a_minus_is_maximum
    }
}

/// Classifies every partition of the space by the exhaustive signed-event
/// norm tests against the period of `seq`.
pub fn lattice_check(
    seq: &kudo_core::kudo::PartitionSequence,
    a_plus: &Partition,
    a_minus: &Partition,
    all: &[Partition],
    tol: f64,
) -> LatticeCheck {
    let period: Vec<Vec<f64>> = seq.period().iter().map(event_norms).collect();
    let events = period[0].len();
    let hi: Vec<f64> = (0..events).map(|e| period.iter().map(|v| v[e]).fold(f64::MIN, f64::max)).collect();
    let lo: Vec<f64> = (0..events).map(|e| period.iter().map(|v| v[e]).fold(f64::MAX, f64::min)).collect();
    let upper = |norms: &[f64]| norms.iter().zip(&hi).all(|(c, h)| *h <= c + tol);
    let lower = |norms: &[f64]| norms.iter().zip(&lo).all(|(c, l)| *c <= l + tol);
    let mut check = LatticeCheck {
        candidates: all.len(),
        upper_members: 0,
        lower_members: 0,
        a_plus_is_member: upper(&event_norms(a_plus)),
        a_minus_is_member: lower(&event_norms(a_minus)),
        a_plus_is_minimum: true,
        a_minus_is_maximum: true,
    };
    for c in all {
        let norms = event_norms(c);
        if upper(&norms) {
            check.upper_members += 1;
            check.a_plus_is_minimum &= c.refines(a_plus).expect("one space");
        }
        if lower(&norms) {
            check.lower_members += 1;
            check.a_minus_is_maximum &= a_minus.refines(c).expect("one space");
        }
    }
    check
}
