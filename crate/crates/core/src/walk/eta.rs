//! The geometric average `η_μ = Σ_j 2^(−j) μ^{*j}` of convolution powers,
//! truncated after `K` terms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::harmonic::StepLaw;
use super::word::{Letter, Word};
use crate::math::powi;

/// `γ = Σ_j j 2^(−j)`.
pub const GAMMA: f64 = 2.0;

/// `Σ_{j ≤ terms} j 2^(−j)`.
pub fn gamma_truncated(terms: usize) -> f64 {
    (1..=terms).map(|j| j as f64 * powi(0.5, j as i32)).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eta {
    layers: Vec<BTreeMap<Word, f64>>,
    weights: BTreeMap<Word, f64>,
}

/// Exact convolution powers `μ^{*1}, …, μ^{*K}` and their weighted sum.
pub fn eta_mu(law: &StepLaw, terms: usize) -> Eta {
    let mut layers: Vec<BTreeMap<Word, f64>> = Vec::with_capacity(terms);
    let mut current: BTreeMap<Word, f64> = BTreeMap::new();
    current.insert(Word::identity(), 1.0);
    for _ in 0..terms {
        let mut next = BTreeMap::new();
        for (g, p) in &current {
            for x in 0..law.probs().len() as Letter {
                let mut h = g.clone();
                h.push(x);
                *next.entry(h).or_insert(0.0) += p * law.prob(x);
            }
        }
        layers.push(next.clone());
        current = next;
    }
    let mut weights = BTreeMap::new();
    for (j, layer) in layers.iter().enumerate() {
        let scale = powi(0.5, j as i32 + 1);
        for (g, p) in layer {
            *weights.entry(g.clone()).or_insert(0.0) += scale * p;
        }
    }
    Eta { layers, weights }
}

impl Eta {
    /// Number of convolution terms `K`.
    pub fn terms(&self) -> usize {
        self.layers.len()
    }

    /// `μ^{*j}` for `1 ≤ j ≤ K`.
    pub fn layer(&self, j: usize) -> &BTreeMap<Word, f64> {
        &self.layers[j - 1]
    }

    pub fn weights(&self) -> &BTreeMap<Word, f64> {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.values().sum()
    }

    /// Mass dropped by the truncation, `2^(−K)`.
    pub fn tail_mass(&self) -> f64 {
        powi(0.5, self.terms() as i32)
    }

    /// `Σ_{j ≤ K} j 2^(−j)`.
    pub fn gamma_truncated(&self) -> f64 {
        gamma_truncated(self.terms())
    }

    /// Longest word in the support.
    pub fn max_len(&self) -> usize {
        self.weights.keys().map(Word::len).max().unwrap_or(0)
    }
}
