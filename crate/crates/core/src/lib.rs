#![no_std]
//! Finite probability spaces, conditional expectations, Φ-entropy and the
//! Furstenberg entropy of random walks on free groups.

extern crate alloc;
#[cfg(test)]
extern crate std;

mod math;

pub mod entropy;
pub mod error;
pub mod kudo;
pub mod linalg;
pub mod partition;
pub mod phi;
pub mod quadrature;
pub mod space;
pub mod walk;

pub use entropy::{ent, ent_layer_cake, h_phi, pck_gap, quant_bound_check, sandwich_check, EntropyReport};
pub use error::{Error, Result};
pub use kudo::{kudo_limits, verify_sigma_membership, DensitySequence, KudoLimits, PartitionSequence, Side};
pub use partition::{norm_dominates, Partition, TestFamily};
pub use phi::{builtin_phi, validate_phi, BuiltinPhi, Phi};
pub use space::{dominates_second_order, Density, FiniteSpace, SurvivalProfile};
