//! Simple random walks on the free group `F_k` and the finite cylinder
//! models of their Poisson boundary.

pub mod cocycle;
pub mod eta;
pub mod experiment;
pub mod furstenberg;
pub mod harmonic;
pub mod sampler;
pub mod translate;
pub mod word;

pub use cocycle::{projected_rn_density, rn_density};
pub use eta::{eta_mu, Eta};
pub use furstenberg::{entropy_identity_check, factor_entropy, furstenberg_exact, kernel_condition_check, Kernel};
pub use harmonic::{CylinderSpace, HarmonicMeasure, StepLaw};
pub use word::Word;
