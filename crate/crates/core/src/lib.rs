//! Quantum f-divergences built on the hockey-stick divergence.
//!
//! Every divergence in this crate is evaluated from the family
//! `E_γ(ρ‖σ) = Tr(ρ − γσ)_+ − (1 − γ)_+`: f-divergences integrate `f''(γ)`
//! against it in both argument orders, the Hellinger and Rényi families are the
//! power-law members, and contraction coefficients, reverse Pinsker and
//! continuity bounds and differential-privacy audits reduce to it.
//!
//! The crate is `no_std` (it needs `alloc`) and fully deterministic: all
//! randomness is drawn from seeded ChaCha streams and all numerical loops run
//! in a fixed order.

#![no_std]
#![forbid(unsafe_code)]
// Whenever std is linked (test builds, or a dependency with its std feature
// unified on), its inherent float methods shadow `num_traits::Float`.
#![allow(unused_imports)]
// `!(x >= 0.0)` is the NaN-rejecting form used for every parameter check.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod contraction;
pub mod dpriv;
mod error;
pub mod fdiv;
pub mod hockey;
pub mod linalg;
pub mod optim;
pub mod quad;
pub mod renyi;
pub mod states;

pub use error::{Error, Result};
pub use fdiv::{ConvexFunction, DivergenceValue, SupportFlag};
pub use linalg::{HermitianOperator, Matrix, Spectrum, C64};
pub use states::{CQState, DensityMatrix, QuantumChannel};
