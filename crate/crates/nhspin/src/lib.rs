//! Non-Hermitian collective spin dynamics.
//!
//! Evolves coherent spin states under a one-axis-twisting + Lipkin
//! Hamiltonian with a non-Hermitian line-width term, computes
//! metric-corrected observables, spin-squeezing and intelligent-spin-state
//! diagnostics, and cross-checks the exact engine against closed-form
//! dissipative-OAT moments, an SU(1,1) boson model, and its asymptotic
//! steady state. Includes the NV-ensemble/mechanical-resonator application.
//!
//! Start from the `examples/` directory: each example drives one capability
//! end to end. The `simulate` binary wraps the same scenario drivers behind
//! JSON configs.

pub mod engine;
pub mod error;
pub mod oat;
pub mod spin;
pub mod squeezing;
pub(crate) mod util;

pub use error::{Error, Result};
