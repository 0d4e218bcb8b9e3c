//! Non-Hermitian Hamiltonian assembly, bi-orthonormal diagonalization, metric
//! operators, time evolution, and metric-corrected expectation values.
//!
//! The model is
//!
//! ```text
//! H = chi S_z^2 + V (S_x^2 - S_y^2) + (epsilon - i gamma)(S_z + S)
//! ```
//!
//! pentadiagonal in the Dicke basis (the Lipkin term couples k and k+/-2).
//! For gamma > 0 the spectrum is complex; observables are taken in the inner
//! product defined by a positive-definite metric operator built from the left
//! eigenbasis.

mod evolve;
mod expm;
mod metric;
mod spectrum;

pub use evolve::{evolve, evolve_scaled, expectation, metric_norm_sqr};
pub use expm::{evolve_dense_oracle, expm};
pub use metric::{build_metric, MetricConstruction, MetricOperator};
pub use spectrum::{diagonalize, NhSpectrum, Pairing};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::SpinOperators;

/// Bare model couplings, all in one common energy unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    /// One-axis-twisting strength chi.
    pub chi: f64,
    /// Lipkin strength V.
    pub v: f64,
    /// Detuning epsilon.
    pub epsilon: f64,
    /// Line width gamma >= 0.
    pub gamma: f64,
}

impl CouplingSet {
    pub fn new(chi: f64, v: f64, epsilon: f64, gamma: f64) -> Result<Self> {
        if gamma < 0.0 {
            return Err(Error::Domain(format!("gamma = {gamma} must be >= 0")));
        }
        Ok(Self {
            chi,
            v,
            epsilon,
            gamma,
        })
    }

    /// Figure-style couplings: |epsilon - 2S chi| = 1 energy unit, epsilon = 0,
    /// 2S V = eta, gamma = gamma_rel. `sigma` is the sign of epsilon - 2S chi.
    pub fn scaled(eta: f64, gamma_rel: f64, sigma: i8, two_s: u32) -> Result<Self> {
        if sigma != 1 && sigma != -1 {
            return Err(Error::Domain(format!("sigma = {sigma} must be +1 or -1")));
        }
        let n = f64::from(two_s);
        Self::new(-f64::from(sigma) / n, eta / n, 0.0, gamma_rel)
    }
}

/// Dimensionless couplings relative to |epsilon - 2S chi|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeCouplings {
    pub eta: f64,
    pub gamma: f64,
    pub xi2: f64,
    /// sign(epsilon - 2S chi)
    pub sigma: i8,
}

/// eta = |2SV| / |eps - 2S chi|, Gamma = gamma / |eps - 2S chi|, Xi^2 = eta^2 + Gamma^2.
pub fn relative_couplings(c: &CouplingSet, two_s: u32) -> Result<RelativeCouplings> {
    let two_s = f64::from(two_s);
    let denom = c.epsilon - two_s * c.chi;
    if denom == 0.0 {
        return Err(Error::SingularScaling);
    }
    let eta = (two_s * c.v).abs() / denom.abs();
    let gamma = c.gamma / denom.abs();
    Ok(RelativeCouplings {
        eta,
        gamma,
        xi2: eta * eta + gamma * gamma,
        sigma: if denom > 0.0 { 1 } else { -1 },
    })
}

/// H = chi S_z^2 + V (S_x^2 - S_y^2) + (epsilon - i gamma)(S_z + S).
pub fn assemble_hamiltonian(ops: &SpinOperators, c: &CouplingSet) -> Array2<Complex64> {
    let dim = ops.dim();
    let s = ops.spin();
    let mut h = Array2::<Complex64>::zeros((dim, dim));
    h.scaled_add(Complex64::new(c.chi, 0.0), &ops.sz.dot(&ops.sz));
    if c.v != 0.0 {
        let lipkin = ops.sx.dot(&ops.sx) - ops.sy.dot(&ops.sy);
        h.scaled_add(Complex64::new(c.v, 0.0), &lipkin);
    }
    let shift = Complex64::new(c.epsilon, -c.gamma);
    for k in 0..dim {
        let m = -s + k as f64;
        h[[k, k]] += shift * Complex64::new(m + s, 0.0);
    }
    h
}
