//! Positive-definite metric operators for the non-Hermitian inner product.
//!
//! For a pair-conjugate spectrum the indefinite Krein symmetry
//!
//! ```text
//! S_K = sum_(real j) |psi_j><psi_j|
//!     + sum_(pairs j,i) (|psi_j><psi_i| + |psi_i><psi_j|)
//! ```
//!
//! intertwines the centered Hamiltonian exactly, S_K H = H^dag S_K. The
//! metric is its Krein-space positive part, S = R D_+ R^-1 - R D_- R^-1.
//! Otherwise the metric is S = sum_j |psi_j><psi_j|, which orthonormalizes
//! the right eigenbasis.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::util::{adjoint, eigh_decomp, hermiticity_residual, hermitian_matrix_function, max_abs};

use super::spectrum::{conjugate_pairs, NhSpectrum, Pairing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricConstruction {
    Krein,
    General,
}

/// Self-adjoint positive-definite metric with construction diagnostics.
#[derive(Debug, Clone)]
pub struct MetricOperator {
    pub matrix: Array2<Complex64>,
    pub construction: MetricConstruction,
    pub min_eigenvalue: f64,
    /// max-abs of S - S^dag.
    pub hermiticity_residual: f64,
    /// Krein branch: |S_K Hc - Hc^dag S_K| / (|Hc| |S_K|), Hc the centered H.
    pub krein_intertwining_residual: Option<f64>,
    /// Same residual for the final positive metric. A positive exact
    /// intertwiner only exists for real spectra, so this is reported, not
    /// enforced.
    pub metric_intertwining_residual: Option<f64>,
}

fn accumulate_outer(
    target: &mut Array2<Complex64>,
    bra_source: &Array2<Complex64>,
    j: usize,
    i: usize,
) {
    let n = target.nrows();
    let cj = bra_source.column(j);
    let ci = bra_source.column(i);
    for r in 0..n {
        for c in 0..n {
            target[[r, c]] += cj[r] * ci[c].conj();
        }
    }
}

/// Build the metric operator for a diagonalized Hamiltonian.
///
/// `tol_pair` bounds the conjugate-pair matching in the Krein branch; use
/// `spec.default_tol_pair()` unless a run overrides it.
pub fn build_metric(spec: &NhSpectrum, tol_pair: f64) -> Result<MetricOperator> {
    let n = spec.dim();
    let psi = &spec.left_dual_vecs;

    let (matrix, construction, krein_residual) = match spec.pairing {
        Pairing::GeneralComplex => {
            let s = psi.dot(&adjoint(psi));
            (s, MetricConstruction::General, None)
        }
        Pairing::QuasiHermitianPairConjugate => {
            let pairing = conjugate_pairs(&spec.eigvals, spec.imag_offset, tol_pair)?;
            let mut sk = Array2::<Complex64>::zeros((n, n));
            for &j in &pairing.self_paired {
                accumulate_outer(&mut sk, psi, j, j);
            }
            for &(j, i) in &pairing.pairs {
                accumulate_outer(&mut sk, psi, j, i);
                accumulate_outer(&mut sk, psi, i, j);
            }
            let hc = spec.reconstruct(true);
            let resid = max_abs(&(sk.dot(&hc) - adjoint(&hc).dot(&sk)))
                / (max_abs(&hc) * max_abs(&sk)).max(f64::MIN_POSITIVE);

            // Krein split: S = R D+ R^dag - R D- R^dag = R |D| R^dag.
            let s = hermitian_matrix_function(&sk, f64::abs)?;
            (s, MetricConstruction::Krein, Some(resid))
        }
    };

    let herm = hermiticity_residual(&matrix);
    let (eigs, _) = eigh_decomp(&matrix)?;
    let min_eigenvalue = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eigenvalue <= 0.0 {
        return Err(Error::MetricConstruction(min_eigenvalue));
    }

    let metric_residual = match spec.pairing {
        Pairing::QuasiHermitianPairConjugate => {
            let hc = spec.reconstruct(true);
            Some(
                max_abs(&(matrix.dot(&hc) - adjoint(&hc).dot(&matrix)))
                    / (max_abs(&hc) * max_abs(&matrix)).max(f64::MIN_POSITIVE),
            )
        }
        Pairing::GeneralComplex => None,
    };

    log::debug!(
        "build_metric: {:?} min_eig={:.3e} herm={:.2e} krein_resid={:?}",
        construction,
        min_eigenvalue,
        herm,
        krein_residual,
    );
    Ok(MetricOperator {
        matrix,
        construction,
        min_eigenvalue,
        hermiticity_residual: herm,
        krein_intertwining_residual: krein_residual,
        metric_intertwining_residual: metric_residual,
    })
}
