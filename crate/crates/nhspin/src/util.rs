//! Small dense-matrix helpers shared across the crate.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::error::Result;

/// Largest entry magnitude.
pub fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Induced 1-norm (max column sum of magnitudes).
pub fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut best = 0.0f64;
    for col in a.columns() {
        let s: f64 = col.iter().map(|v| v.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Hermitian adjoint.
pub fn adjoint(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|v| v.conj())
}

/// Deviation from self-adjointness, max-abs.
pub fn hermiticity_residual(a: &Array2<Complex64>) -> f64 {
    max_abs(&(a - &adjoint(a)))
}

/// 10*log10(x), the dB convention used for all squeezing parameters.
pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Hermitian eigendecomposition with eigenvectors as columns, ascending
/// eigenvalues. ndarray-linalg 0.16 hands back the conjugated vectors for
/// complex input; this wrapper restores M = V diag(w) V^dag.
pub fn eigh_decomp(m: &Array2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>)> {
    let (w, v) = m.eigh(UPLO::Lower)?;
    Ok((w, v.mapv(|x| x.conj())))
}

/// Apply f to the spectrum of a Hermitian matrix: V f(w) V^dag.
pub fn hermitian_matrix_function(
    m: &Array2<Complex64>,
    f: impl Fn(f64) -> f64,
) -> Result<Array2<Complex64>> {
    let (w, v) = eigh_decomp(m)?;
    let n = m.nrows();
    let mut scaled = Array2::<Complex64>::zeros((n, n));
    for (j, col) in v.columns().into_iter().enumerate() {
        let fw = Complex64::new(f(w[j]), 0.0);
        scaled.column_mut(j).assign(&col.mapv(|x| x * fw));
    }
    Ok(scaled.dot(&adjoint(&v)))
}
