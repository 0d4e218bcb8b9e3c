//! Bi-orthonormal eigendecomposition of the non-Hermitian Hamiltonian.
//!
//! Right eigenvectors |phi_a> of H and left duals |psi_a> (eigenvectors of
//! H^dag) are paired by conjugate eigenvalue and corrected so that
//! <psi_a|phi_b> = delta_ab. The correction is a global overlap solve rather
//! than a per-column rescale: the model's epsilon = 0 spectra carry
//! symmetry-protected near-degenerate pairs whose independently computed left
//! and right eigenvectors mix arbitrarily inside each cluster, and a scalar
//! rescale leaves O(1) off-diagonal overlaps there.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Inverse};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::util::{adjoint, eigh_decomp, hermiticity_residual, max_abs, one_norm};

/// Spectral classification. The pair-conjugate test is performed after
/// removing the uniform imaginary offset Im(tr H)/dim: the epsilon = 0
/// Hamiltonian satisfies R H R^-1 = H^dag - 2i gamma S under the pi rotation
/// about x, so its multiset is conjugation-closed only around that offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Eigenvalue multiset equals its conjugate multiset (after centering).
    QuasiHermitianPairConjugate,
    /// No complete conjugate pairing exists.
    GeneralComplex,
}

/// Eigensystem of H with bi-orthonormal left duals.
#[derive(Debug, Clone)]
pub struct NhSpectrum {
    /// Eigenvalues, ascending by real part, ties by imaginary part.
    pub eigvals: Array1<Complex64>,
    /// Columns are right eigenvectors |phi_a> (the matrix Upsilon).
    pub right_vecs: Array2<Complex64>,
    /// Columns are left duals |psi_a>, scaled so <psi_a|phi_b> = delta_ab.
    pub left_dual_vecs: Array2<Complex64>,
    pub pairing: Pairing,
    /// 1-norm condition estimate of the eigenvector matrix.
    pub condition_estimate: f64,
    /// Uniform imaginary offset removed before pair matching.
    pub imag_offset: f64,
    /// max-abs of <psi_a|phi_b> - delta_ab.
    pub biorth_residual: f64,
    /// max-abs of H - sum_a E_a |phi_a><psi_a|, relative to max-abs of H.
    pub reconstruction_residual: f64,
}

impl NhSpectrum {
    pub fn dim(&self) -> usize {
        self.eigvals.len()
    }

    /// Default conjugate-pair detection tolerance, 1e-8 * max|E|.
    pub fn default_tol_pair(&self) -> f64 {
        1e-8 * self
            .eigvals
            .iter()
            .map(|e| e.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    /// Rebuild H from the spectral data, optionally with the uniform
    /// imaginary offset removed.
    pub fn reconstruct(&self, centered: bool) -> Array2<Complex64> {
        let offset = if centered { self.imag_offset } else { 0.0 };
        let n = self.dim();
        let mut scaled = Array2::<Complex64>::zeros((n, n));
        for (j, col) in self.right_vecs.columns().into_iter().enumerate() {
            let e = self.eigvals[j] - Complex64::new(0.0, offset);
            scaled.column_mut(j).assign(&col.mapv(|v| v * e));
        }
        scaled.dot(&adjoint(&self.left_dual_vecs))
    }

    /// Expansion coefficients <psi_a|state> in the right eigenbasis.
    pub fn expand(&self, amplitudes: &Array1<Complex64>) -> Array1<Complex64> {
        adjoint(&self.left_dual_vecs).dot(amplitudes)
    }
}

/// Conjugate-pair structure of a centered spectrum: index pairs (j, i) with
/// E_i ~ conj(E_j), and self-paired indices with (nearly) real centered value.
#[derive(Debug, Clone)]
pub struct ConjugatePairs {
    pub pairs: Vec<(usize, usize)>,
    pub self_paired: Vec<usize>,
}

/// Greedy nearest-neighbour multiset matching against the conjugated
/// spectrum. Sorting-based pairing fails here: conjugate partners share real
/// parts to machine precision, so a lexicographic order cannot separate them.
pub fn conjugate_pairs(
    eigvals: &Array1<Complex64>,
    imag_offset: f64,
    tol: f64,
) -> Result<ConjugatePairs> {
    let n = eigvals.len();
    let centered: Vec<Complex64> = eigvals
        .iter()
        .map(|e| e - Complex64::new(0.0, imag_offset))
        .collect();
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    let mut self_paired = Vec::new();
    for j in 0..n {
        if used[j] {
            continue;
        }
        if centered[j].im.abs() <= tol {
            self_paired.push(j);
            used[j] = true;
            continue;
        }
        let target = centered[j].conj();
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (i, c) in centered.iter().enumerate() {
            if used[i] || i == j {
                continue;
            }
            let d = (c - target).norm();
            if d < best_d {
                best_d = d;
                best = Some(i);
            }
        }
        match best {
            Some(i) if best_d <= tol => {
                pairs.push((j, i));
                used[j] = true;
                used[i] = true;
            }
            _ => return Err(Error::PairingAmbiguity(eigvals[j], tol)),
        }
    }
    Ok(ConjugatePairs { pairs, self_paired })
}

fn sort_eigenpairs(
    vals: Array1<Complex64>,
    vecs: Array2<Complex64>,
    key: impl Fn(Complex64) -> Complex64,
) -> (Array1<Complex64>, Array2<Complex64>) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(vals[a]), key(vals[b]));
        ka.re.total_cmp(&kb.re).then(ka.im.total_cmp(&kb.im))
    });
    let sorted_vals = Array1::from(order.iter().map(|&i| vals[i]).collect::<Vec<_>>());
    let mut sorted_vecs = Array2::zeros(vecs.dim());
    for (dst, &src) in order.iter().enumerate() {
        sorted_vecs.column_mut(dst).assign(&vecs.column(src));
    }
    (sorted_vals, sorted_vecs)
}

const HERMITIAN_DETECT: f64 = 1e-12;
const EP_SCALE_FLOOR: f64 = 1e-12;
const EP_CONDITION_CEIL: f64 = 1e12;
const RESIDUAL_CEIL: f64 = 1e-8;

/// Diagonalize H, pair the H^dag eigensystem by conjugate eigenvalue, and
/// bi-orthonormalize. Hermitian inputs take the unitary path so degenerate
/// real spectra stay exactly orthonormal.
pub fn diagonalize(h: &Array2<Complex64>) -> Result<NhSpectrum> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.ncols(),
        });
    }
    let h_scale = max_abs(h).max(1.0);

    let (eigvals, right, left) = if hermiticity_residual(h) <= HERMITIAN_DETECT * h_scale {
        let (vals, vecs) = eigh_decomp(h)?;
        let vals = vals.mapv(|v| Complex64::new(v, 0.0));
        (vals, vecs.clone(), vecs)
    } else {
        let (vals, right) = h.eig()?;
        let (lvals, left) = adjoint(h).eig()?;
        let (vals, right) = sort_eigenpairs(vals, right, |e| e);
        // Greedy-match left eigenpairs to conj(vals); tolerance is only used
        // to report quality, the match itself takes the nearest remaining.
        let nl = lvals.len();
        let mut used = vec![false; nl];
        let mut order = Vec::with_capacity(nl);
        let mut match_residual = 0.0f64;
        for a in 0..n {
            let target = vals[a].conj();
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for b in 0..nl {
                if used[b] {
                    continue;
                }
                let d = (lvals[b] - target).norm();
                if d < best_d {
                    best_d = d;
                    best = b;
                }
            }
            used[best] = true;
            match_residual = match_residual.max(best_d);
            order.push(best);
        }
        if match_residual > RESIDUAL_CEIL * h_scale {
            return Err(Error::ExceptionalPoint(vals[0], vals[0].conj()));
        }
        let mut left_matched = Array2::zeros(left.dim());
        for (dst, &src) in order.iter().enumerate() {
            left_matched.column_mut(dst).assign(&left.column(src));
        }
        (vals, right, left_matched)
    };

    // Overlap correction: Wd = W (O^dag)^-1 with O = W^dag R, so that
    // Wd^dag R = I. Reduces to the scalar rescale when O is diagonal.
    let overlap = adjoint(&left).dot(&right);
    let mut min_diag = f64::INFINITY;
    let mut worst = 0usize;
    for j in 0..n {
        let d = overlap[[j, j]].norm();
        if d < min_diag {
            min_diag = d;
            worst = j;
        }
    }
    if min_diag < EP_SCALE_FLOOR {
        let partner = if worst + 1 < n { worst + 1 } else { worst.saturating_sub(1) };
        return Err(Error::ExceptionalPoint(eigvals[worst], eigvals[partner]));
    }
    let left_dual = left.dot(&adjoint(&overlap).inv()?);

    let biorth = {
        let mut g = adjoint(&left_dual).dot(&right);
        for j in 0..n {
            g[[j, j]] -= Complex64::new(1.0, 0.0);
        }
        max_abs(&g)
    };
    let condition_estimate = one_norm(&right) * one_norm(&adjoint(&left_dual));
    if condition_estimate > EP_CONDITION_CEIL {
        return Err(Error::ExceptionalPoint(eigvals[0], eigvals[n - 1]));
    }

    let imag_offset = eigvals.iter().map(|e| e.im).sum::<f64>() / n as f64;
    let mut spectrum = NhSpectrum {
        eigvals,
        right_vecs: right,
        left_dual_vecs: left_dual,
        pairing: Pairing::GeneralComplex,
        condition_estimate,
        imag_offset,
        biorth_residual: biorth,
        reconstruction_residual: 0.0,
    };
    spectrum.reconstruction_residual = max_abs(&(spectrum.reconstruct(false) - h)) / h_scale;

    if spectrum.biorth_residual > RESIDUAL_CEIL
        || spectrum.reconstruction_residual > RESIDUAL_CEIL
    {
        return Err(Error::ExceptionalPoint(
            spectrum.eigvals[0],
            spectrum.eigvals[n - 1],
        ));
    }

    let tol = spectrum.default_tol_pair();
    if conjugate_pairs(&spectrum.eigvals, spectrum.imag_offset, tol).is_ok() {
        spectrum.pairing = Pairing::QuasiHermitianPairConjugate;
    }
    log::debug!(
        "diagonalize: dim={} pairing={:?} biorth={:.2e} recon={:.2e} cond={:.2e}",
        n,
        spectrum.pairing,
        spectrum.biorth_residual,
        spectrum.reconstruction_residual,
        spectrum.condition_estimate
    );
    Ok(spectrum)
}
