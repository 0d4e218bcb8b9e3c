//! Spectral time evolution and metric expectation values.

use ndarray::Array1;
use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{Normalization, StateVector};

use super::metric::MetricOperator;
use super::spectrum::NhSpectrum;

const EXP_OVERFLOW: f64 = 700.0;

fn check_dims(spec: &NhSpectrum, initial: &StateVector) -> Result<()> {
    if spec.dim() != initial.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: initial.dim(),
        });
    }
    Ok(())
}

/// |I(t)> = sum_a exp(-i E_a t) <psi_a|I> |phi_a>, unnormalized: the norm
/// decay is physical. Fails when any |Im E_a| t would overflow the exponent
/// range; long-horizon runs should use [`evolve_scaled`].
pub fn evolve(spec: &NhSpectrum, initial: &StateVector, t: f64) -> Result<StateVector> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t = {t} must be >= 0")));
    }
    check_dims(spec, initial)?;
    let worst = spec
        .eigvals
        .iter()
        .map(|e| e.im.abs())
        .fold(0.0f64, f64::max)
        * t;
    if worst > EXP_OVERFLOW {
        return Err(Error::EvolutionHorizon(worst));
    }
    let coeffs = spec.expand(&initial.amplitudes);
    let phased = Array1::from_iter(
        coeffs
            .iter()
            .zip(spec.eigvals.iter())
            .map(|(c, e)| c * (Complex64::new(0.0, -1.0) * e * t).exp()),
    );
    Ok(StateVector {
        amplitudes: spec.right_vecs.dot(&phased),
        two_s: initial.two_s,
        normalization: Normalization::Unnormalized,
    })
}

/// Evolution with the slowest decay factored out: the returned amplitudes
/// are exp(-Im E_max t) times the physical ones and the log of that factor
/// is returned alongside. Metric expectation values are invariant under the
/// rescaling, so steady-state horizons far beyond the f64 exponent range
/// stay computable.
pub fn evolve_scaled(
    spec: &NhSpectrum,
    initial: &StateVector,
    t: f64,
) -> Result<(StateVector, f64)> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t = {t} must be >= 0")));
    }
    check_dims(spec, initial)?;
    let im_max = spec
        .eigvals
        .iter()
        .map(|e| e.im)
        .fold(f64::NEG_INFINITY, f64::max);
    let coeffs = spec.expand(&initial.amplitudes);
    let phased = Array1::from_iter(coeffs.iter().zip(spec.eigvals.iter()).map(|(c, e)| {
        let damp = ((e.im - im_max) * t).exp();
        c * Complex64::from_polar(damp, -e.re * t)
    }));
    Ok((
        StateVector {
            amplitudes: spec.right_vecs.dot(&phased),
            two_s: initial.two_s,
            normalization: Normalization::Unnormalized,
        },
        im_max * t,
    ))
}

/// <psi|S|psi>, the squared metric norm.
pub fn metric_norm_sqr(metric: &MetricOperator, state: &StateVector) -> f64 {
    let s_psi = metric.matrix.dot(&state.amplitudes);
    state
        .amplitudes
        .iter()
        .zip(s_psi.iter())
        .map(|(a, b)| (a.conj() * b).re)
        .sum()
}

/// Metric expectation value <psi|S o|psi> / <psi|S|psi>.
pub fn expectation(
    metric: &MetricOperator,
    state: &StateVector,
    obs: &Array2<Complex64>,
) -> Result<Complex64> {
    if obs.nrows() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: obs.nrows(),
        });
    }
    let norm = metric_norm_sqr(metric, state);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::NonPositiveNorm(norm));
    }
    let o_psi = obs.dot(&state.amplitudes);
    let s_o_psi = metric.matrix.dot(&o_psi);
    let num: Complex64 = state
        .amplitudes
        .iter()
        .zip(s_o_psi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(num / norm)
}
