//! Dicke-basis construction, collective spin operator matrices, and
//! coherent-spin-state preparation.
//!
//! The symmetric sector of N = 2S spin-1/2 particles is spanned by the ladder
//! |S, -S+k> for k = 0..2S. Everything downstream works with dense complex
//! matrices in this basis.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dicke ladder |S, -S+k>, k = 0..2S. Total spin is carried as the integer
/// 2S so half-integer spins stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinBasis {
    two_s: u32,
    k_labels: Vec<u32>,
}

impl SpinBasis {
    pub fn two_s(&self) -> u32 {
        self.two_s
    }

    /// Total spin S = two_s / 2.
    pub fn spin(&self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_s as usize + 1
    }

    pub fn k_labels(&self) -> &[u32] {
        &self.k_labels
    }
}

/// Build the Dicke basis for N = two_s elementary spins.
pub fn build_basis(two_s: u32) -> Result<SpinBasis> {
    if two_s == 0 {
        return Err(Error::DegenerateBasis);
    }
    Ok(SpinBasis {
        two_s,
        k_labels: (0..=two_s).collect(),
    })
}

/// Dense matrices of the collective spin components in the Dicke basis.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub two_s: u32,
    pub sz: Array2<Complex64>,
    pub sp: Array2<Complex64>,
    pub sm: Array2<Complex64>,
    pub sx: Array2<Complex64>,
    pub sy: Array2<Complex64>,
}

impl SpinOperators {
    pub fn spin(&self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_s as usize + 1
    }

    /// Component along a unit direction, n . S.
    pub fn along(&self, n: [f64; 3]) -> Array2<Complex64> {
        let mut out = Array2::zeros(self.sz.dim());
        out.scaled_add(Complex64::new(n[0], 0.0), &self.sx);
        out.scaled_add(Complex64::new(n[1], 0.0), &self.sy);
        out.scaled_add(Complex64::new(n[2], 0.0), &self.sz);
        out
    }
}

/// Matrices of S_z, S_+/-, S_x, S_y with <k+1|S_+|k> = sqrt((k+1)(2S-k)).
pub fn spin_matrices(basis: &SpinBasis) -> SpinOperators {
    let dim = basis.dim();
    let s = basis.spin();
    let two_s = f64::from(basis.two_s);

    let mut sz = Array2::<Complex64>::zeros((dim, dim));
    for k in 0..dim {
        sz[[k, k]] = Complex64::new(-s + k as f64, 0.0);
    }
    let mut sp = Array2::<Complex64>::zeros((dim, dim));
    for k in 0..dim - 1 {
        let kf = k as f64;
        sp[[k + 1, k]] = Complex64::new(((kf + 1.0) * (two_s - kf)).sqrt(), 0.0);
    }
    let sm = sp.t().mapv(|v| v.conj());
    let half = Complex64::new(0.5, 0.0);
    let sx = (&sp + &sm) * half;
    let sy = (&sp - &sm) * Complex64::new(0.0, -0.5);

    SpinOperators {
        two_s: basis.two_s,
        sz,
        sp,
        sm,
        sx,
        sy,
    }
}

/// Normalization bookkeeping for state vectors. Non-Hermitian evolution does
/// not preserve the Euclidean norm, so the status is explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    EuclideanUnit,
    Unnormalized,
}

/// Amplitudes c_k over the Dicke ladder of one basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub amplitudes: Array1<Complex64>,
    pub two_s: u32,
    pub normalization: Normalization,
}

impl StateVector {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Coherent spin state along (theta0, phi0): c_k ~ z^k binom(2S,k)^(1/2) with
/// z = -exp(-i phi0) tan(theta0/2), normalized to unit Euclidean norm. The
/// sign makes the state the exact lowest-weight eigenvector,
/// (S . n0)|I> = -S|I> with n0 = (sin t0 cos p0, sin t0 sin p0, cos t0).
///
/// theta0 = pi is the limit state |k = 2S>. Amplitudes are accumulated in the
/// log domain so large N stays finite.
pub fn coherent_state(basis: &SpinBasis, theta0: f64, phi0: f64) -> Result<StateVector> {
    if !(0.0..=std::f64::consts::PI).contains(&theta0) {
        return Err(Error::Domain(format!(
            "theta0 = {theta0} outside [0, pi]"
        )));
    }
    let dim = basis.dim();
    let mut amplitudes = Array1::<Complex64>::zeros(dim);
    if theta0 == std::f64::consts::PI {
        amplitudes[dim - 1] = Complex64::new(1.0, 0.0);
        return Ok(StateVector {
            amplitudes,
            two_s: basis.two_s(),
            normalization: Normalization::EuclideanUnit,
        });
    }

    let two_s = f64::from(basis.two_s());
    let ln_tan = (theta0 / 2.0).tan().ln(); // -inf at theta0 = 0 handled below
    // log-magnitude of z^k sqrt(binom), phase -k*phi0
    let mut ln_binom = 0.0;
    let mut log_mags = Vec::with_capacity(dim);
    for k in 0..dim {
        let kf = k as f64;
        if k > 0 {
            ln_binom += (two_s - kf + 1.0).ln() - kf.ln();
        }
        let lm = if theta0 == 0.0 {
            if k == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            kf * ln_tan + 0.5 * ln_binom
        };
        log_mags.push(lm);
    }
    let max_lm = log_mags.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut norm_sq = 0.0;
    for (k, lm) in log_mags.iter().enumerate() {
        let mag = (lm - max_lm).exp();
        norm_sq += mag * mag;
        let c = Complex64::from_polar(mag, -(k as f64) * phi0);
        amplitudes[k] = if k % 2 == 0 { c } else { -c };
    }
    let inv = Complex64::new(1.0 / norm_sq.sqrt(), 0.0);
    amplitudes.mapv_inplace(|c| c * inv);

    Ok(StateVector {
        amplitudes,
        two_s: basis.two_s(),
        normalization: Normalization::EuclideanUnit,
    })
}

/// Bloch direction from polar angles.
pub fn bloch_direction(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}
