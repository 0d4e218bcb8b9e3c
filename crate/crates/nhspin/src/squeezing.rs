//! Mean-spin frame construction, minimal-variance direction search,
//! squeezing parameters, ISS diagnostics, and basis-weight profiles.
//!
//! The frame follows the mean spin: n_z' = <S>/|<S>|, and n_x' is the
//! transverse direction minimizing the variance. Squeezing parameters are
//! zeta^2 = 2 Delta^2 S / |<S>|; a state is an intelligent spin state when
//! it is squeezed and saturates the Heisenberg product.

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::engine::{expectation, MetricOperator};
use crate::error::{Error, Result};
use crate::spin::{SpinOperators, StateVector};
use crate::util::db;

/// Default ISS verdict tolerance on zeta2x_dB + zeta2y_dB.
pub const ISS_TOL_DB: f64 = 0.1;

/// First and symmetrized second moments of the spin components, all real.
#[derive(Debug, Clone, Copy)]
pub struct SpinMoments {
    pub mean: [f64; 3],
    /// <(S_i S_j + S_j S_i)/2>
    pub second: [[f64; 3]; 3],
    /// Largest imaginary part seen across all expectations.
    pub imag_residue: f64,
    pub spin: f64,
}

/// Metric moments of S_x, S_y, S_z and their symmetrized products.
///
/// The metric does not commute with the spin components, so expectations
/// carry a small imaginary residue; it is recorded and guarded at
/// 1e-5 (1 + S).
pub fn spin_moments(
    state: &StateVector,
    metric: &MetricOperator,
    ops: &SpinOperators,
) -> Result<SpinMoments> {
    let comps = [&ops.sx, &ops.sy, &ops.sz];
    let mut imag_residue = 0.0f64;
    let mut mean = [0.0; 3];
    for (i, c) in comps.iter().enumerate() {
        let v = expectation(metric, state, c)?;
        imag_residue = imag_residue.max(v.im.abs());
        mean[i] = v.re;
    }
    let mut second = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let sym = (comps[i].dot(comps[j]) + comps[j].dot(comps[i]))
                .mapv(|v| v * Complex64::new(0.5, 0.0));
            let v = expectation(metric, state, &sym)?;
            imag_residue = imag_residue.max(v.im.abs());
            second[i][j] = v.re;
            second[j][i] = v.re;
        }
    }
    let spin = ops.spin();
    let guard = 1e-5 * (1.0 + spin);
    if imag_residue > guard {
        return Err(Error::ImaginaryResidue(imag_residue, guard));
    }
    Ok(SpinMoments {
        mean,
        second,
        imag_residue,
        spin,
    })
}

/// Same moments, with the per-n results combined by exterior weights.
/// Used by the phonon average: weight the moments, then build one frame.
pub fn weighted_moments(parts: &[(f64, SpinMoments)]) -> SpinMoments {
    let mut mean = [0.0; 3];
    let mut second = [[0.0; 3]; 3];
    let mut imag_residue = 0.0f64;
    let mut spin = 0.0;
    for (w, m) in parts {
        for i in 0..3 {
            mean[i] += w * m.mean[i];
            for j in 0..3 {
                second[i][j] += w * m.second[i][j];
            }
        }
        imag_residue = imag_residue.max(m.imag_residue);
        spin = m.spin;
    }
    SpinMoments {
        mean,
        second,
        imag_residue,
        spin,
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Orthonormal frame adapted to the mean spin plus the transverse variances.
#[derive(Debug, Clone, Copy)]
pub struct FrameVariances {
    /// Rows are n_x', n_y', n_z'; right-handed orthonormal.
    pub frame: [[f64; 3]; 3],
    pub var_min: f64,
    pub var_max: f64,
}

/// Diagonalize the 2x2 transverse covariance. n_x' is the direction of the
/// smaller eigenvalue; isotropic covariance falls back on the first
/// transverse axis (Gram-Schmidt seeded by the global x axis, or y when the
/// mean is along x).
pub fn optimal_frame(moments: &SpinMoments, mean_floor: f64) -> Result<FrameVariances> {
    let mean = moments.mean;
    let nm = norm3(mean);
    if nm <= mean_floor {
        return Err(Error::UndefinedFrame(nm, mean_floor));
    }
    let nz = [mean[0] / nm, mean[1] / nm, mean[2] / nm];
    let seed = if nz[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let proj = dot3(seed, nz);
    let mut e1 = [
        seed[0] - proj * nz[0],
        seed[1] - proj * nz[1],
        seed[2] - proj * nz[2],
    ];
    let e1n = norm3(e1);
    for v in &mut e1 {
        *v /= e1n;
    }
    let e2 = cross(nz, e1);

    // transverse covariance C_ab = <{S_a,S_b}/2> - <S_a><S_b>
    let cov = |a: [f64; 3], b: [f64; 3]| -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += a[i] * moments.second[i][j] * b[j];
            }
        }
        s - dot3(a, mean) * dot3(b, mean)
    };
    let c11 = cov(e1, e1);
    let c22 = cov(e2, e2);
    let c12 = cov(e1, e2);

    // closed-form 2x2 eigenrotation
    let half_tr = 0.5 * (c11 + c22);
    let disc = (0.25 * (c11 - c22) * (c11 - c22) + c12 * c12).sqrt();
    let var_min = half_tr - disc;
    let var_max = half_tr + disc;
    let (nx, ny);
    if disc <= 0.0 || (c12 == 0.0 && c11 <= c22) {
        // isotropic or already diagonal with e1 minimal: keep the seed axis
        nx = e1;
        ny = e2;
    } else {
        let angle = 0.5 * (2.0 * c12).atan2(c11 - c22);
        // angle diagonalizes toward the larger eigenvalue on e1; rotate the
        // candidate and pick whichever axis carries the smaller variance
        let ca = angle.cos();
        let sa = angle.sin();
        let u = [
            ca * e1[0] + sa * e2[0],
            ca * e1[1] + sa * e2[1],
            ca * e1[2] + sa * e2[2],
        ];
        let v = cross(nz, u);
        if cov(u, u) <= cov(v, v) {
            nx = u;
            ny = v;
        } else {
            nx = v;
            ny = [-u[0], -u[1], -u[2]];
        }
    }
    Ok(FrameVariances {
        frame: [nx, ny, nz],
        var_min,
        var_max,
    })
}

/// Mean-spin direction, rotated-frame variances, squeezing parameters in
/// linear and dB form, and the ISS verdict.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SqueezingReport {
    pub mean_spin: [f64; 3],
    pub mean_norm: f64,
    pub theta_mean: f64,
    pub frame: [[f64; 3]; 3],
    pub var_min: f64,
    pub var_max: f64,
    pub zeta2_x: f64,
    pub zeta2_y: f64,
    pub zeta2_x_db: f64,
    pub zeta2_y_db: f64,
    pub product_db: f64,
    pub iss: bool,
    pub imag_residue: f64,
}

/// zeta^2_x' = 2 var_min / |<S>|, zeta^2_y' = 2 var_max / |<S>|, ISS verdict
/// with tolerance `iss_tol_db` on the dB product.
pub fn squeezing_parameters(
    moments: &SpinMoments,
    fv: &FrameVariances,
    iss_tol_db: f64,
) -> SqueezingReport {
    let nm = norm3(moments.mean);
    let zeta2_x = 2.0 * fv.var_min / nm;
    let zeta2_y = 2.0 * fv.var_max / nm;
    let zeta2_x_db = db(zeta2_x);
    let zeta2_y_db = db(zeta2_y);
    let product_db = zeta2_x_db + zeta2_y_db;
    SqueezingReport {
        mean_spin: moments.mean,
        mean_norm: nm,
        theta_mean: (moments.mean[2] / nm).clamp(-1.0, 1.0).acos(),
        frame: fv.frame,
        var_min: fv.var_min,
        var_max: fv.var_max,
        zeta2_x,
        zeta2_y,
        zeta2_x_db,
        zeta2_y_db,
        product_db,
        iss: zeta2_x < 1.0 && product_db.abs() <= iss_tol_db,
        imag_residue: moments.imag_residue,
    }
}

/// Full pipeline: metric moments, optimal frame, squeezing parameters.
pub fn analyze(
    state: &StateVector,
    metric: &MetricOperator,
    ops: &SpinOperators,
) -> Result<SqueezingReport> {
    let moments = spin_moments(state, metric, ops)?;
    let fv = optimal_frame(&moments, 1e-6 * ops.spin())?;
    Ok(squeezing_parameters(&moments, &fv, ISS_TOL_DB))
}

/// Frame + parameters from precomputed moments (phonon-averaged path).
pub fn analyze_moments(moments: &SpinMoments) -> Result<SqueezingReport> {
    let fv = optimal_frame(moments, 1e-6 * moments.spin)?;
    Ok(squeezing_parameters(moments, &fv, ISS_TOL_DB))
}

/// Normalized basis-weight profile w(k) = |c_k|^2 / sum_j |c_j|^2.
pub fn basis_weights(state: &StateVector) -> Result<Vec<f64>> {
    let total: f64 = state.amplitudes.iter().map(|c| c.norm_sqr()).sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::ZeroState);
    }
    Ok(state
        .amplitudes
        .iter()
        .map(|c| c.norm_sqr() / total)
        .collect())
}

/// Polar angle of the mean-spin direction, arccos(m_z/|m|).
pub fn theta_of_mean(mean: [f64; 3]) -> Result<f64> {
    let nm = norm3(mean);
    if nm == 0.0 {
        return Err(Error::UndefinedFrame(0.0, 0.0));
    }
    Ok((mean[2] / nm).clamp(-1.0, 1.0).acos())
}

/// Hermitian observable along direction n in the rotated frame, for tests
/// and probes: (n . S).
pub fn spin_along(ops: &SpinOperators, n: [f64; 3]) -> Array2<Complex64> {
    ops.along(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{assemble_hamiltonian, build_metric, diagonalize, CouplingSet};
    use crate::spin::{build_basis, coherent_state, spin_matrices};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn identity_metric_setup(two_s: u32) -> (crate::spin::SpinBasis, SpinOperators, MetricOperator)
    {
        let basis = build_basis(two_s).unwrap();
        let ops = spin_matrices(&basis);
        // gamma = 0 Hermitian Hamiltonian gives the identity metric
        let c = CouplingSet::new(0.3, 0.1, 0.0, 0.0).unwrap();
        let spec = diagonalize(&assemble_hamiltonian(&ops, &c)).unwrap();
        let metric = build_metric(&spec, spec.default_tol_pair()).unwrap();
        (basis, ops, metric)
    }

    #[test]
    fn lowest_weight_moments() {
        let (basis, ops, metric) = identity_metric_setup(8);
        let s = basis.spin();
        let down = coherent_state(&basis, std::f64::consts::PI, 0.0).unwrap();
        let m = spin_moments(&down, &metric, &ops).unwrap();
        assert_abs_diff_eq!(m.mean[2], s, epsilon = 1e-10);
        // |S, +S> here: transverse variances S/2 around the +z mean
        assert_abs_diff_eq!(m.second[0][0], s / 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(m.second[1][1], s / 2.0, epsilon = 1e-10);

        let up = coherent_state(&basis, 0.0, 0.0).unwrap();
        let m = spin_moments(&up, &metric, &ops).unwrap();
        assert_abs_diff_eq!(m.mean[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.mean[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.mean[2], -s, epsilon = 1e-10);
        assert_abs_diff_eq!(m.second[0][0], s / 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(m.second[1][1], s / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn coherent_mean_is_minus_s_n0() {
        let (basis, ops, metric) = identity_metric_setup(10);
        let s = basis.spin();
        for (t0, p0) in [(0.7, 0.4), (2.2, 5.1), (std::f64::consts::FRAC_PI_4, 0.0)] {
            let st = coherent_state(&basis, t0, p0).unwrap();
            let m = spin_moments(&st, &metric, &ops).unwrap();
            let n0 = crate::spin::bloch_direction(t0, p0);
            for i in 0..3 {
                assert_abs_diff_eq!(m.mean[i], -s * n0[i], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn spin_half_second_moments_quarter() {
        let (basis, ops, metric) = identity_metric_setup(1);
        for (t0, p0) in [(0.3, 0.0), (1.9, 2.0)] {
            let st = coherent_state(&basis, t0, p0).unwrap();
            let m = spin_moments(&st, &metric, &ops).unwrap();
            for i in 0..3 {
                assert_abs_diff_eq!(m.second[i][i], 0.25, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn frame_tie_break_and_diagonal() {
        let s = 4.0;
        let mk = |c11: f64, c22: f64, c12: f64| SpinMoments {
            mean: [0.0, 0.0, -s],
            second: [[c11, c12, 0.0], [c12, c22, 0.0], [0.0, 0.0, s * s]],
            imag_residue: 0.0,
            spin: s,
        };
        // isotropic: tie-break on the first transverse axis (global x)
        let fv = optimal_frame(&mk(s / 2.0, s / 2.0, 0.0), 1e-6).unwrap();
        assert_abs_diff_eq!(fv.var_min, s / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fv.var_max, s / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fv.frame[0][0].abs(), 1.0, epsilon = 1e-12);

        // diagonal with a < b: n_x' is the first axis
        let fv = optimal_frame(&mk(0.5, 1.5, 0.0), 1e-6).unwrap();
        assert_abs_diff_eq!(fv.var_min, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fv.var_max, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fv.frame[0][0].abs(), 1.0, epsilon = 1e-12);

        // right-handed: n_x' x n_y' = n_z'
        let czz = cross(fv.frame[0], fv.frame[1]);
        for i in 0..3 {
            assert_abs_diff_eq!(czz[i], fv.frame[2][i], epsilon = 1e-12);
        }
    }

    #[test]
    fn frame_matches_quadratic_roots() {
        // random 2x2 covariances: eigenvalues from the characteristic polynomial
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let c11 = rng.gen_range(0.1..3.0);
            let c22 = rng.gen_range(0.1..3.0);
            let c12 = rng.gen_range(-1.0..1.0);
            let m = SpinMoments {
                mean: [0.0, 0.0, -2.0],
                second: [[c11, c12, 0.0], [c12, c22, 0.0], [0.0, 0.0, 4.0]],
                imag_residue: 0.0,
                spin: 2.0,
            };
            let fv = optimal_frame(&m, 1e-6).unwrap();
            let tr = c11 + c22;
            let det = c11 * c22 - c12 * c12;
            let disc = (tr * tr / 4.0 - det).sqrt();
            assert_abs_diff_eq!(fv.var_min, tr / 2.0 - disc, epsilon = 1e-12);
            assert_abs_diff_eq!(fv.var_max, tr / 2.0 + disc, epsilon = 1e-12);
            // variance along n_x' really is the minimum
            let along = |a: [f64; 3]| {
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        s += a[i] * m.second[i][j] * a[j];
                    }
                }
                s
            };
            assert!(along(fv.frame[0]) <= along(fv.frame[1]) + 1e-12);
        }
    }

    #[test]
    fn coherent_state_is_unsqueezed() {
        let (basis, ops, metric) = identity_metric_setup(12);
        let st = coherent_state(&basis, std::f64::consts::FRAC_PI_4, 0.0).unwrap();
        let rep = analyze(&st, &metric, &ops).unwrap();
        assert_abs_diff_eq!(rep.zeta2_x, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.zeta2_y, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.zeta2_x_db, 0.0, epsilon = 1e-8);

        let down = coherent_state(&basis, std::f64::consts::PI, 0.0).unwrap();
        let rep = analyze(&down, &metric, &ops).unwrap();
        assert_abs_diff_eq!(rep.zeta2_x, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.zeta2_y, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn undefined_frame_below_floor() {
        let m = SpinMoments {
            mean: [0.0, 0.0, 1e-9],
            second: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            imag_residue: 0.0,
            spin: 2.0,
        };
        assert!(matches!(
            optimal_frame(&m, 1e-6 * 2.0),
            Err(Error::UndefinedFrame(_, _))
        ));
    }

    #[test]
    fn weights_examples() {
        let basis = build_basis(6).unwrap();
        let st = coherent_state(&basis, 0.0, 0.0).unwrap();
        let w = basis_weights(&st).unwrap();
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-14);
        assert!(w[1..].iter().all(|&x| x <= 1e-14));

        let basis = build_basis(1).unwrap();
        let st = coherent_state(&basis, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        let w = basis_weights(&st).unwrap();
        assert_abs_diff_eq!(w[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(w[1], 0.5, epsilon = 1e-14);

        let zero = StateVector {
            amplitudes: ndarray::Array1::zeros(3),
            two_s: 2,
            normalization: crate::spin::Normalization::Unnormalized,
        };
        assert!(matches!(basis_weights(&zero), Err(Error::ZeroState)));
    }

    #[test]
    fn theta_examples() {
        assert_abs_diff_eq!(
            theta_of_mean([0.0, 0.0, -3.0]).unwrap(),
            std::f64::consts::PI,
            epsilon = 1e-14
        );
        // antipode of n(pi/4, 0)
        let t0 = std::f64::consts::FRAC_PI_4;
        let n = crate::spin::bloch_direction(t0, 0.0);
        let got = theta_of_mean([-2.0 * n[0], -2.0 * n[1], -2.0 * n[2]]).unwrap();
        assert_abs_diff_eq!(got, std::f64::consts::PI - t0, epsilon = 1e-12);
        assert!(theta_of_mean([0.0, 0.0, 0.0]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn rotation_about_mean_leaves_variances_invariant(
            angle in 0.0..(2.0 * std::f64::consts::PI),
            c11 in 0.2..2.0f64,
            c22 in 0.2..2.0f64,
            c12 in -0.4..0.4f64,
            mz in 0.5..4.0f64,
        ) {
            // rotate the transverse covariance rigidly about n_z'; the
            // eigen-variances and zeta^2 must not move
            let m = SpinMoments {
                mean: [0.0, 0.0, -mz],
                second: [[c11, c12, 0.0], [c12, c22, 0.0], [0.0, 0.0, mz * mz]],
                imag_residue: 0.0,
                spin: mz,
            };
            let (ca, sa) = (angle.cos(), angle.sin());
            // C' = R C R^T in the transverse plane
            let r11 = ca * ca * c11 + 2.0 * ca * sa * c12 + sa * sa * c22;
            let r22 = sa * sa * c11 - 2.0 * ca * sa * c12 + ca * ca * c22;
            let r12 = (c22 - c11) * ca * sa + (ca * ca - sa * sa) * c12;
            let m_rot = SpinMoments {
                mean: m.mean,
                second: [[r11, r12, 0.0], [r12, r22, 0.0], [0.0, 0.0, mz * mz]],
                imag_residue: 0.0,
                spin: mz,
            };
            let a = optimal_frame(&m, 1e-9).unwrap();
            let b = optimal_frame(&m_rot, 1e-9).unwrap();
            prop_assert!((a.var_min - b.var_min).abs() <= 1e-10);
            prop_assert!((a.var_max - b.var_max).abs() <= 1e-10);
            let ra = squeezing_parameters(&m, &a, ISS_TOL_DB);
            let rb = squeezing_parameters(&m_rot, &b, ISS_TOL_DB);
            prop_assert!((ra.zeta2_x - rb.zeta2_x).abs() <= 1e-10);
            prop_assert!((ra.zeta2_y - rb.zeta2_y).abs() <= 1e-10);
        }

        #[test]
        fn weights_sum_to_one(
            seed in 0u64..1000,
            two_s in 1u32..24,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let dim = two_s as usize + 1;
            let amplitudes = ndarray::Array1::from_shape_fn(dim, |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let st = StateVector {
                amplitudes,
                two_s,
                normalization: crate::spin::Normalization::Unnormalized,
            };
            let w = basis_weights(&st).unwrap();
            let total: f64 = w.iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
            prop_assert!(w.iter().all(|&x| x >= 0.0));
        }
    }
}
