//! Closed-form moments for the dissipative pure-OAT Hamiltonian
//! H0 = chi S_z^2 + (epsilon - i gamma)(S_z + S), and their t -> infinity
//! limits. This is the primary analytic cross-check for the exact engine at
//! V = 0.
//!
//! All moments are functions of z_tilde = z(theta0, phi0) exp(-gamma t);
//! decay drives z_tilde -> 0 so every initial orientation relaxes onto
//! |S, -S> with isotropic transverse variance S/2.

use num_complex::Complex64;

use crate::engine::CouplingSet;
use crate::error::{Error, Result};

/// Metric moments of the dissipative OAT evolution at one instant.
#[derive(Debug, Clone, Copy)]
pub struct OatMoments {
    pub sz: f64,
    pub sz2: f64,
    /// <{S_+, S_-}>
    pub anticomm_pm: f64,
    pub sp: Complex64,
    pub sp2: Complex64,
    pub sx: f64,
    pub sy: f64,
    pub sx2: f64,
    pub sy2: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub z_tilde: Complex64,
}

/// Evaluate the closed-form moments. Requires V = 0.
///
/// The (...)^(2S-1) powers run through the complex log; the exponents are
/// integers, so the principal branch is exact and overflow-safe for any S.
pub fn oat_moments(
    two_s: u32,
    theta0: f64,
    phi0: f64,
    c: &CouplingSet,
    t: f64,
) -> Result<OatMoments> {
    if c.v != 0.0 {
        return Err(Error::OatMisuse(c.v));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta0) {
        return Err(Error::Domain(format!("theta0 = {theta0} outside [0, pi]")));
    }
    let s = f64::from(two_s) / 2.0;
    let n = f64::from(two_s);

    if theta0 == std::f64::consts::PI {
        // z diverges: the state is |k = 2S> for all t
        return Ok(finish(
            two_s,
            s * s,
            2.0 * n,
            s,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(f64::INFINITY, 0.0),
        ));
    }

    // z = -e^{-i phi0} tan(theta0/2), matching the lowest-weight preparation
    let zt = -Complex64::from_polar((theta0 / 2.0).tan(), -phi0)
        * Complex64::new((-c.gamma * t).exp(), 0.0);
    let a2 = zt.norm_sqr();
    let sz = -s * (1.0 - a2) / (1.0 + a2);
    let sz2 = s * s - 2.0 * s * (n - 1.0) * a2 / ((1.0 + a2) * (1.0 + a2));
    let anticomm = 2.0 * s + 4.0 * s * (n - 1.0) * a2 / ((1.0 + a2) * (1.0 + a2));

    let ln_denom = (1.0 + a2).ln();
    let phase_eps = Complex64::new(0.0, c.epsilon * t);
    // base = e^{-i chi t} + |z~|^2 e^{+i chi t}
    let base = Complex64::from_polar(1.0, -c.chi * t) + Complex64::from_polar(a2, c.chi * t);
    let sp = Complex64::new(2.0 * s, 0.0)
        * zt.conj()
        * (phase_eps + Complex64::new(n - 1.0, 0.0) * base.ln()
            - Complex64::new(n * ln_denom, 0.0))
        .exp();
    let base2 =
        Complex64::from_polar(1.0, -2.0 * c.chi * t) + Complex64::from_polar(a2, 2.0 * c.chi * t);
    let sp2 = Complex64::new(2.0 * s * (n - 1.0), 0.0)
        * zt.conj()
        * zt.conj()
        * (phase_eps * Complex64::new(2.0, 0.0)
            + Complex64::new(n - 2.0, 0.0) * base2.ln()
            - Complex64::new(n * ln_denom, 0.0))
        .exp();

    Ok(finish(two_s, sz2, anticomm, sz, sp, sp2, zt))
}

fn finish(
    _two_s: u32,
    sz2: f64,
    anticomm_pm: f64,
    sz: f64,
    sp: Complex64,
    sp2: Complex64,
    z_tilde: Complex64,
) -> OatMoments {
    let sx = sp.re;
    let sy = sp.im;
    let sx2 = 0.5 * sp2.re + 0.25 * anticomm_pm;
    let sy2 = -0.5 * sp2.re + 0.25 * anticomm_pm;
    OatMoments {
        sz,
        sz2,
        anticomm_pm,
        sp,
        sp2,
        sx,
        sy,
        sx2,
        sy2,
        var_x: sx2 - sx * sx,
        var_y: sy2 - sy * sy,
        z_tilde,
    }
}

/// The t -> infinity record: <S_z> = -S, transverse variances S/2.
pub fn oat_asymptote(two_s: u32) -> OatMoments {
    let s = f64::from(two_s) / 2.0;
    OatMoments {
        sz: -s,
        sz2: s * s,
        anticomm_pm: 2.0 * s,
        sp: Complex64::new(0.0, 0.0),
        sp2: Complex64::new(0.0, 0.0),
        sx: 0.0,
        sy: 0.0,
        sx2: s / 2.0,
        sy2: s / 2.0,
        var_x: s / 2.0,
        var_y: s / 2.0,
        z_tilde: Complex64::new(0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn initial_moment_is_coherent() {
        let c = CouplingSet::new(0.8, 0.0, 0.3, 0.2).unwrap();
        let theta0 = std::f64::consts::FRAC_PI_4;
        let m = oat_moments(9, theta0, 0.0, &c, 0.0).unwrap();
        assert_abs_diff_eq!(m.sz, -4.5 * theta0.cos(), epsilon = 1e-13);
    }

    #[test]
    fn rejects_lipkin() {
        let c = CouplingSet::new(0.8, 0.1, 0.3, 0.2).unwrap();
        assert!(matches!(
            oat_moments(4, 0.5, 0.0, &c, 1.0),
            Err(Error::OatMisuse(_))
        ));
    }

    #[test]
    fn asymptote_values() {
        let a = oat_asymptote(45);
        assert_abs_diff_eq!(a.var_x, 11.25);
        assert_abs_diff_eq!(a.var_y, 11.25);
        assert_abs_diff_eq!(a.sz, -22.5);
        let norm = (a.sx * a.sx + a.sy * a.sy + a.sz * a.sz).sqrt();
        assert_abs_diff_eq!(norm, 22.5);
    }

    #[test]
    fn long_time_limit_reaches_asymptote() {
        let c = CouplingSet::new(1.3, 0.0, -0.4, 0.5).unwrap();
        let t = 20.0 / c.gamma;
        for two_s in [3u32, 10, 45] {
            let m = oat_moments(two_s, 1.1, 0.7, &c, t).unwrap();
            let a = oat_asymptote(two_s);
            let s = f64::from(two_s) / 2.0;
            assert!((m.sz - a.sz).abs() <= 1e-8 * s);
            assert!((m.var_x - a.var_x).abs() <= 1e-8 * s);
            assert!((m.var_y - a.var_y).abs() <= 1e-8 * s);
        }
    }

    #[test]
    fn casimir_identity_along_trajectory() {
        let c = CouplingSet::new(0.9, 0.0, 0.2, 0.15).unwrap();
        let two_s = 21;
        let s = f64::from(two_s) / 2.0;
        for t in [0.0, 0.3, 1.0, 4.0, 20.0] {
            let m = oat_moments(two_s, 2.0, 1.3, &c, t).unwrap();
            assert_abs_diff_eq!(m.sx2 + m.sy2 + m.sz2, s * (s + 1.0), epsilon = 1e-10 * s * s);
        }
    }

    #[test]
    fn z_tilde_decays_monotonically() {
        let c = CouplingSet::new(0.9, 0.0, 0.0, 0.25).unwrap();
        let mut last = f64::INFINITY;
        for i in 0..40 {
            let t = 0.25 * i as f64;
            let m = oat_moments(11, 1.0, 0.4, &c, t).unwrap();
            let mag = m.z_tilde.norm();
            assert!(mag < last);
            last = mag;
        }
    }

    #[test]
    fn theta_pi_stays_on_top_rung() {
        let c = CouplingSet::new(0.9, 0.0, 0.1, 0.3).unwrap();
        let m = oat_moments(7, std::f64::consts::PI, 0.0, &c, 2.5).unwrap();
        assert_abs_diff_eq!(m.sz, 3.5, epsilon = 1e-14);
        assert_abs_diff_eq!(m.sp.norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn large_spin_powers_stay_finite() {
        // S = 50: (...)^(2S-1) would overflow a naive power
        let c = CouplingSet::new(2.0, 0.0, 0.0, 0.01).unwrap();
        let m = oat_moments(100, 1.4, 0.2, &c, 3.0).unwrap();
        assert!(m.sp.norm().is_finite());
        assert!(m.sp2.norm().is_finite());
        assert!(m.sp.norm() <= 100.0);
    }
}
