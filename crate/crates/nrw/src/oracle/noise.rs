//! Adaptive quadrature of the harmonic-pair noise integrands written in the
//! relative-mode eigenvalues `lambda+- = gamma +- sqrt(gamma^2 - 8 m^2 omega0^2)`.

use num_complex::Complex64;

use crate::error::{positive, Error, Result};
use crate::oracle::quad::adaptive_quad;

/// `int_0^t` of each integrand, same layout as the closed-form noise integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseQuadrature {
    pub chi1: f64,
    pub theta1: f64,
    pub chi2: f64,
    pub theta2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

/// The six integrands at time `s`, in the order of [`NoiseQuadrature`].
pub fn noise_integrands(gamma: f64, omega0: f64, mass: f64, s: f64) -> [f64; 6] {
    let m = mass;
    let root = Complex64::new(gamma * gamma - 8.0 * m * m * omega0 * omega0, 0.0).sqrt();
    let (lp, lm) = (gamma + root, gamma - root);
    let dd = (lp - lm) * (lp - lm);
    let ep = (lp * s / m).exp();
    let em = (lm * s / m).exp();
    let e1 = (gamma * s / m).exp();
    let e2 = (2.0 * gamma * s / m).exp();
    let g2 = gamma * gamma;
    let zz = e2 / 2.0 + (lp * lp * ep + lm * lm * em) / (2.0 * dd) - lp * lm * e1 / dd;
    let zz12 = e2 / 4.0 - (lp * lp * ep + lm * lm * em) / (4.0 * dd) + lp * lm * e1 / (2.0 * dd);
    let qq = 1.0 / (8.0 * g2) + e2 / (8.0 * g2) - e1 / (4.0 * g2) + (ep + em) / (2.0 * dd) - e1 / dd;
    let qq12 = 1.0 / (16.0 * g2) + e2 / (16.0 * g2) - e1 / (8.0 * g2) - (ep + em) / (4.0 * dd) + e1 / (2.0 * dd);
    let zq = e2 / (2.0 * gamma) - e1 / (2.0 * gamma) + (lp * ep + lm * em) / dd - 2.0 * gamma * e1 / dd;
    let zq12 = e2 / (2.0 * gamma) - e1 / (2.0 * gamma) - (lp * ep + lm * em) / dd + 2.0 * gamma * e1 / dd;
    [zz.re, 4.0 * zz12.re, qq.re, 4.0 * qq12.re, zq.re, zq12.re]
}

pub fn noise_quadrature(gamma: f64, omega0: f64, mass: f64, t: f64, tol: f64) -> Result<NoiseQuadrature> {
    positive("gamma", gamma)?;
    positive("omega0", omega0)?;
    positive("mass", mass)?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t must be finite, got {t}")));
    }
    let mut out = [0.0; 6];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = adaptive_quad(|s| noise_integrands(gamma, omega0, mass, s)[k], 0.0, t, tol)?;
    }
    let [chi1, theta1, chi2, theta2, lambda1, lambda2] = out;
    Ok(NoiseQuadrature {
        chi1,
        theta1,
        chi2,
        theta2,
        lambda1,
        lambda2,
    })
}
