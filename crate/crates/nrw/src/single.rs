//! Closed-form single-particle evolution: free particle and harmonic oscillator.
//!
//! The evolved state is kept as its characteristic function
//! `P~(q, z, t) = exp(-A q^2 - B z^2 - C z q)`, the partial Fourier transform in
//! `u = (x + y)/2` of the density matrix with `hbar z = (x - y)/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{non_negative, positive, Error, Result};
use crate::gaussian::GeometricSpectrum;
use crate::mode::{DampedMode, DampingRegime};

/// Ohmic high-temperature bath seen by one particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    gamma: f64,
    temperature: f64,
    mass: f64,
    hbar: f64,
    k: f64,
}

impl BathParams {
    pub fn new(gamma: f64, temperature: f64, mass: f64, hbar: f64, k: f64) -> Result<Self> {
        Ok(Self {
            gamma: positive("gamma", gamma)?,
            temperature: non_negative("temperature", temperature)?,
            mass: positive("mass", mass)?,
            hbar: positive("hbar", hbar)?,
            k: positive("k", k)?,
        })
    }

    /// `m = hbar = k = 1`.
    pub fn unit(gamma: f64, temperature: f64) -> Result<Self> {
        Self::new(gamma, temperature, 1.0, 1.0, 1.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kt(&self) -> f64 {
        self.k * self.temperature
    }

    /// Same bath with another temperature.
    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(self.gamma, temperature, self.mass, self.hbar, self.k)
    }

    /// Same bath with another coupling.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.temperature, self.mass, self.hbar, self.k)
    }
}

/// `P~` along the free characteristics, before the initial state is inserted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeKernelCoefficients {
    pub beta: f64,
    pub alpha: f64,
    pub tau: f64,
    /// `exp(-gamma t/m)`
    pub decay: f64,
}

impl FreeKernelCoefficients {
    /// `z0 = z e^{-gamma t/m} - q/2gamma (1 - e^{-gamma t/m})`.
    pub fn z0(&self, bath: &BathParams, q: f64, z: f64) -> f64 {
        z * self.decay - q / (2.0 * bath.gamma) * (1.0 - self.decay)
    }
}

pub fn free_kernel_coefficients(bath: &BathParams, t: f64) -> Result<FreeKernelCoefficients> {
    non_negative("t", t)?;
    let (g, m, kt) = (bath.gamma, bath.mass, bath.kt());
    let x = -g * t / m;
    Ok(FreeKernelCoefficients {
        beta: -2.0 * m * kt * (2.0 * x).exp_m1(),
        alpha: -4.0 * m * kt / g * x.exp_m1(),
        tau: kt / g,
        decay: x.exp(),
    })
}

/// Common view of a one-particle characteristic function `exp(-A q^2 - B z^2 - C z q)`.
pub trait SingleKernel {
    /// `(A, B, C, hbar)`.
    fn abc(&self) -> (f64, f64, f64, f64);
}

/// Free evolution of `exp(-x^2/2s^2)`: `P~ = exp(-a q^2 - b z^2 + d z q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleEvolvedKernel {
    pub a_tilde: f64,
    pub b_tilde: f64,
    pub d_tilde: f64,
    pub hbar: f64,
}

impl SingleKernel for SingleEvolvedKernel {
    fn abc(&self) -> (f64, f64, f64, f64) {
        (self.a_tilde, self.b_tilde, -self.d_tilde, self.hbar)
    }
}

pub fn evolve_single_free(s: f64, bath: &BathParams, t: f64) -> Result<SingleEvolvedKernel> {
    positive("s", s)?;
    non_negative("t", t)?;
    let (g, m, kt, h) = (bath.gamma, bath.mass, bath.kt(), bath.hbar);
    let x = -g * t / m;
    let e = x.exp();
    let one_minus = -x.exp_m1();
    let s2 = s * s;
    let a_tilde = s2 / 4.0 + kt * t / g - m * kt / (2.0 * g * g) * one_minus * (3.0 - e)
        + h * h / (4.0 * g * g * s2) * one_minus * one_minus;
    let b_tilde = -2.0 * m * kt * (2.0 * x).exp_m1() + h * h / s2 * e * e;
    let d_tilde = h * h / (g * s2) * e * one_minus + 2.0 * m * kt / g * one_minus * one_minus;
    Ok(SingleEvolvedKernel {
        a_tilde,
        b_tilde,
        d_tilde,
        hbar: h,
    })
}

/// Coefficients of the zero-frequency, high-temperature solution of Savage and Walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SavageWallsCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `sigma_sw` is the initial area, `gamma_sw` the rate in their `exp(-2 gamma t)` convention.
/// Mass, `kT` and `hbar` come from `bath`.
pub fn savage_walls_coeffs(sigma_sw: f64, gamma_sw: f64, bath: &BathParams, t: f64) -> Result<SavageWallsCoefficients> {
    positive("sigma_sw", sigma_sw)?;
    positive("gamma_sw", gamma_sw)?;
    non_negative("t", t)?;
    let (m, kt, h) = (bath.mass, bath.kt(), bath.hbar);
    let e2 = (-2.0 * gamma_sw * t).exp();
    let e4 = e2 * e2;
    let one_minus_e2 = -(-2.0 * gamma_sw * t).exp_m1();
    let a = if kt > 0.0 {
        m * kt / (2.0 * h * h) * (1.0 - e4 * (1.0 - h * h / (m * kt * sigma_sw)))
    } else {
        e4 / (2.0 * sigma_sw)
    };
    let b = if kt > 0.0 {
        kt / (2.0 * gamma_sw * h) * one_minus_e2 * (1.0 - e2 * (1.0 - h * h / (m * kt * sigma_sw)))
    } else {
        h / (2.0 * gamma_sw * m * sigma_sw) * one_minus_e2 * e2
    };
    let hm = h / (2.0 * m * gamma_sw);
    let c = sigma_sw / 4.0
        + hm * hm * one_minus_e2 * one_minus_e2 / sigma_sw
        + kt / (m * gamma_sw * gamma_sw) * (gamma_sw * t - 0.75 + e2 - e4 / 4.0);
    Ok(SavageWallsCoefficients { a, b, c })
}

/// Harmonic evolution of `exp(-x^2/2s^2)` under `V = omega x^2 / 2`,
/// `P~ = exp(-A q^2 - B z^2 - C z q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleHarmonicCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub hbar: f64,
}

impl SingleKernel for SingleHarmonicCoefficients {
    fn abc(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.hbar)
    }
}

/// Characteristic mode of the single oscillator, `M = [[2 gamma, 1], [-4 m omega, 0]]`.
pub fn single_harmonic_mode(bath: &BathParams, omega: f64) -> Result<DampedMode> {
    non_negative("omega", omega)?;
    DampedMode::new(bath.gamma, 4.0 * bath.mass * omega, bath.mass)
}

pub fn single_damping_regime(bath: &BathParams, omega: f64) -> Result<DampingRegime> {
    Ok(single_harmonic_mode(bath, omega)?.regime())
}

/// Stable assembly: `K(t) = F(-t)^T K0 F(-t) - 4 gamma kT W(-t)`, where `F` is the
/// characteristic propagator and `W(-t)` the signed noise integral over `[0, -t]`.
/// Every exponential involved decays, so this holds at arbitrarily long times.
pub fn single_harmonic_coeffs(s: f64, bath: &BathParams, omega: f64, t: f64) -> Result<SingleHarmonicCoefficients> {
    positive("s", s)?;
    non_negative("t", t)?;
    let mode = single_harmonic_mode(bath, omega)?;
    let back = mode.propagator(-t)?;
    let noise = mode.noise(-t)?;
    // z0 = a1 z + b1 q, q0 = a2 z + b2 q
    let (a1, b1, a2, b2) = (back.a, back.b, back.cq, back.d);
    let (h, s2) = (bath.hbar, s * s);
    let gk = 4.0 * bath.gamma * bath.kt();
    let (lp, lm) = mode.eigenvalues();
    Ok(SingleHarmonicCoefficients {
        b: h * h / s2 * a1 * a1 + s2 / 4.0 * a2 * a2 - gk * noise.aa,
        a: h * h / s2 * b1 * b1 + s2 / 4.0 * b2 * b2 - gk * noise.bb,
        c: 2.0 * h * h / s2 * a1 * b1 + s2 / 2.0 * a2 * b2 - 2.0 * gk * noise.ab,
        lambda_plus: lp,
        lambda_minus: lm,
        hbar: h,
    })
}

/// Forward-time assembly in the grouping of the printed derivation:
/// the initial form plus `4 gamma kT W(t)` is pulled back through `F(-t)`.
/// Agrees with [`single_harmonic_coeffs`] but loses precision once `e^{gamma t/m}` is large.
pub fn single_harmonic_coeffs_forward(
    s: f64,
    bath: &BathParams,
    omega: f64,
    t: f64,
) -> Result<SingleHarmonicCoefficients> {
    positive("s", s)?;
    non_negative("t", t)?;
    let mode = single_harmonic_mode(bath, omega)?;
    let back = mode.propagator(-t)?;
    let noise = mode.noise(t)?;
    let (a1, b1, a2, b2) = (back.a, back.b, back.cq, back.d);
    let (h, s2) = (bath.hbar, s * s);
    let gk = 4.0 * bath.gamma * bath.kt();
    let (lp, lm) = mode.eigenvalues();
    // z0-z0, q0-q0 and z0-q0 weights of the initial form plus accumulated noise
    let kzz = h * h / s2 + gk * noise.aa;
    let kqq = s2 / 4.0 + gk * noise.bb;
    let kzq = gk * noise.ab;
    Ok(SingleHarmonicCoefficients {
        b: a1 * a1 * kzz + a2 * a2 * kqq + 2.0 * a1 * a2 * kzq,
        a: b1 * b1 * kzz + b2 * b2 * kqq + 2.0 * b1 * b2 * kzq,
        c: 2.0 * a1 * b1 * kzz + 2.0 * a2 * b2 * kqq + 2.0 * (a1 * b2 + b1 * a2) * kzq,
        lambda_plus: lp,
        lambda_minus: lm,
        hbar: h,
    })
}

/// `rho(x, y) = Omega exp(-eps x^2 - conj(eps) y^2 + 2 nu x y)` with `eps = xi + i eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityKernel1P {
    pub omega: f64,
    pub xi: f64,
    pub eta: f64,
    pub nu: f64,
}

impl DensityKernel1P {
    pub fn eps(&self) -> Complex64 {
        Complex64::new(self.xi, self.eta)
    }

    /// Width parameter of the Gaussian eigenfunction, `sqrt(xi^2 - nu^2) + i eta`.
    pub fn delta(&self) -> Complex64 {
        Complex64::new((self.xi * self.xi - self.nu * self.nu).sqrt(), self.eta)
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let e = self.eps();
        self.omega * (-e * x * x - e.conj() * y * y + 2.0 * self.nu * x * y).exp()
    }

    /// `Omega sqrt(pi / (eps + conj(eps) - 2 nu))`; equals 1 for a normalised state.
    pub fn trace(&self) -> f64 {
        self.omega * (PI / (2.0 * self.xi - 2.0 * self.nu)).sqrt()
    }

    pub fn spectrum(&self) -> Result<GeometricSpectrum> {
        let root = (self.xi * self.xi - self.nu * self.nu).sqrt();
        let denom = self.xi + root;
        let ratio = self.nu / denom;
        if ratio < 0.0 && ratio > -1e-12 {
            return GeometricSpectrum::from_parts((self.omega * (PI / denom).sqrt()).min(1.0), 0.0);
        }
        GeometricSpectrum::from_parts(self.omega * (PI / denom).sqrt(), ratio)
    }

    pub fn entropy(&self) -> Result<f64> {
        Ok(self.spectrum()?.entropy())
    }
}

pub fn single_density_kernel(kernel: &impl SingleKernel) -> Result<DensityKernel1P> {
    let (a, b, c, h) = kernel.abc();
    let det = 4.0 * a * b - c * c;
    if !(a > 0.0 && det > 0.0) {
        return Err(Error::DegenerateKernel { det });
    }
    let reduced = (b - c * c / (4.0 * a)) / (4.0 * h * h);
    let inv = 1.0 / (16.0 * a);
    Ok(DensityKernel1P {
        omega: (PI / a).sqrt() / (2.0 * PI),
        xi: reduced + inv,
        eta: c / (8.0 * h * a),
        nu: reduced - inv,
    })
}

/// Off-diagonal variance `2 hbar^2 sqrt(pi) / B^{3/2}`.
pub fn coherence_variance_single(b: f64, hbar: f64) -> Result<f64> {
    if b.is_nan() || b <= 0.0 {
        return Err(Error::DomainError(format!("coherence variance needs B > 0, got {b}")));
    }
    Ok(2.0 * hbar * hbar * PI.sqrt() / b.powf(1.5))
}
