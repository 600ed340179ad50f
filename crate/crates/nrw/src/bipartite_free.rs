//! Two free particles, each coupled to its own bath.
//!
//! The characteristic function is
//! `P~ = exp(-A1 q1^2 - A2 q2^2 - B1 z1^2 - B2 z2^2 - D z1 z2 - E q1 q2
//!          - C11 z1 q1 - C22 z2 q2 - C12 z1 q2 - C21 z2 q1)`.
//! Here `eps_pm = 1/2s^2 +- 1/8d^2`, twice the values used by the reduced-state spectrum.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{non_negative, positive, Error, Result};
use crate::gaussian::{CovarianceMatrix, GaussianPairState, NegativityConvention, HEISENBERG_TOL};
use crate::single::BathParams;

/// `(eps_plus, eps_minus)` of the doubled exponent.
pub fn doubled_eps(state: &GaussianPairState) -> (f64, f64) {
    let (s, d) = (state.s(), state.d());
    (
        1.0 / (2.0 * s * s) + 1.0 / (8.0 * d * d),
        1.0 / (2.0 * s * s) - 1.0 / (8.0 * d * d),
    )
}

/// Initial characteristic function in `(q0, z0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialKernel {
    /// weight of `q1^2` and of `q2^2`
    pub a0: f64,
    /// weight of `q1 q2`
    pub e0: f64,
    /// weight of `z1^2` and of `z2^2`
    pub b0: f64,
    /// weight of `z1 z2`
    pub d0: f64,
}

impl InitialKernel {
    pub fn eval(&self, q: [f64; 2], z: [f64; 2]) -> f64 {
        (-self.a0 * (q[0] * q[0] + q[1] * q[1])
            - self.e0 * q[0] * q[1]
            - self.b0 * (z[0] * z[0] + z[1] * z[1])
            - self.d0 * z[0] * z[1])
            .exp()
    }
}

pub fn initial_kernel(state: &GaussianPairState) -> InitialKernel {
    let (ep, em) = doubled_eps(state);
    let h2 = state.hbar() * state.hbar();
    let gap = ep * ep - em * em;
    InitialKernel {
        a0: ep / (4.0 * gap),
        e0: em / (2.0 * gap),
        b0: h2 * ep,
        d0: -2.0 * h2 * em,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteFreeCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub c11: f64,
    pub c22: f64,
    pub c12: f64,
    pub c21: f64,
    pub d: f64,
    pub e: f64,
    pub t: f64,
    pub state: GaussianPairState,
    pub bath1: BathParams,
    pub bath2: BathParams,
}

/// Baths may differ in coupling and temperature but must share mass and constants.
pub(crate) fn check_pair(state: &GaussianPairState, b1: &BathParams, b2: &BathParams) -> Result<()> {
    if b1.mass() != b2.mass() {
        return Err(Error::InvalidParameter("both particles must have the same mass".into()));
    }
    if b1.hbar() != b2.hbar() || b1.k() != b2.k() || b1.hbar() != state.hbar() {
        return Err(Error::InvalidParameter(
            "hbar and k must agree between the state and both baths".into(),
        ));
    }
    Ok(())
}

pub fn bipartite_free_coeffs(
    state: &GaussianPairState,
    bath1: &BathParams,
    bath2: &BathParams,
    t: f64,
) -> Result<BipartiteFreeCoefficients> {
    non_negative("t", t)?;
    check_pair(state, bath1, bath2)?;
    let (ep, em) = doubled_eps(state);
    let h2 = state.hbar() * state.hbar();
    let a0 = ep / (4.0 * (ep * ep - em * em));
    let m = bath1.mass();

    struct Side {
        g: f64,
        e: f64,
        one_minus: f64,
        beta: f64,
        alpha: f64,
        tau: f64,
    }
    let side = |b: &BathParams| {
        let x = -b.gamma() * t / m;
        let kt = b.kt();
        Side {
            g: b.gamma(),
            e: x.exp(),
            one_minus: -x.exp_m1(),
            beta: -2.0 * m * kt * (2.0 * x).exp_m1(),
            alpha: -4.0 * m * kt / b.gamma() * x.exp_m1(),
            tau: kt / b.gamma(),
        }
    };
    let (p, r) = (side(bath1), side(bath2));
    let a = |s: &Side| {
        a0 + s.tau * t - s.alpha / (2.0 * s.g)
            + s.beta / (4.0 * s.g * s.g)
            + h2 * ep / (4.0 * s.g * s.g) * s.one_minus * s.one_minus
    };
    let b = |s: &Side| h2 * ep * s.e * s.e + s.beta;
    let c = |s: &Side| s.beta / s.g - s.alpha - h2 * ep / s.g * s.e * s.one_minus;

    Ok(BipartiteFreeCoefficients {
        a1: a(&p),
        a2: a(&r),
        b1: b(&p),
        b2: b(&r),
        c11: c(&p),
        c22: c(&r),
        c12: h2 * em / r.g * p.e * r.one_minus,
        c21: h2 * em / p.g * r.e * p.one_minus,
        d: -2.0 * h2 * em * p.e * r.e,
        e: em / (2.0 * (ep * ep - em * em)) - h2 * em / (2.0 * p.g * r.g) * p.one_minus * r.one_minus,
        t,
        state: *state,
        bath1: *bath1,
        bath2: *bath2,
    })
}

/// The coefficients as a symmetric matrix `K` with `ln P~ = -v^T K v`, `v = (z1, z2, q1, q2)`.
pub fn kernel_matrix(c: &BipartiteFreeCoefficients) -> DMatrix<f64> {
    #[rustfmt::skip]
    let k = DMatrix::from_row_slice(4, 4, &[
        c.b1,        c.d / 2.0,   c.c11 / 2.0, c.c12 / 2.0,
        c.d / 2.0,   c.b2,        c.c21 / 2.0, c.c22 / 2.0,
        c.c11 / 2.0, c.c21 / 2.0, c.a1,        c.e / 2.0,
        c.c12 / 2.0, c.c22 / 2.0, c.e / 2.0,   c.a2,
    ]);
    k
}

/// The ten coefficients laid out in `(x1, p1, x2, p2)` order.
#[allow(clippy::too_many_arguments)]
pub(crate) fn covariance_pattern(
    a1: f64,
    a2: f64,
    b1: f64,
    b2: f64,
    c11: f64,
    c22: f64,
    c12: f64,
    c21: f64,
    d: f64,
    e: f64,
    hbar: f64,
) -> Result<CovarianceMatrix> {
    #[rustfmt::skip]
    let g = [
        4.0 * a1, -c11,     2.0 * e,  -c21,
        -c11,     b1,       -c12,     d / 2.0,
        2.0 * e,  -c12,     4.0 * a2, -c22,
        -c21,     d / 2.0,  -c22,     b2,
    ];
    CovarianceMatrix::from_row_slice(2, &g, hbar)
}

/// `G_xx = -2 d_q d_q P~`, `G_xp = d_q d_z P~`, `G_pp = -1/2 d_z d_z P~` at the origin.
pub fn covariance_from_kernel(c: &BipartiteFreeCoefficients) -> Result<CovarianceMatrix> {
    covariance_pattern(
        c.a1,
        c.a2,
        c.b1,
        c.b2,
        c.c11,
        c.c22,
        c.c12,
        c.c21,
        c.d,
        c.e,
        c.state.hbar(),
    )
}

/// `rho(x1, x2; x1', x2') = Omega' exp(-vs1 x1^2 - vs2 x2^2 - vs1' x1'^2 - vs2' x2'^2
///   + 2 nu1 x1 x1' + 2 nu2 x2 x2' - eta x1 x2 - eta' x1' x2' - zeta x1 x2' - zeta' x2 x1')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionKernel2P {
    pub varsigma1: Complex64,
    pub varsigma2: Complex64,
    pub varsigma1_prime: Complex64,
    pub varsigma2_prime: Complex64,
    pub nu1: f64,
    pub nu2: f64,
    pub eta: Complex64,
    pub eta_prime: Complex64,
    pub zeta: Complex64,
    pub zeta_prime: Complex64,
    pub omega_prime: f64,
}

impl PositionKernel2P {
    pub fn eval(&self, x: [f64; 2], xp: [f64; 2]) -> Complex64 {
        let e = -self.varsigma1 * x[0] * x[0]
            - self.varsigma2 * x[1] * x[1]
            - self.varsigma1_prime * xp[0] * xp[0]
            - self.varsigma2_prime * xp[1] * xp[1]
            + 2.0 * self.nu1 * x[0] * xp[0]
            + 2.0 * self.nu2 * x[1] * xp[1]
            - self.eta * x[0] * x[1]
            - self.eta_prime * xp[0] * xp[1]
            - self.zeta * x[0] * xp[1]
            - self.zeta_prime * x[1] * xp[0];
        self.omega_prime * e.exp()
    }

    /// `int rho(x; x) d^2x` from the Gaussian integral of the diagonal.
    pub fn trace(&self) -> Result<f64> {
        let p = (self.varsigma1 + self.varsigma1_prime - 2.0 * self.nu1).re;
        let q = (self.varsigma2 + self.varsigma2_prime - 2.0 * self.nu2).re;
        let r = (self.eta + self.eta_prime + self.zeta + self.zeta_prime).re;
        let det = 4.0 * p * q - r * r;
        if !(p > 0.0 && det > 0.0) {
            return Err(Error::DegenerateKernel { det });
        }
        Ok(self.omega_prime * 2.0 * PI / det.sqrt())
    }
}

pub fn position_kernel(c: &BipartiteFreeCoefficients) -> Result<PositionKernel2P> {
    let det = 4.0 * c.a1 * c.a2 - c.e * c.e;
    if !(c.a1 > 0.0 && det > 0.0) {
        return Err(Error::DegenerateKernel { det });
    }
    let h = c.state.hbar();
    let h2 = h * h;
    let chi1 = c.a2 / det;
    let chi2 = c.a1 / det;
    let chi12 = -c.e / det;
    let omega1 = c.b1 - c.c12 * c.c12 * chi2 - c.c11 * c.c11 * chi1 - c.c12 * c.c11 * chi12;
    let omega2 = c.b2 - c.c22 * c.c22 * chi2 - c.c21 * c.c21 * chi1 - c.c22 * c.c21 * chi12;
    let delta = c.d - 2.0 * c.c22 * c.c12 * chi2 - 2.0 * c.c11 * c.c21 * chi1 - chi12 * (c.c11 * c.c22 + c.c12 * c.c21);
    let th11 = 2.0 * c.c11 * chi1 + c.c12 * chi12;
    let th22 = 2.0 * c.c22 * chi2 + c.c21 * chi12;
    let th12 = 2.0 * c.c21 * chi1 + c.c22 * chi12;
    let th21 = 2.0 * c.c12 * chi2 + c.c11 * chi12;

    let vs1 = Complex64::new(omega1 / (4.0 * h2) + chi1 / 4.0, th11 / (4.0 * h));
    let vs2 = Complex64::new(omega2 / (4.0 * h2) + chi2 / 4.0, th22 / (4.0 * h));
    let eta = Complex64::new(chi12 / 4.0 + delta / (4.0 * h2), (th12 + th21) / (4.0 * h));
    let zeta = Complex64::new(chi12 / 4.0 - delta / (4.0 * h2), (th21 - th12) / (4.0 * h));
    Ok(PositionKernel2P {
        varsigma1: vs1,
        varsigma2: vs2,
        varsigma1_prime: vs1.conj(),
        varsigma2_prime: vs2.conj(),
        nu1: omega1 / (4.0 * h2) - chi1 / 4.0,
        nu2: omega2 / (4.0 * h2) - chi2 / 4.0,
        eta,
        eta_prime: eta.conj(),
        zeta,
        zeta_prime: zeta.conj(),
        omega_prime: 1.0 / (2.0 * PI * det.sqrt()),
    })
}

/// Entries of `-sigma G^T sigma G^T` and its two doubly degenerate eigenvalues,
/// the squared symplectic eigenvalues of the partial transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtSpectrumFree {
    pub m11: f64,
    pub m33: f64,
    pub m13: f64,
    pub m14: f64,
    pub m23: f64,
    pub m24: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// Reads the coefficients back off `G` (the untransposed matrix of this module).
pub fn pt_spectrum_free(g: &CovarianceMatrix) -> Result<PtSpectrumFree> {
    if g.n_modes() != 2 {
        return Err(Error::DomainError("partial-transpose spectrum needs two modes".into()));
    }
    let a1 = g.get(0, 0) / 4.0;
    let c11 = -g.get(0, 1);
    let e = g.get(0, 2) / 2.0;
    let c21 = -g.get(0, 3);
    let b1 = g.get(1, 1);
    let c12 = -g.get(1, 2);
    let d = 2.0 * g.get(1, 3);
    let a2 = g.get(2, 2) / 4.0;
    let c22 = -g.get(2, 3);
    let b2 = g.get(3, 3);

    let m11 = 4.0 * a1 * b1 - d * e + c12 * c21 - c11 * c11;
    let m33 = 4.0 * a2 * b2 - c22 * c22 - d * e + c12 * c21;
    let m13 = 2.0 * e * b1 - 2.0 * a2 * d - c11 * c12 + c12 * c22;
    let m14 = -c12 * b2 - c21 * b1 + c11 * d / 2.0 + c22 * d / 2.0;
    let m23 = -2.0 * e * c11 + 4.0 * a1 * c12 + 4.0 * a2 * c21 - 2.0 * e * c22;
    let m24 = 2.0 * e * b2 - c22 * c21 + c11 * c21 - 2.0 * a1 * d;

    let mut disc = (m11 - m33).powi(2) + 4.0 * m13 * m24 - 4.0 * m14 * m23;
    let scale = (m11.abs() + m33.abs()).powi(2).max(f64::MIN_POSITIVE);
    if disc < 0.0 {
        if disc < -1e-9 * scale {
            return Err(Error::ComplexSpectrum { discriminant: disc });
        }
        disc = 0.0;
    }
    let mid = 0.5 * (m11 + m33);
    let half = 0.5 * disc.sqrt();
    Ok(PtSpectrumFree {
        m11,
        m33,
        m13,
        m14,
        m23,
        m24,
        lambda_plus: mid + half,
        lambda_minus: mid - half,
    })
}

/// `16 pi hbar^2 B2 / (4 B1 B2 - D^2)^{3/2}`: off-diagonal variance of particle 1.
pub fn coherence_variance_pair(b1: f64, b2: f64, d: f64, hbar: f64) -> Result<f64> {
    let den = 4.0 * b1 * b2 - d * d;
    if !(b1 > 0.0 && b2 > 0.0 && den > 0.0) {
        return Err(Error::DomainError(format!(
            "coherence variance needs 4 B1 B2 > D^2, got B1 = {b1}, B2 = {b2}, D = {d}"
        )));
    }
    Ok(16.0 * PI * hbar * hbar * b2 / den.powf(1.5))
}

/// Outcome of a sudden-death search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EsdOutcome {
    /// First time at which the partial transpose becomes physical.
    SuddenDeath(f64),
    /// Still entangled at the end of the window.
    Entangled,
}

impl EsdOutcome {
    pub fn time(&self) -> Option<f64> {
        match self {
            Self::SuddenDeath(t) => Some(*t),
            Self::Entangled => None,
        }
    }
}

/// Absolute bisection tolerance in `t`.
pub const ESD_TOL: f64 = 1e-10;

/// First zero of `f` in `(0, t_max]`, where `f < 0` while entangled.
/// `f(0) >= 0` means there is nothing to bracket. Values within `HEISENBERG_TOL` of 0 count as separable.
pub(crate) fn first_crossing(f: impl Fn(f64) -> Result<f64>, t_max: f64, n_grid: usize) -> Result<EsdOutcome> {
    positive("t_max", t_max)?;
    if n_grid < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2 points, got {n_grid}"
        )));
    }
    let separable = |v: f64| v >= -HEISENBERG_TOL;
    if separable(f(0.0)?) {
        return Err(Error::NoBracket);
    }
    let step = t_max / (n_grid - 1) as f64;
    let mut lo = 0.0;
    for k in 1..n_grid {
        let t = step * k as f64;
        if separable(f(t)?) {
            let mut hi = t;
            while hi - lo > ESD_TOL {
                let mid = 0.5 * (lo + hi);
                if separable(f(mid)?) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(EsdOutcome::SuddenDeath(hi));
        }
        lo = t;
    }
    Ok(EsdOutcome::Entangled)
}

/// `nu~_min / hbar - 1` for the free evolution: negative while entangled.
pub fn entanglement_margin(state: &GaussianPairState, bath1: &BathParams, bath2: &BathParams, t: f64) -> Result<f64> {
    let g = covariance_from_kernel(&bipartite_free_coeffs(state, bath1, bath2, t)?)?;
    Ok(g.min_pt_symplectic_eigenvalue()? / state.hbar() - 1.0)
}

pub fn log_negativity_free(
    state: &GaussianPairState,
    bath1: &BathParams,
    bath2: &BathParams,
    t: f64,
    convention: NegativityConvention,
) -> Result<f64> {
    covariance_from_kernel(&bipartite_free_coeffs(state, bath1, bath2, t)?)?.log_negativity(convention)
}

/// Death time of the standard log negativity on a grid of `n_grid` points over `[0, t_max]`.
pub fn esd_time(
    state: &GaussianPairState,
    bath1: &BathParams,
    bath2: &BathParams,
    t_max: f64,
    n_grid: usize,
) -> Result<EsdOutcome> {
    check_pair(state, bath1, bath2)?;
    first_crossing(|t| entanglement_margin(state, bath1, bath2, t), t_max, n_grid)
}
