//! Two particles coupled by `m omega0^2 (x1 - x2)^2 / 2`, sharing one bath.
//!
//! The characteristic system `dv/dt = M v / 2m`, `v = (z1, z2, q1, q2)`, splits into a
//! sum mode (`z1 + z2`, `q1 + q2`) that moves freely and a relative mode with restoring
//! constant `8 m^2 omega0^2`. Every entry of the propagator and every noise integral is
//! built from those two [`DampedMode`]s, which keeps the evaluation finite through
//! critical damping and at both signs of `t`.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use crate::bipartite_free::{covariance_pattern, doubled_eps, first_crossing, EsdOutcome};
use crate::error::{non_negative, positive, Error, Result};
use crate::gaussian::{CovarianceMatrix, GaussianPairState, NegativityConvention};
use crate::mode::{DampedMode, DampingRegime};
use crate::single::BathParams;

/// Physical parameters of the coupled pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicSystem {
    gamma: f64,
    omega0: f64,
    mass: f64,
    sum: DampedMode,
    rel: DampedMode,
}

impl HarmonicSystem {
    pub fn new(gamma: f64, omega0: f64, mass: f64) -> Result<Self> {
        positive("gamma", gamma)?;
        non_negative("omega0", omega0)?;
        positive("mass", mass)?;
        Ok(Self {
            gamma,
            omega0,
            mass,
            sum: DampedMode::new(gamma, 0.0, mass)?,
            rel: DampedMode::new(gamma, 8.0 * mass * mass * omega0 * omega0, mass)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `gamma^2 - 8 m^2 omega0^2`.
    pub fn discriminant(&self) -> f64 {
        self.rel.discriminant()
    }

    pub fn regime(&self) -> DampingRegime {
        self.rel.regime()
    }

    /// `(0, 2 gamma, lambda_+, lambda_-)`.
    pub fn eigenvalues(&self) -> [Complex64; 4] {
        let (lp, lm) = self.rel.eigenvalues();
        [Complex64::new(0.0, 0.0), Complex64::new(2.0 * self.gamma, 0.0), lp, lm]
    }

    /// The characteristic matrix `M`.
    pub fn matrix(&self) -> Matrix4<f64> {
        let c = 4.0 * self.mass * self.mass * self.omega0 * self.omega0;
        let g2 = 2.0 * self.gamma;
        #[rustfmt::skip]
        let m = Matrix4::new(
            g2,  0.0, 1.0, 0.0,
            0.0, g2,  0.0, 1.0,
            -c,  c,   0.0, 0.0,
            c,   -c,  0.0, 0.0,
        );
        m
    }
}

/// Eigen-decomposition `M = Q D Q^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicEigen {
    pub system: HarmonicSystem,
    pub eigenvalues: [Complex64; 4],
    pub q: Matrix4<Complex64>,
    pub q_inv: Matrix4<Complex64>,
}

impl HarmonicEigen {
    pub fn matrix(&self) -> Matrix4<f64> {
        self.system.matrix()
    }

    pub fn eigenvectors(&self) -> (Matrix4<Complex64>, Matrix4<Complex64>) {
        (self.q, self.q_inv)
    }

    /// `Q D Q^{-1}`.
    pub fn reconstruct(&self) -> Matrix4<Complex64> {
        let d = Matrix4::from_diagonal(&nalgebra::Vector4::from_column_slice(&self.eigenvalues));
        self.q * d * self.q_inv
    }
}

/// Relative distance of `gamma^2` from `8 m^2 omega0^2` below which the eigenbasis is refused.
pub const CRITICAL_TOL: f64 = 1e-8;

pub fn harmonic_matrix4(gamma: f64, omega0: f64, m: f64) -> Result<HarmonicEigen> {
    let system = HarmonicSystem::new(gamma, omega0, m)?;
    if omega0 == 0.0 {
        return Err(Error::DomainError(
            "omega0 = 0 makes lambda_- vanish; the eigenbasis needs a coupling".into(),
        ));
    }
    let w = system.discriminant();
    if w.abs() < CRITICAL_TOL * gamma * gamma {
        return Err(Error::CriticalDamping { discriminant: w });
    }
    let ev = system.eigenvalues();
    let (lp, lm) = (ev[2], ev[3]);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let g = Complex64::new(gamma, 0.0);
    let h = -one / (2.0 * g);
    #[rustfmt::skip]
    let q = Matrix4::new(
        h,   one,  one / lm,  one / lp,
        h,   one,  -one / lm, -one / lp,
        one, zero, -one,      -one,
        one, zero, one,       one,
    );
    let den = 2.0 * (lp - lm);
    let pp = lp * lm / den;
    let quarter = one / (4.0 * g);
    #[rustfmt::skip]
    let q_inv = Matrix4::new(
        zero,           zero,           one / 2.0,  one / 2.0,
        one / 2.0,      one / 2.0,      quarter,    quarter,
        pp,             -pp,            lm / den,   -lm / den,
        -pp,            pp,             -lp / den,  lp / den,
    );
    Ok(HarmonicEigen {
        system,
        eigenvalues: ev,
        q,
        q_inv,
    })
}

/// Entries of `F(t)`, with `v(t) = F(t) v(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicPropagator {
    pub t: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub beta: f64,
    pub nu: f64,
}

impl HarmonicPropagator {
    pub fn alpha_plus(&self) -> f64 {
        self.alpha1 + self.alpha2
    }

    pub fn alpha_minus(&self) -> f64 {
        self.alpha1 - self.alpha2
    }

    pub fn delta_plus(&self) -> f64 {
        self.delta1 + self.delta2
    }

    pub fn delta_minus(&self) -> f64 {
        self.delta1 - self.delta2
    }

    pub fn nu_plus(&self) -> f64 {
        0.5 + self.nu
    }

    pub fn nu_minus(&self) -> f64 {
        0.5 - self.nu
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let (ap, am) = (self.alpha_plus(), self.alpha_minus());
        let (dp, dm) = (self.delta_plus(), self.delta_minus());
        let (np, nm) = (self.nu_plus(), self.nu_minus());
        let b = self.beta;
        #[rustfmt::skip]
        let f = Matrix4::new(
            ap, am, dp, dm,
            am, ap, dm, dp,
            -b, b,  np, nm,
            b,  -b, nm, np,
        );
        f
    }
}

/// Valid for any real `t`.
pub fn propagator_f(system: &HarmonicSystem, t: f64) -> Result<HarmonicPropagator> {
    let s = system.sum.propagator(t)?;
    let r = system.rel.propagator(t)?;
    Ok(HarmonicPropagator {
        t,
        alpha1: s.a / 2.0,
        alpha2: r.a / 2.0,
        delta1: s.b / 2.0,
        delta2: r.b / 2.0,
        beta: -r.cq / 2.0,
        nu: r.d / 2.0,
    })
}

/// Weights of the accumulated noise
/// `chi1 (z1^2 + z2^2) + theta1 z1 z2 + chi2 (q1^2 + q2^2) + theta2 q1 q2
///  + Lambda1 (z1 q1 + z2 q2) + Lambda2 (z1 q2 + z2 q1)` in initial variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicNoiseIntegrals {
    pub t: f64,
    pub chi1: f64,
    pub theta1: f64,
    pub chi2: f64,
    pub theta2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Integrals over `[0, t]`; negative `t` gives the signed integral used by the stable assembly.
pub fn noise_integrals(system: &HarmonicSystem, t: f64) -> Result<HarmonicNoiseIntegrals> {
    let s = system.sum.noise(t)?;
    let r = system.rel.noise(t)?;
    Ok(HarmonicNoiseIntegrals {
        t,
        chi1: (s.aa + r.aa) / 2.0,
        theta1: s.aa - r.aa,
        chi2: (s.bb + r.bb) / 2.0,
        theta2: s.bb - r.bb,
        lambda1: s.ab + r.ab,
        lambda2: s.ab - r.ab,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteHarmonicCoefficients {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    pub d: f64,
    pub e: f64,
    pub t: f64,
    pub state: GaussianPairState,
    pub bath: BathParams,
    pub omega0: f64,
}

/// The harmonic chapter assumes one bath for both particles.
pub fn shared_bath(bath1: &BathParams, bath2: &BathParams) -> Result<BathParams> {
    if bath1 != bath2 {
        return Err(Error::UnequalBaths);
    }
    Ok(*bath1)
}

/// Which grouping of the final coefficients to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    /// Expansion of `F(-t)^T K F(-t)`, checked against the oracle.
    Corrected,
    /// The grouping as printed in the derivation, kept for comparison.
    Printed,
}

struct Weights {
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    gk: f64,
    lambda1: f64,
    lambda2: f64,
}

fn grouped(f: &HarmonicPropagator, w: &Weights, grouping: Grouping) -> [f64; 6] {
    let (a1, a2, d1, d2, be, nu) = (f.alpha1, f.alpha2, f.delta1, f.delta2, f.beta, f.nu);
    let (x1, y1, x2, y2, gk, l1, l2) = (w.x1, w.y1, w.x2, w.y2, w.gk, w.lambda1, w.lambda2);
    let nu2 = nu * nu;
    // factors that differ between the two groupings
    let (kx, ky, ax, ey, cs) = match grouping {
        Grouping::Corrected => (2.0, 2.0, 0.5 + 2.0 * nu2, 0.5 + 2.0 * nu2, -1.0),
        Grouping::Printed => (1.0, 1.0, 0.25 + nu2, 0.25 + nu2, 1.0),
    };
    let a = gk * (l1 * (d1 + 2.0 * d2 * nu) + l2 * (d1 - 2.0 * d2 * nu)) + kx * x1 * (d1 * d1 + d2 * d2)
        - y1 * (d1 * d1 - d2 * d2)
        + ax * x2
        + (0.25 - nu2) * y2;
    let b = 2.0 * gk * a2 * be * (l2 - l1) + kx * x1 * (a1 * a1 + a2 * a2) + 2.0 * x2 * be * be
        - y1 * (a1 * a1 - a2 * a2)
        - y2 * be * be;
    let d = 4.0 * gk * a2 * be * (l1 - l2) + 4.0 * x1 * (a1 * a1 - a2 * a2)
        - 4.0 * x2 * be * be
        - ky * y1 * (a1 * a1 + a2 * a2)
        + 2.0 * y2 * be * be;
    let e = 2.0 * gk * (l1 * (d1 - 2.0 * d2 * nu) + l2 * (d1 + 2.0 * d2 * nu))
        + 4.0 * x1 * (d1 * d1 - d2 * d2)
        + x2 * (1.0 - 4.0 * nu2)
        - ky * y1 * (d1 * d1 + d2 * d2)
        + ey * y2;
    let c1 = gk * (l1 * (a1 + 2.0 * a2 * nu - 2.0 * be * d2) + l2 * (a1 - 2.0 * a2 * nu + 2.0 * be * d2))
        + 4.0 * x1 * (a1 * d1 + a2 * d2)
        + cs * 4.0 * x2 * be * nu
        - 2.0 * y1 * (a1 * d1 - a2 * d2)
        - cs * 2.0 * y2 * be * nu;
    let c2 = gk * (l1 * (a1 - 2.0 * a2 * nu + 2.0 * be * d2) + l2 * (a1 + 2.0 * a2 * nu - 2.0 * be * d2))
        + 4.0 * x1 * (a1 * d1 - a2 * d2)
        - cs * 4.0 * x2 * be * nu
        - 2.0 * y1 * (a1 * d1 + a2 * d2)
        + cs * 2.0 * y2 * be * nu;
    [a, b, c1, c2, d, e]
}

fn initial_weights(state: &GaussianPairState) -> (f64, f64, f64, f64) {
    let (ep, em) = doubled_eps(state);
    let h2 = state.hbar() * state.hbar();
    let gap = ep * ep - em * em;
    (ep * h2, 2.0 * em * h2, ep / (4.0 * gap), em / (2.0 * gap))
}

fn assemble(
    state: &GaussianPairState,
    bath: &BathParams,
    omega0: f64,
    t: f64,
    c: [f64; 6],
) -> BipartiteHarmonicCoefficients {
    BipartiteHarmonicCoefficients {
        a: c[0],
        b: c[1],
        c1: c[2],
        c2: c[3],
        d: c[4],
        e: c[5],
        t,
        state: *state,
        bath: *bath,
        omega0,
    }
}

fn setup(state: &GaussianPairState, bath: &BathParams, omega0: f64, t: f64) -> Result<HarmonicSystem> {
    non_negative("t", t)?;
    if bath.hbar() != state.hbar() {
        return Err(Error::InvalidParameter(
            "hbar must agree between the state and the bath".into(),
        ));
    }
    HarmonicSystem::new(bath.gamma(), omega0, bath.mass())
}

/// Stable assembly: the initial form pulled back through `F(-t)`, plus the noise
/// integrated backwards along the characteristic, `-4 gamma kT W(-t)`.
pub fn bipartite_harmonic_coeffs(
    state: &GaussianPairState,
    bath: &BathParams,
    omega0: f64,
    t: f64,
) -> Result<BipartiteHarmonicCoefficients> {
    let sys = setup(state, bath, omega0, t)?;
    let f = propagator_f(&sys, -t)?;
    let n = noise_integrals(&sys, -t)?;
    let (x1, y1, x2, y2) = initial_weights(state);
    let w = Weights {
        x1,
        y1,
        x2,
        y2,
        gk: 0.0,
        lambda1: 0.0,
        lambda2: 0.0,
    };
    let mut c = grouped(&f, &w, Grouping::Corrected);
    let gk = 4.0 * bath.gamma() * bath.kt();
    c[0] -= gk * n.chi2;
    c[1] -= gk * n.chi1;
    c[2] -= gk * n.lambda1;
    c[3] -= gk * n.lambda2;
    c[4] -= gk * n.theta1;
    c[5] -= gk * n.theta2;
    Ok(assemble(state, bath, omega0, t, c))
}

/// Forward-time assembly: noise accumulated over `[0, t]` in initial variables, then
/// everything pulled back through `F(-t)`. Loses precision once `e^{gamma t/m}` is large.
pub fn bipartite_harmonic_coeffs_forward(
    state: &GaussianPairState,
    bath: &BathParams,
    omega0: f64,
    t: f64,
    grouping: Grouping,
) -> Result<BipartiteHarmonicCoefficients> {
    let sys = setup(state, bath, omega0, t)?;
    let f = propagator_f(&sys, -t)?;
    let n = noise_integrals(&sys, t)?;
    let (x1, y1, x2, y2) = initial_weights(state);
    let gk = 4.0 * bath.gamma() * bath.kt();
    let w = Weights {
        x1: x1 + gk * n.chi1,
        y1: y1 - gk * n.theta1,
        x2: x2 + gk * n.chi2,
        y2: y2 + gk * n.theta2,
        gk,
        lambda1: n.lambda1,
        lambda2: n.lambda2,
    };
    Ok(assemble(state, bath, omega0, t, grouped(&f, &w, grouping)))
}

/// Same coefficients as a symmetric `K` with `ln P~ = -v^T K v`, `v = (z1, z2, q1, q2)`.
pub fn kernel_matrix_harmonic(c: &BipartiteHarmonicCoefficients) -> DMatrix<f64> {
    #[rustfmt::skip]
    let k = DMatrix::from_row_slice(4, 4, &[
        c.b,        c.d / 2.0,  c.c1 / 2.0, c.c2 / 2.0,
        c.d / 2.0,  c.b,        c.c2 / 2.0, c.c1 / 2.0,
        c.c1 / 2.0, c.c2 / 2.0, c.a,        c.e / 2.0,
        c.c2 / 2.0, c.c1 / 2.0, c.e / 2.0,  c.a,
    ]);
    k
}

pub fn covariance_harmonic(c: &BipartiteHarmonicCoefficients) -> Result<CovarianceMatrix> {
    covariance_pattern(c.a, c.a, c.b, c.b, c.c1, c.c1, c.c2, c.c2, c.d, c.e, c.state.hbar())
}

/// `n` entries of `-sigma G^T sigma G^T` and its two doubly degenerate eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtSpectrumHarmonic {
    pub n11: f64,
    pub n13: f64,
    pub n14: f64,
    pub n23: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// Needs a particle-symmetric `G`, as produced by [`covariance_harmonic`].
pub fn pt_spectrum_harmonic(g: &CovarianceMatrix) -> Result<PtSpectrumHarmonic> {
    if g.n_modes() != 2 {
        return Err(Error::DomainError("partial-transpose spectrum needs two modes".into()));
    }
    let scale = g.matrix().amax();
    for (p, q) in [((0, 0), (2, 2)), ((1, 1), (3, 3)), ((0, 1), (2, 3)), ((0, 3), (1, 2))] {
        if (g.get(p.0, p.1) - g.get(q.0, q.1)).abs() > 1e-9 * scale {
            return Err(Error::DomainError("covariance matrix is not particle-symmetric".into()));
        }
    }
    let a = g.get(0, 0) / 4.0;
    let c1 = -g.get(0, 1);
    let e = g.get(0, 2) / 2.0;
    let c2 = -g.get(0, 3);
    let b = g.get(1, 1);
    let d = 2.0 * g.get(1, 3);
    let n11 = 4.0 * a * b - d * e + c2 * c2 - c1 * c1;
    let n13 = 2.0 * e * b - 2.0 * a * d;
    let n14 = c1 * d - 2.0 * c2 * b;
    let n23 = 8.0 * a * c2 - 4.0 * e * c1;
    let mut disc = n13 * n13 - n14 * n23;
    if disc < 0.0 {
        if disc < -1e-9 * n11 * n11 {
            return Err(Error::ComplexSpectrum { discriminant: disc });
        }
        disc = 0.0;
    }
    let r = disc.sqrt();
    Ok(PtSpectrumHarmonic {
        n11,
        n13,
        n14,
        n23,
        lambda_plus: n11 + r,
        lambda_minus: n11 - r,
    })
}

/// `16 pi hbar^2 B / (4 B^2 - D^2)^{3/2}`, the same for both particles.
pub fn coherence_variance_bipartite(b: f64, d: f64, hbar: f64) -> Result<f64> {
    crate::bipartite_free::coherence_variance_pair(b, b, d, hbar)
}

pub fn log_negativity_harmonic(
    state: &GaussianPairState,
    bath: &BathParams,
    omega0: f64,
    t: f64,
    convention: NegativityConvention,
) -> Result<f64> {
    covariance_harmonic(&bipartite_harmonic_coeffs(state, bath, omega0, t)?)?.log_negativity(convention)
}

/// `nu~_min / hbar - 1`: negative while entangled.
pub fn entanglement_margin_harmonic(state: &GaussianPairState, bath: &BathParams, omega0: f64, t: f64) -> Result<f64> {
    let g = covariance_harmonic(&bipartite_harmonic_coeffs(state, bath, omega0, t)?)?;
    Ok(g.min_pt_symplectic_eigenvalue()? / state.hbar() - 1.0)
}

/// First death of the standard log negativity over `[0, t_max]`.
pub fn esd_time_harmonic(
    state: &GaussianPairState,
    bath: &BathParams,
    omega0: f64,
    t_max: f64,
    n_grid: usize,
) -> Result<EsdOutcome> {
    setup(state, bath, omega0, 0.0)?;
    first_crossing(|t| entanglement_margin_harmonic(state, bath, omega0, t), t_max, n_grid)
}
