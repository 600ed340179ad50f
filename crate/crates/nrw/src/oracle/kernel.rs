//! Brute-force characteristic function: the transformed kernel `P~(q, z, t)` is
//! rebuilt from the generator of the characteristic flow, a quadrature transform
//! of the initial wavefunction and an ODE solve along each characteristic.
//! Nothing here calls the closed-form coefficient code.

use nalgebra::DMatrix;

use crate::error::{positive, Error, Result};
use crate::gaussian::{CovarianceMatrix, GaussianPairState};
use crate::oracle::ode::{dopri5, rk4};
use crate::oracle::quad::hermite_nodes;
use crate::single::BathParams;

const HERMITE_NODES: usize = 96;
const ODE_RTOL: f64 = 1e-12;
const ODE_ATOL: f64 = 1e-15;

/// Finite-difference steps compared by Richardson extrapolation.
pub const FD_STEPS: [f64; 2] = [1e-3, 5e-4];
/// Largest relative disagreement allowed between the two step sizes.
pub const ROUGH_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Initial {
    /// `psi(x) = (pi s^2)^{-1/4} exp(-x^2 / 2 s^2)`.
    Single {
        s: f64,
    },
    Pair(GaussianPairState),
}

#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    generator: DMatrix<f64>,
    mass: f64,
    hbar: f64,
    /// `4 k gamma_i T_i` for each `z_i`.
    noise: Vec<f64>,
    initial: Initial,
    hermite: Vec<(f64, f64)>,
}

/// Bath-independent generator `M` of `dv/dt = M v / 2m` with `v = (z.., q..)`.
fn pair_generator(g1: f64, g2: f64, c: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            2.0 * g1,
            0.0,
            1.0,
            0.0, //
            0.0,
            2.0 * g2,
            0.0,
            1.0, //
            -c,
            c,
            0.0,
            0.0, //
            c,
            -c,
            0.0,
            0.0,
        ],
    )
}

fn same_units(b1: &BathParams, b2: &BathParams) -> Result<()> {
    if b1.mass() != b2.mass() || b1.hbar() != b2.hbar() || b1.k() != b2.k() {
        return Err(Error::InvalidParameter(
            "both particles need the same mass, hbar and Boltzmann constant".into(),
        ));
    }
    Ok(())
}

impl KernelEvaluator {
    /// One particle in `V = omega x^2 / 2`; `omega = 0` is the free particle.
    pub fn single(s: f64, bath: &BathParams, omega: f64) -> Result<Self> {
        positive("s", s)?;
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be >= 0, got {omega}")));
        }
        let m = bath.mass();
        let generator = DMatrix::from_row_slice(2, 2, &[2.0 * bath.gamma(), 1.0, -4.0 * m * omega, 0.0]);
        Ok(Self {
            generator,
            mass: m,
            hbar: bath.hbar(),
            noise: vec![4.0 * bath.k() * bath.gamma() * bath.temperature()],
            initial: Initial::Single { s },
            hermite: hermite_nodes(HERMITE_NODES),
        })
    }

    /// Two free particles, each in its own bath.
    pub fn pair_free(state: &GaussianPairState, b1: &BathParams, b2: &BathParams) -> Result<Self> {
        same_units(b1, b2)?;
        Self::pair(state, b1, b2, 0.0)
    }

    /// Two particles coupled by `m omega0^2 (x1 - x2)^2 / 2` in one shared bath.
    pub fn pair_harmonic(state: &GaussianPairState, bath: &BathParams, omega0: f64) -> Result<Self> {
        positive("omega0", omega0)?;
        Self::pair(state, bath, bath, omega0)
    }

    fn pair(state: &GaussianPairState, b1: &BathParams, b2: &BathParams, omega0: f64) -> Result<Self> {
        if (state.hbar() - b1.hbar()).abs() > 1e-15 * b1.hbar() {
            return Err(Error::InvalidParameter("state and bath disagree on hbar".into()));
        }
        let m = b1.mass();
        let c = 4.0 * m * m * omega0 * omega0;
        Ok(Self {
            generator: pair_generator(b1.gamma(), b2.gamma(), c),
            mass: m,
            hbar: b1.hbar(),
            noise: vec![
                4.0 * b1.k() * b1.gamma() * b1.temperature(),
                4.0 * b2.k() * b2.gamma() * b2.temperature(),
            ],
            initial: Initial::Pair(*state),
            hermite: hermite_nodes(HERMITE_NODES),
        })
    }

    pub fn n_particles(&self) -> usize {
        self.noise.len()
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.generator
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `ln P~(q, z, 0)` from `int Psi(u + hbar z) Psi(u - hbar z) cos(q.u) du`.
    pub fn ln_initial(&self, q: &[f64], z: &[f64]) -> f64 {
        let h = self.hbar;
        match self.initial {
            Initial::Single { s } => {
                // u = s x turns the product into exp(-x^2) exp(-hbar^2 z^2 / s^2) / sqrt(pi)
                let zz = h * z[0];
                let sum: f64 = self.hermite.iter().map(|&(x, w)| w * (q[0] * s * x).cos()).sum();
                -zz * zz / (s * s) + (sum / std::f64::consts::PI.sqrt()).ln()
            }
            Initial::Pair(state) => {
                let (s, d) = (state.s(), state.d());
                // r = u1 - u2 = sqrt2 s x, c = u1 + u2 = 2 sqrt2 d y
                let zr = h * (z[0] - z[1]);
                let zc = h * (z[0] + z[1]);
                let kr = 0.5 * (q[0] - q[1]) * std::f64::consts::SQRT_2 * s;
                let kc = 0.5 * (q[0] + q[1]) * 2.0 * std::f64::consts::SQRT_2 * d;
                let mut sum = 0.0;
                for &(x, wx) in &self.hermite {
                    for &(y, wy) in &self.hermite {
                        sum += wx * wy * (kr * x + kc * y).cos();
                    }
                }
                -zr * zr / (2.0 * s * s) - zc * zc / (8.0 * d * d) + (sum / std::f64::consts::PI).ln()
            }
        }
    }

    fn check(&self, q: &[f64], z: &[f64], t: f64) -> Result<()> {
        let n = self.n_particles();
        if q.len() != n || z.len() != n {
            return Err(Error::InvalidParameter(format!("expected {n} components in q and z")));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("t must be >= 0, got {t}")));
        }
        Ok(())
    }

    /// Integrates `(v, l)` from `t` back to 0 where `dl/ds = sum noise_i z_i^2`;
    /// returns `v(0)` and `-int_0^t noise`.
    fn pull_back(&self, v: &[f64], t: f64) -> Result<(Vec<f64>, f64)> {
        let dim = v.len();
        let scale = v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        if scale == 0.0 || t == 0.0 {
            return Ok((v.to_vec(), 0.0));
        }
        let m2 = 2.0 * self.mass;
        let n = self.n_particles();
        let rhs = |_s: f64, y: &[f64], dy: &mut [f64]| {
            for (i, out) in dy[..dim].iter_mut().enumerate() {
                *out = (0..dim).map(|j| self.generator[(i, j)] * y[j]).sum::<f64>() / m2;
            }
            dy[dim] = (0..n).map(|i| self.noise[i] * y[i] * y[i]).sum();
        };
        let mut y0 = v.to_vec();
        y0.push(0.0);
        let noise_scale = self.noise.iter().fold(0.0_f64, |a, &x| a.max(x)).max(1.0);
        let mut atol = vec![ODE_ATOL * scale; dim];
        atol.push(ODE_ATOL * scale * scale * noise_scale);
        let y = dopri5(&rhs, &y0, t, 0.0, ODE_RTOL, &atol)?;
        Ok((y[..dim].to_vec(), y[dim]))
    }

    /// `ln P~(q, z, t)`.
    pub fn ln_eval(&self, q: &[f64], z: &[f64], t: f64) -> Result<f64> {
        self.check(q, z, t)?;
        let n = self.n_particles();
        let v: Vec<f64> = z.iter().chain(q).copied().collect();
        let (v0, l) = self.pull_back(&v, t)?;
        Ok(self.ln_initial(&v0[n..], &v0[..n]) + l)
    }

    pub fn eval(&self, q: &[f64], z: &[f64], t: f64) -> Result<f64> {
        self.ln_eval(q, z, t).map(f64::exp)
    }
}

/// `v(0)` for `dv/ds = M v / 2m` with `v(t) = v_end`, by fixed-step RK4 backwards.
pub fn integrate_characteristics(m: &DMatrix<f64>, mass: f64, v_end: &[f64], t: f64) -> Result<Vec<f64>> {
    positive("mass", mass)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("t must be >= 0, got {t}")));
    }
    if m.nrows() != m.ncols() || m.nrows() != v_end.len() {
        return Err(Error::InvalidParameter("generator and vector sizes disagree".into()));
    }
    // keep |M| h / 2m below 1e-3
    let rate = m.iter().fold(0.0_f64, |a, x| a.max(x.abs())) * m.nrows() as f64 / (2.0 * mass);
    let steps = ((rate * t / 1e-3).ceil() as usize).max(16);
    Ok(characteristics_rk4(m, mass, v_end, t, steps))
}

/// Same as [`integrate_characteristics`] with an explicit step count.
pub fn characteristics_rk4(m: &DMatrix<f64>, mass: f64, v_end: &[f64], t: f64, steps: usize) -> Vec<f64> {
    let n = v_end.len();
    let rhs = |_s: f64, y: &[f64], dy: &mut [f64]| {
        for i in 0..n {
            dy[i] = (0..n).map(|j| m[(i, j)] * y[j]).sum::<f64>() / (2.0 * mass);
        }
    };
    rk4(&rhs, v_end, t, 0.0, steps)
}

/// Second derivatives of `P~` at the origin, flattened over `v = (z.., q..)`.
fn hessian(kernel: &KernelEvaluator, t: f64, h: f64) -> Result<DMatrix<f64>> {
    let n = kernel.n_particles();
    let dim = 2 * n;
    // P~ - 1, kept small near the origin to avoid cancellation against 1
    let f = |v: &[f64]| -> Result<f64> { kernel.ln_eval(&v[n..], &v[..n], t).map(f64::exp_m1) };
    let mut hess = DMatrix::zeros(dim, dim);
    let mut v = vec![0.0; dim];
    let f0 = f(&v)?;
    for i in 0..dim {
        v[i] = h;
        let fp = f(&v)?;
        v[i] = -h;
        let fm = f(&v)?;
        v[i] = 0.0;
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| -> Result<f64> {
                v[i] = si * h;
                v[j] = sj * h;
                let r = f(&v);
                v[i] = 0.0;
                v[j] = 0.0;
                r
            };
            let d = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?) / (4.0 * h * h);
            hess[(i, j)] = d;
            hess[(j, i)] = d;
        }
    }
    Ok(hess)
}

/// Covariance in `(x1, p1, x2, p2, ..)` order from `2 Re<X X> = -2 d_q d_q P~`,
/// `2 Re<X P> = d_q d_z P~` and `2 Re<P P> = -1/2 d_z d_z P~` at the origin.
pub fn numeric_covariance(kernel: &KernelEvaluator, t: f64) -> Result<CovarianceMatrix> {
    let coarse = hessian(kernel, t, FD_STEPS[0])?;
    let fine = hessian(kernel, t, FD_STEPS[1])?;
    let scale = fine.amax().max(f64::MIN_POSITIVE);
    for (c, f) in coarse.iter().zip(fine.iter()) {
        if (c - f).abs() > ROUGH_TOL * scale {
            return Err(Error::RoughKernel { coarse: *c, fine: *f });
        }
    }
    let hess = (&fine * 4.0 - &coarse) / 3.0;
    let n = kernel.n_particles();
    let (z, q) = (|i: usize| i, |i: usize| n + i);
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            g[(2 * i, 2 * j)] = -2.0 * hess[(q(i), q(j))];
            g[(2 * i, 2 * j + 1)] = hess[(q(i), z(j))];
            g[(2 * i + 1, 2 * j)] = hess[(z(i), q(j))];
            g[(2 * i + 1, 2 * j + 1)] = -0.5 * hess[(z(i), z(j))];
        }
    }
    CovarianceMatrix::new(g, kernel.hbar())
}
