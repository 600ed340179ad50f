//! Symplectic linear algebra and entanglement measures for one- and two-mode
//! Gaussian states, plus the reduced-state spectrum of the initial pair state.
//!
//! Covariance matrices use the ordering `(x1, p1, x2, p2)` and the convention
//! `G_jk = 2 Re Tr[rho R_j R_k]`, so the vacuum of a unit oscillator has `G = hbar I`
//! and a physical state has every symplectic eigenvalue `>= hbar`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};

use crate::error::{positive, Error, Result};

/// Relative tolerance used for symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Symplectic eigenvalues within this relative distance below `hbar` count as `hbar`.
pub const HEISENBERG_TOL: f64 = 1e-12;

/// `min(1, x)` with values in `[1 - tol, 1]` snapped to 1.
fn heisenberg_min(x: f64, tol: f64) -> f64 {
    if x >= 1.0 - tol {
        1.0
    } else {
        x
    }
}

/// Block-diagonal `[[0,1],[-1,0]]` form on `n_modes` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n_modes: usize,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidParameter("n_modes must be positive".into()));
        }
        Ok(Self { n_modes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = 2 * self.n_modes;
        let mut s = DMatrix::zeros(n, n);
        for k in 0..self.n_modes {
            s[(2 * k, 2 * k + 1)] = 1.0;
            s[(2 * k + 1, 2 * k)] = -1.0;
        }
        s
    }
}

/// Which normalisation of the logarithmic negativity to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegativityConvention {
    /// `-sum log2 min(1, nu/hbar)` over symplectic eigenvalues of the partial transpose.
    #[default]
    Standard,
    /// `-2 sum log2 min(1, |lambda|/hbar^2)` over eigenvalues of `-sigma G^T sigma G^T`.
    /// Always four times the standard value.
    Paper,
}

impl FromStr for NegativityConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Ok(Self::Standard),
            "paper" => Ok(Self::Paper),
            other => Err(Error::InvalidParameter(format!(
                "unknown negativity convention '{other}' (expected standard or paper)"
            ))),
        }
    }
}

impl fmt::Display for NegativityConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Standard => "standard",
            Self::Paper => "paper",
        })
    }
}

/// Real symmetric `2N x 2N` second-moment matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    entries: DMatrix<f64>,
    hbar: f64,
}

impl CovarianceMatrix {
    /// Validates shape and symmetry (to `1e-12` relative) and symmetrises exactly.
    pub fn new(entries: DMatrix<f64>, hbar: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        let (r, c) = entries.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "covariance matrix must be square with even dimension, got {r}x{c}"
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "covariance matrix has non-finite entries".into(),
            ));
        }
        let scale = entries.amax().max(f64::MIN_POSITIVE);
        let asym = (&entries - entries.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidParameter(format!(
                "covariance matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        let entries = (&entries + entries.transpose()) * 0.5;
        Ok(Self {
            n_modes: r / 2,
            entries,
            hbar,
        })
    }

    pub fn from_row_slice(n_modes: usize, data: &[f64], hbar: f64) -> Result<Self> {
        let n = 2 * n_modes;
        if data.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries for {n_modes} modes, got {}",
                n * n,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, n, data), hbar)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    fn block(&self, a: usize, b: usize) -> Matrix2<f64> {
        let e = &self.entries;
        Matrix2::new(
            e[(2 * a, 2 * b)],
            e[(2 * a, 2 * b + 1)],
            e[(2 * a + 1, 2 * b)],
            e[(2 * a + 1, 2 * b + 1)],
        )
    }

    /// Squared symplectic eigenvalues (eigenvalues of `-sigma G sigma G`, each counted once),
    /// ascending. Closed form for one and two modes.
    pub fn symplectic_spectrum_squared(&self) -> Result<Vec<f64>> {
        let norm = self.entries.amax();
        match self.n_modes {
            1 => {
                let d = self.block(0, 0).determinant();
                check_square(d, norm)?;
                Ok(vec![d.max(0.0)])
            }
            2 => {
                if let Some(sq) = self.williamson_squared() {
                    return Ok(sq);
                }
                let a = self.block(0, 0).determinant();
                let b = self.block(1, 1).determinant();
                let c = self.block(0, 1).determinant();
                let det = self.entries.determinant();
                let delta = a + b + 2.0 * c;
                let mut disc = delta * delta - 4.0 * det;
                if disc < 0.0 {
                    if disc < -1e-9 * delta * delta {
                        return Err(Error::ComplexSpectrum { discriminant: disc });
                    }
                    disc = 0.0;
                }
                let big = 0.5 * (delta + disc.sqrt());
                check_square(big, norm)?;
                // the product of the two roots is det G; dividing avoids cancellation
                let small = if big > 0.0 { det / big } else { 0.0 };
                check_square(small, norm)?;
                Ok(vec![small.max(0.0), big.max(0.0)])
            }
            n => Err(Error::DomainError(format!(
                "closed-form symplectic spectrum supports 1 or 2 modes, got {n}"
            ))),
        }
    }

    /// Squared symplectic eigenvalues from the singular values of `L^T sigma L`, where
    /// `G = L L^T`. Unlike the quadratic formula this keeps full precision when the two
    /// eigenvalues coincide. `None` when `G` is not positive definite.
    fn williamson_squared(&self) -> Option<Vec<f64>> {
        let l = self.entries.clone().cholesky()?.unpack();
        let sigma = SymplecticForm { n_modes: self.n_modes }.matrix();
        let mut sv: Vec<f64> = (l.transpose() * sigma * &l).singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        Some(sv.chunks(2).map(|p| (0.5 * (p[0] + p[1])).powi(2)).collect())
    }

    /// Symplectic eigenvalues, ascending.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.symplectic_spectrum_squared()?.into_iter().map(f64::sqrt).collect())
    }

    /// Flip the sign of the momentum of `party`.
    pub fn partial_transpose(&self, party: usize) -> Result<Self> {
        if party >= self.n_modes {
            return Err(Error::InvalidParameter(format!(
                "party {party} out of range for {} modes",
                self.n_modes
            )));
        }
        let p = 2 * party + 1;
        let mut e = self.entries.clone();
        for k in 0..e.nrows() {
            if k != p {
                e[(p, k)] = -e[(p, k)];
                e[(k, p)] = -e[(k, p)];
            }
        }
        Ok(Self {
            n_modes: self.n_modes,
            entries: e,
            hbar: self.hbar,
        })
    }

    /// Logarithmic negativity with respect to the first mode of a two-mode state.
    pub fn log_negativity(&self, convention: NegativityConvention) -> Result<f64> {
        if self.n_modes != 2 {
            return Err(Error::DomainError("log negativity needs a two-mode state".into()));
        }
        let sq = self.partial_transpose(0)?.symplectic_spectrum_squared()?;
        Ok(match convention {
            NegativityConvention::Standard => sq
                .iter()
                .map(|&l| -heisenberg_min(l.sqrt() / self.hbar, HEISENBERG_TOL).log2())
                .sum(),
            NegativityConvention::Paper => {
                let h2 = self.hbar * self.hbar;
                -2.0 * sq
                    .iter()
                    .map(|&l| heisenberg_min(l.abs() / h2, 2.0 * HEISENBERG_TOL).log2())
                    .sum::<f64>()
            }
        })
    }

    /// Smallest symplectic eigenvalue of the partial transpose.
    pub fn min_pt_symplectic_eigenvalue(&self) -> Result<f64> {
        Ok(self.partial_transpose(0)?.symplectic_eigenvalues()?[0])
    }

    /// Apply `G -> S G S^T`.
    pub fn transformed(&self, s: &DMatrix<f64>) -> Result<Self> {
        Self::new(s * &self.entries * s.transpose(), self.hbar)
    }
}

fn check_square(value: f64, norm: f64) -> Result<()> {
    if value < -1e-9 * norm * norm {
        Err(Error::NegativeSquare { value })
    } else {
        Ok(())
    }
}

pub fn symplectic_eigenvalues(cov: &CovarianceMatrix) -> Result<Vec<f64>> {
    cov.symplectic_eigenvalues()
}

pub fn partial_transpose(cov: &CovarianceMatrix, party: usize) -> Result<CovarianceMatrix> {
    cov.partial_transpose(party)
}

pub fn log_negativity(cov: &CovarianceMatrix, convention: NegativityConvention) -> Result<f64> {
    cov.log_negativity(convention)
}

/// Density-matrix spectrum `lambda_n = lambda0 r^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricSpectrum {
    lambda0: f64,
    ratio: f64,
}

impl GeometricSpectrum {
    /// Normalised spectrum, `lambda0 = 1 - ratio`.
    pub fn new(ratio: f64) -> Result<Self> {
        check_ratio(ratio)?;
        Ok(Self {
            lambda0: 1.0 - ratio,
            ratio,
        })
    }

    /// Spectrum with an independently computed ground eigenvalue.
    pub fn from_parts(lambda0: f64, ratio: f64) -> Result<Self> {
        check_ratio(ratio)?;
        if !(lambda0 > 0.0 && lambda0 <= 1.0 + 1e-12) {
            return Err(Error::DomainError(format!("lambda0 must lie in (0, 1], got {lambda0}")));
        }
        Ok(Self { lambda0, ratio })
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn eigenvalue(&self, n: u32) -> f64 {
        if n == 0 {
            self.lambda0
        } else {
            self.lambda0 * self.ratio.powi(n as i32)
        }
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> f64 {
        let r = self.ratio;
        if r == 0.0 {
            return 0.0;
        }
        -(-r).ln_1p() - r / (1.0 - r) * r.ln()
    }
}

fn check_ratio(ratio: f64) -> Result<()> {
    if !(0.0..1.0).contains(&ratio) {
        return Err(Error::DomainError(format!(
            "spectrum ratio must lie in [0, 1), got {ratio}"
        )));
    }
    Ok(())
}

pub fn entropy_from_geometric_spectrum(spec: &GeometricSpectrum) -> Result<f64> {
    check_ratio(spec.ratio)?;
    Ok(spec.entropy())
}

/// Pure two-particle state
/// `Psi = exp(-(x1-x2)^2/4s^2 - (x1+x2)^2/16d^2) / sqrt(2 pi s d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPairState {
    s: f64,
    d: f64,
    hbar: f64,
}

impl GaussianPairState {
    pub fn new(s: f64, d: f64, hbar: f64) -> Result<Self> {
        Ok(Self {
            s: positive("s", s)?,
            d: positive("d", d)?,
            hbar: positive("hbar", hbar)?,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `s = 2d`, where the state factorises.
    pub fn is_separable(&self) -> bool {
        (self.s - 2.0 * self.d).abs() <= 1e-14 * self.s.max(2.0 * self.d)
    }

    /// Wavefunction value.
    pub fn psi(&self, x1: f64, x2: f64) -> f64 {
        let (s, d) = (self.s, self.d);
        let rel = x1 - x2;
        let com = x1 + x2;
        (-(rel * rel) / (4.0 * s * s) - com * com / (16.0 * d * d)).exp() / (2.0 * PI * s * d).sqrt()
    }

    pub fn reduced_kernel(&self) -> ReducedKernel {
        ReducedKernel::new(self)
    }

    pub fn reduced_spectrum(&self) -> GeometricSpectrum {
        self.reduced_kernel().spectrum()
    }

    /// Entanglement entropy of the pure pair, in nats.
    pub fn entanglement_entropy(&self) -> f64 {
        self.reduced_spectrum().entropy()
    }
}

pub fn reduced_spectrum(state: &GaussianPairState) -> GeometricSpectrum {
    state.reduced_spectrum()
}

/// Reduced density matrix of particle 1,
/// `rho1(x, y) = Omega' exp(-varpi x^2 - varpi y^2 + nu x y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedKernel {
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub varpi: f64,
    pub nu: f64,
    pub varsigma: f64,
    pub omega: f64,
    pub omega_prime: f64,
}

impl ReducedKernel {
    fn new(state: &GaussianPairState) -> Self {
        let (s, d) = (state.s, state.d);
        let eps_plus = 1.0 / (4.0 * s * s) + 1.0 / (16.0 * d * d);
        let eps_minus = 1.0 / (4.0 * s * s) - 1.0 / (16.0 * d * d);
        let varpi = eps_plus - eps_minus * eps_minus / (2.0 * eps_plus);
        let nu = eps_minus * eps_minus / eps_plus;
        // eps+^2 - eps-^2 = 1/(16 s^2 d^2) exactly
        let varsigma = 1.0 / (4.0 * s * d);
        let omega = 1.0 / (2.0 * PI * s * d);
        let omega_prime = omega * (PI / (2.0 * eps_plus)).sqrt();
        Self {
            eps_plus,
            eps_minus,
            varpi,
            nu,
            varsigma,
            omega,
            omega_prime,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.omega_prime * (-self.varpi * (x * x + y * y) + self.nu * x * y).exp()
    }

    pub fn spectrum(&self) -> GeometricSpectrum {
        let denom = self.varpi + self.varsigma;
        let ratio = 0.5 * self.nu / denom;
        let lambda0 = self.omega_prime * (PI / denom).sqrt();
        GeometricSpectrum::from_parts(lambda0, ratio)
            .expect("reduced spectrum of a valid state lies in the unit interval")
    }
}
