//! The damped two-dimensional characteristic system shared by every scenario.
//!
//! A single damped mode obeys `d/dt (z, q) = M (z, q) / 2m` with
//! `M = [[2 gamma, 1], [-c, 0]]`. The free particle is `c = 0`, the single
//! oscillator is `c = 4 m omega`, and the two-particle problem splits into a sum
//! mode (`c = 0`) and a relative mode (`c = 8 m^2 omega0^2`).
//!
//! Writing `w = gamma^2 - c` and `tau = t/2m`,
//! `exp(M tau) = e^{gamma tau} [cosh(sqrt(w) tau) I + sinh(sqrt(w) tau)/sqrt(w) (M - gamma I)]`.
//! Both `cosh(sqrt(w) tau)` and `sinh(sqrt(w) tau)/sqrt(w)` are entire in `w`, so the
//! propagator needs no special handling at critical damping. The noise integrals are
//! divided differences in the eigenvalues; near `w = 0` they are evaluated as the mean
//! over a circle in the complex `w`-plane, which is exact for entire functions up to
//! aliasing of Taylor order 16.

use num_complex::Complex64;

use crate::error::{positive, Error, Result};

/// Relative tolerance on imaginary parts left over by complex evaluation.
pub const RESIDUE_TOL: f64 = 1e-9;

const CONTOUR_NODES: usize = 16;
const CONTOUR_SWITCH: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingRegime {
    Free,
    OverDamped,
    Critical,
    UnderDamped,
}

impl DampingRegime {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Free => "free",
            Self::OverDamped => "over-damped",
            Self::Critical => "critical",
            Self::UnderDamped => "under-damped",
        }
    }
}

/// Entries of `exp(M t/2m)`: `[[a, b], [cq, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePropagator {
    pub a: f64,
    pub b: f64,
    pub cq: f64,
    pub d: f64,
}

/// `int_0^t a^2`, `int_0^t b^2`, `int_0^t a b` for the propagator entries above.
/// Negative `t` gives the signed integral.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeNoise {
    pub aa: f64,
    pub bb: f64,
    pub ab: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedMode {
    gamma: f64,
    c: f64,
    mass: f64,
}

impl DampedMode {
    pub fn new(gamma: f64, c: f64, mass: f64) -> Result<Self> {
        positive("gamma", gamma)?;
        positive("mass", mass)?;
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "restoring constant must be >= 0, got {c}"
            )));
        }
        Ok(Self { gamma, c, mass })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `gamma^2 - c`; its sign decides the damping regime.
    pub fn discriminant(&self) -> f64 {
        self.gamma * self.gamma - self.c
    }

    pub fn regime(&self) -> DampingRegime {
        let w = self.discriminant();
        if self.c == 0.0 {
            DampingRegime::Free
        } else if w.abs() <= 1e-12 * self.gamma * self.gamma {
            DampingRegime::Critical
        } else if w > 0.0 {
            DampingRegime::OverDamped
        } else {
            DampingRegime::UnderDamped
        }
    }

    /// `gamma +- sqrt(gamma^2 - c)`.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        let k = Complex64::new(self.discriminant(), 0.0).sqrt();
        (self.gamma + k, self.gamma - k)
    }

    pub fn propagator(&self, t: f64) -> Result<ModePropagator> {
        let tau = t / (2.0 * self.mass);
        let w = Complex64::new(self.discriminant(), 0.0);
        let (ch, sh) = cosh_sinhc(w, tau);
        let e = (self.gamma * tau).exp();
        let scale = e * (ch.norm() + self.gamma * sh.norm());
        let a = realize("propagator a", e * (ch + self.gamma * sh), scale)?;
        let b = realize("propagator b", e * sh, e * sh.norm())?;
        let d = realize("propagator d", e * (ch - self.gamma * sh), scale)?;
        Ok(ModePropagator {
            a,
            b,
            cq: -self.c * b,
            d,
        })
    }

    pub fn noise(&self, t: f64) -> Result<ModeNoise> {
        if t == 0.0 {
            return Ok(ModeNoise::default());
        }
        let tau = t / (2.0 * self.mass);
        let w0 = self.discriminant();
        let (vals, scale) = if w0.abs() * tau * tau < CONTOUR_SWITCH {
            let r = 1.0 / (tau * tau);
            let mut acc = [Complex64::new(0.0, 0.0); 3];
            let mut sc = [0.0_f64; 3];
            for k in 0..CONTOUR_NODES {
                let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / CONTOUR_NODES as f64;
                let w = w0 + r * Complex64::from_polar(1.0, th);
                let (v, s) = noise_at(self.gamma, w, t, self.mass);
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x;
                }
                for (a, x) in sc.iter_mut().zip(s) {
                    *a = a.max(x);
                }
            }
            let n = CONTOUR_NODES as f64;
            ([acc[0] / n, acc[1] / n, acc[2] / n], sc)
        } else {
            noise_at(self.gamma, Complex64::new(w0, 0.0), t, self.mass)
        };
        Ok(ModeNoise {
            aa: realize("noise integral aa", vals[0], scale[0])?,
            bb: realize("noise integral bb", vals[1], scale[1])?,
            ab: realize("noise integral ab", vals[2], scale[2])?,
        })
    }
}

fn realize(quantity: &'static str, z: Complex64, scale: f64) -> Result<f64> {
    let tol = RESIDUE_TOL * scale.max(z.re.abs());
    if z.im.abs() > tol {
        return Err(Error::ImaginaryResidue {
            quantity,
            real: z.re,
            imag: z.im,
        });
    }
    Ok(z.re)
}

/// `cosh(sqrt(w) tau)` and `sinh(sqrt(w) tau)/sqrt(w)`.
fn cosh_sinhc(w: Complex64, tau: f64) -> (Complex64, Complex64) {
    let x = w * tau * tau;
    if x.norm() < 1.0 {
        let mut ch = Complex64::new(0.0, 0.0);
        let mut sh = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 0..40u32 {
            ch += term;
            let kk = f64::from(k);
            let next = term / (2.0 * kk + 1.0);
            sh += next;
            term = next * x / (2.0 * kk + 2.0);
            if term.norm() < 1e-18 * ch.norm() {
                break;
            }
        }
        (ch, sh * tau)
    } else {
        let k = w.sqrt();
        let kt = k * tau;
        (kt.cosh(), kt.sinh() / k)
    }
}

/// `(e^x - 1)/x`.
fn phi1(x: Complex64) -> Complex64 {
    if x.norm() < 0.5 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..30u32 {
            sum += term;
            term = term * x / f64::from(k + 1);
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (x.exp() - 1.0) / x
    }
}

fn noise_at(gamma: f64, w: Complex64, t: f64, m: f64) -> ([Complex64; 3], [f64; 3]) {
    let k = w.sqrt();
    let lp = gamma + k;
    let lm = gamma - k;
    let c = gamma * gamma - w;
    let f = |l: Complex64| t * phi1(l * t / m);
    let (fp, fm, fg) = (f(lp), f(lm), f(Complex64::new(gamma, 0.0)));
    let inv = 1.0 / (4.0 * w);
    let aa_terms = [lp * lp * fp, lm * lm * fm, 2.0 * c * fg];
    let bb_terms = [fp, fm, 2.0 * fg];
    let ab_terms = [lp * fp, lm * fm, 2.0 * gamma * fg];
    let mag = |ts: &[Complex64; 3]| ts.iter().map(|z| z.norm()).sum::<f64>() * inv.norm();
    let scale = [mag(&aa_terms), mag(&bb_terms), mag(&ab_terms)];
    (
        [
            (aa_terms[0] + aa_terms[1] - aa_terms[2]) * inv,
            (bb_terms[0] + bb_terms[1] - bb_terms[2]) * inv,
            (ab_terms[0] + ab_terms[1] - ab_terms[2]) * inv,
        ],
        scale,
    )
}
