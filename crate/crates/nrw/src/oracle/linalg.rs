//! Dense linear algebra used as an independent check on the closed forms.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::SymplecticForm;

/// `exp(M s)` by Padé scaling and squaring.
pub fn matrix_exponential(m: &DMatrix<f64>, s: f64) -> DMatrix<f64> {
    (m * s).exp()
}

/// Symplectic eigenvalues from a general eigensolve of `-sigma G sigma G`, ascending.
/// The spectrum is doubly degenerate; each pair is averaged.
pub fn generic_symplectic_eigenvalues(g: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (r, c) = g.shape();
    if r != c || r % 2 != 0 || r == 0 {
        return Err(Error::InvalidParameter(format!(
            "expected an even square matrix, got {r}x{c}"
        )));
    }
    let sigma = SymplecticForm::new(r / 2)?.matrix();
    let k = -(&sigma * g * &sigma * g);
    let norm = g.amax();
    let ev = k.complex_eigenvalues();
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonConvergence("eigensolve of -sigma G sigma G failed".into()));
    }
    let mut vals = Vec::with_capacity(r);
    for z in ev.iter() {
        if z.im.abs() > 1e-9 * norm * norm {
            return Err(Error::ImaginaryResidue {
                quantity: "symplectic spectrum",
                real: z.re,
                imag: z.im,
            });
        }
        if z.re < -1e-9 * norm * norm {
            return Err(Error::NegativeSquare { value: z.re });
        }
        vals.push(z.re.max(0.0));
    }
    vals.sort_by(f64::total_cmp);
    Ok(vals.chunks(2).map(|p| (0.5 * (p[0] + p[1])).sqrt()).collect())
}
