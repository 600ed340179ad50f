//! Nystrom discretisation of one-particle density kernels.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::gaussian::GaussianPairState;
use crate::oracle::quad::{hermite_nodes, legendre_nodes};

/// Top-eigenvalue shift on node doubling above which the grid is refused.
pub const DOUBLING_TOL: f64 = 1e-7;

const NODES_PER_PANEL: usize = 20;

/// Eigenvalues of `int k(x, y) phi(y) dy` on `[-radius, radius]`, descending.
pub fn nystrom_eigenvalues(k: &impl Fn(f64, f64) -> f64, radius: f64, n_nodes: usize) -> Vec<f64> {
    let panels = n_nodes.div_ceil(NODES_PER_PANEL).max(1);
    let nodes = legendre_nodes(NODES_PER_PANEL, -radius, radius, panels);
    let n = nodes.len();
    let sw: Vec<f64> = nodes.iter().map(|&(_, w)| w.sqrt()).collect();
    let a = DMatrix::from_fn(n, n, |i, j| sw[i] * k(nodes[i].0, nodes[j].0) * sw[j]);
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Leading `top` eigenvalues; the node count is doubled once and the top
/// eigenvalue must not move by more than [`DOUBLING_TOL`].
pub fn nystrom_spectrum(k: &impl Fn(f64, f64) -> f64, radius: f64, n_nodes: usize, top: usize) -> Result<Vec<f64>> {
    let coarse = nystrom_eigenvalues(k, radius, n_nodes);
    let fine = nystrom_eigenvalues(k, radius, 2 * n_nodes);
    let shift = (coarse[0] - fine[0]).abs();
    if shift > DOUBLING_TOL {
        return Err(Error::GridTooCoarse { shift });
    }
    Ok(fine.into_iter().take(top).collect())
}

/// `rho1(x, y) = int Psi(x, x2) Psi(y, x2) dx2`, by Gauss–Hermite in `x2`.
pub struct ReducedDensityQuadrature {
    state: GaussianPairState,
    nodes: Vec<(f64, f64)>,
}

impl ReducedDensityQuadrature {
    pub fn new(state: &GaussianPairState, n: usize) -> Self {
        Self {
            state: *state,
            nodes: hermite_nodes(n),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // the x2 profile of Psi(x, x2) Psi(y, x2) is Gaussian with curvature 2 kappa
        let (s, d) = (self.state.s(), self.state.d());
        let kappa = 1.0 / (4.0 * s * s) + 1.0 / (16.0 * d * d);
        let width = 1.0 / (2.0 * kappa).sqrt();
        let centre = (1.0 / (4.0 * s * s) - 1.0 / (16.0 * d * d)) / (2.0 * kappa) * (x + y);
        self.nodes
            .iter()
            .map(|&(u, w)| {
                let x2 = centre + width * u;
                w * (u * u).exp() * self.state.psi(x, x2) * self.state.psi(y, x2)
            })
            .sum::<f64>()
            * width
    }
}

/// Nystrom spectrum of the reduced state of the pair, on `+-6 max(s, 2d)`.
pub fn pair_reduced_spectrum(state: &GaussianPairState, n_nodes: usize, top: usize) -> Result<Vec<f64>> {
    let rho = ReducedDensityQuadrature::new(state, 64);
    let radius = 6.0 * state.s().max(2.0 * state.d());
    nystrom_spectrum(&|x, y| rho.eval(x, y), radius, n_nodes, top)
}
