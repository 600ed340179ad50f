//! Independent numerical re-derivation of the closed forms: ODE solves along
//! characteristics, quadrature, dense eigensolves and Nystrom discretisation.

pub mod kernel;
pub mod linalg;
pub mod noise;
pub mod nystrom;
pub mod ode;
pub mod quad;

pub use kernel::{integrate_characteristics, numeric_covariance, KernelEvaluator};
pub use linalg::{generic_symplectic_eigenvalues, matrix_exponential};
pub use noise::{noise_quadrature, NoiseQuadrature};
pub use nystrom::{nystrom_spectrum, pair_reduced_spectrum};
pub use ode::{OdeProblem, StepControl};
