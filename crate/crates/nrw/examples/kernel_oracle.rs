//! Evaluates the evolved characteristic function directly by pulling points back along
//! the characteristics, then takes its Hessian numerically to get the covariance.

use nrw::bipartite_free::{bipartite_free_coeffs, covariance_from_kernel};
use nrw::gaussian::GaussianPairState;
use nrw::oracle::{numeric_covariance, KernelEvaluator};
use nrw::single::BathParams;

fn main() -> nrw::Result<()> {
    let state = GaussianPairState::new(1.0, 2.0, 1.0)?;
    let b1 = BathParams::unit(1.0, 10.0)?;
    let b2 = BathParams::unit(0.5, 4.0)?;
    let kernel = KernelEvaluator::pair_free(&state, &b1, &b2)?;
    let t = 1.5;
    println!(
        "ln P~ at q = (0.3, -0.2), z = (0.1, 0.4): {:.12e}",
        kernel.ln_eval(&[0.3, -0.2], &[0.1, 0.4], t)?
    );
    let numeric = numeric_covariance(&kernel, t)?;
    let closed = covariance_from_kernel(&bipartite_free_coeffs(&state, &b1, &b2, t)?)?;
    println!("numeric covariance:{}", numeric.matrix());
    println!(
        "max deviation from closed form: {:.2e}",
        (numeric.matrix() - closed.matrix()).amax()
    );
    Ok(())
}
