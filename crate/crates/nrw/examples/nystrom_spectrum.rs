//! Eigenvalues of the reduced one-particle density matrix from a Nystrom discretisation
//! of its kernel, next to the closed-form geometric ladder.

use nrw::gaussian::GaussianPairState;
use nrw::oracle::pair_reduced_spectrum;

fn main() -> nrw::Result<()> {
    let state = GaussianPairState::new(0.5, 2.0, 1.0)?;
    let ladder = state.reduced_spectrum();
    let numeric = pair_reduced_spectrum(&state, 200, 8)?;
    println!("{:>3} {:>22} {:>22} {:>10}", "n", "nystrom", "ladder", "diff");
    for (n, lam) in numeric.iter().enumerate() {
        let exact = ladder.eigenvalue(n as u32);
        println!("{n:>3} {lam:>22.15e} {exact:>22.15e} {:>10.1e}", lam - exact);
    }
    Ok(())
}
