//! Two particles bound by a harmonic coupling in a common-temperature bath. In the
//! under-damped case at low temperature the negativity oscillates and settles at a
//! positive value; the state's own smallest symplectic eigenvalue is printed alongside
//! because the bath model stops being physical below kT = hbar omega0 / sqrt 2.

use nrw::bipartite_harmonic::{bipartite_harmonic_coeffs, covariance_harmonic, HarmonicSystem};
use nrw::gaussian::{GaussianPairState, NegativityConvention};
use nrw::single::BathParams;

fn main() -> nrw::Result<()> {
    let state = GaussianPairState::new(1.0, 2.0, 1.0)?;
    let omega0 = 2.0;
    for kt in [1.0, 10.0] {
        let bath = BathParams::unit(1.0, kt)?;
        let sys = HarmonicSystem::new(1.0, omega0, 1.0)?;
        println!("kT = {kt}, {}", sys.regime().tag());
        for t in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0] {
            let g = covariance_harmonic(&bipartite_harmonic_coeffs(&state, &bath, omega0, t)?)?;
            println!(
                "  t = {t:>5}: L = {:.6e}, nu_min/hbar = {:.6}",
                g.log_negativity(NegativityConvention::Standard)? + 0.0,
                g.symplectic_eigenvalues()?[0]
            );
        }
    }
    Ok(())
}
