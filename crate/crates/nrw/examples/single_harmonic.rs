//! One damped oscillator in each damping regime. The entropy saturates instead of
//! growing without bound because the potential confines the packet.

use nrw::single::{single_damping_regime, single_density_kernel, single_harmonic_coeffs, BathParams};

fn main() -> nrw::Result<()> {
    let bath = BathParams::unit(1.0, 10.0)?;
    // gamma^2 = 4 m omega is the critical point
    for omega in [0.1, 0.25, 2.0] {
        println!("omega = {omega}: {}", single_damping_regime(&bath, omega)?.tag());
        for t in [0.5, 2.0, 8.0, 32.0] {
            let k = single_harmonic_coeffs(1.0, &bath, omega, t)?;
            println!("  t = {t:>5}: entropy {:.6}", single_density_kernel(&k)?.entropy()?);
        }
    }
    Ok(())
}
