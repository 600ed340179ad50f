//! A free particle in a thermal bath: the reduced density matrix loses purity and the
//! coherence length shrinks as the packet decoheres.

use nrw::single::{coherence_variance_single, evolve_single_free, single_density_kernel, BathParams, SingleKernel};

fn main() -> nrw::Result<()> {
    let bath = BathParams::unit(1.0, 10.0)?;
    let s = 1.0;
    println!("{:>6} {:>14} {:>14} {:>14}", "t", "a~", "entropy", "coherence");
    for i in 0..=10 {
        let t = 0.2 * f64::from(i);
        let k = evolve_single_free(s, &bath, t)?;
        let entropy = single_density_kernel(&k)?.entropy()?;
        let coherence = coherence_variance_single(k.abc().1, bath.hbar())?;
        println!("{t:>6.2} {:>14.6e} {entropy:>14.6e} {coherence:>14.6e}", k.a_tilde);
    }
    Ok(())
}
