//! The free-particle kernel next to the Savage-Walls Gaussian. With the width doubled
//! and the damping rate halved per unit mass the coefficients map onto each other
//! exactly: c = 2 a~, a = beta~ / 4 hbar^2, b = delta~ / 2 hbar.

use nrw::single::{evolve_single_free, savage_walls_coeffs, BathParams};

fn main() -> nrw::Result<()> {
    let bath = BathParams::unit(1.0, 10.0)?;
    let s = 1.0;
    let h = bath.hbar();
    println!("{:>5} {:>12} {:>12} {:>12}", "t", "c/2a~", "4h^2 a/b~", "2h b/d~");
    for t in [0.25, 0.5, 1.0, 2.0, 3.0] {
        let f = evolve_single_free(s, &bath, t)?;
        let sw = savage_walls_coeffs(2.0 * s * s, bath.gamma() / (2.0 * bath.mass()), &bath, t)?;
        println!(
            "{t:>5} {:>12.9} {:>12.9} {:>12.9}",
            sw.c / (2.0 * f.a_tilde),
            4.0 * h * h * sw.a / f.b_tilde,
            2.0 * h * sw.b / f.d_tilde
        );
    }
    Ok(())
}
