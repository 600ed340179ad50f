//! Two free particles, each in its own bath. Logarithmic negativity decays to zero in
//! finite time; a colder second bath keeps the pair entangled a little longer.

use nrw::bipartite_free::{esd_time, log_negativity_free};
use nrw::gaussian::{GaussianPairState, NegativityConvention};
use nrw::single::BathParams;

fn main() -> nrw::Result<()> {
    let state = GaussianPairState::new(0.25, 2.0, 1.0)?;
    let hot = BathParams::unit(1.0, 10.0)?;
    let cold = BathParams::unit(1.0, 2.0)?;
    println!("{:>8} {:>14} {:>14}", "t", "L equal", "L cold 2nd");
    for i in 0..=12 {
        let t = 0.025 * f64::from(i);
        let a = log_negativity_free(&state, &hot, &hot, t, NegativityConvention::Standard)?;
        let b = log_negativity_free(&state, &hot, &cold, t, NegativityConvention::Standard)?;
        println!("{t:>8.3} {:>14.6e} {:>14.6e}", a + 0.0, b + 0.0);
    }
    for (name, b2) in [("equal baths", hot), ("colder second bath", cold)] {
        println!("{name}: t_esd = {:?}", esd_time(&state, &hot, &b2, 5.0, 2000)?.time());
    }
    Ok(())
}
