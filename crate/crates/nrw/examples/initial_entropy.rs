//! Entanglement entropy of the initial two-particle Gaussian as the bound-state width
//! `s` is scanned against a fixed centre-of-mass width `d`. Vanishes at `s = 2d`.

use nrw::gaussian::GaussianPairState;

fn main() -> nrw::Result<()> {
    let d = 2.0;
    println!("{:>6} {:>10} {:>14}", "s", "ratio r", "S (nats)");
    for s in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0] {
        let state = GaussianPairState::new(s, d, 1.0)?;
        let spec = state.reduced_spectrum();
        println!("{s:>6} {:>10.6} {:>14.10}", spec.ratio(), state.entanglement_entropy());
    }
    Ok(())
}
