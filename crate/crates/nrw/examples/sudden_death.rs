//! Entanglement sudden-death times: narrower bound states survive longer, and the
//! harmonic coupling moves the death time only slightly in the over-damped regime.

use nrw::bipartite_free::{esd_time, EsdOutcome};
use nrw::bipartite_harmonic::esd_time_harmonic;
use nrw::gaussian::GaussianPairState;
use nrw::single::BathParams;

fn show(outcome: nrw::Result<EsdOutcome>) -> String {
    match outcome {
        Ok(EsdOutcome::SuddenDeath(t)) => format!("{t:.10}"),
        Ok(EsdOutcome::Entangled) => "entangled at horizon".into(),
        Err(nrw::Error::NoBracket) => "separable".into(),
        Err(e) => format!("error: {e}"),
    }
}

fn main() -> nrw::Result<()> {
    let bath = BathParams::unit(1.0, 10.0)?;
    let over = BathParams::unit(3.0, 10.0)?;
    println!(
        "{:>6} {:>16} {:>16} {:>16}",
        "s", "free g=1", "free g=3", "harmonic g=3"
    );
    for s in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let state = GaussianPairState::new(s, 2.0, 1.0)?;
        println!(
            "{s:>6} {:>16} {:>16} {:>16}",
            show(esd_time(&state, &bath, &bath, 5.0, 2000)),
            show(esd_time(&state, &over, &over, 5.0, 2000)),
            show(esd_time_harmonic(&state, &over, 1.0, 5.0, 2000)),
        );
    }
    Ok(())
}
