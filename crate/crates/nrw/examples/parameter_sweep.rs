//! Sweeps `s` in parallel through the library form of the `nrw sweep` command and
//! writes the long-format CSV to stdout.

use nrw::cli::{sweep, Scenario, Settings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = Settings {
        scenario: Some(Scenario::BipartiteFree),
        d: Some(2.0),
        tmax: Some(0.3),
        points: Some(7),
        ..Settings::default()
    };
    let table = sweep(&base, "s", &[0.25, 0.5, 1.0], Some(2))?;
    print!("{}", table.to_csv_string());
    Ok(())
}
