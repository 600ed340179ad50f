//! Closed forms against the independent numerical route: characteristic ODEs,
//! finite-difference covariances of the integrated kernel, direct quadrature of the
//! noise integrands and a Nystrom discretisation of the reduced density matrix.

use nrw::cli::{validate, RunConfig, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for scenario in [Scenario::BipartiteFree, Scenario::BipartiteHarmonic] {
        let cfg = RunConfig {
            scenario,
            t_max: 2.0,
            temp1: 5.0,
            temp2: 5.0,
            omega0: if scenario.is_harmonic() { 2.0 } else { 0.0 },
            ..RunConfig::default()
        };
        let report = validate(&cfg, 1e-6, None)?;
        println!(
            "{scenario}: {}",
            if report.passed() { "all checks pass" } else { "MISMATCH" }
        );
        print!("{}", report.table().to_csv_string());
    }
    Ok(())
}
