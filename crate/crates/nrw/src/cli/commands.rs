//! What each subcommand computes, independent of argument parsing and I/O.

use rayon::prelude::*;

use crate::bipartite_free::{
    bipartite_free_coeffs, coherence_variance_pair, covariance_from_kernel, esd_time, pt_spectrum_free, EsdOutcome,
};
use crate::bipartite_harmonic::{
    bipartite_harmonic_coeffs, coherence_variance_bipartite, covariance_harmonic, esd_time_harmonic,
    pt_spectrum_harmonic, HarmonicSystem,
};
use crate::cli::config::{ConfigError, RunConfig, Scenario, Settings};
use crate::cli::table::{Cell, Table};
use crate::error::{Error, Result};
use crate::gaussian::GaussianPairState;
use crate::single::{
    coherence_variance_single, evolve_single_free, single_damping_regime, single_density_kernel,
    single_harmonic_coeffs, BathParams, SingleKernel,
};

pub const SINGLE_COLUMNS: &[&str] = &["t", "entropy", "coherence_variance", "damping_regime"];
pub const PAIR_COLUMNS: &[&str] = &[
    "t",
    "log_negativity",
    "lambda_t_min",
    "coherence_variance",
    "damping_regime",
];

pub fn baths(cfg: &RunConfig) -> Result<(BathParams, BathParams)> {
    Ok((
        BathParams::new(cfg.gamma1, cfg.temp1, cfg.mass, cfg.hbar, cfg.k)?,
        BathParams::new(cfg.gamma2, cfg.temp2, cfg.mass, cfg.hbar, cfg.k)?,
    ))
}

pub fn pair_state(cfg: &RunConfig) -> Result<GaussianPairState> {
    GaussianPairState::new(cfg.s, cfg.d, cfg.hbar)
}

fn single_row(cfg: &RunConfig, bath: &BathParams, t: f64) -> Result<Vec<Cell>> {
    let (entropy, b) = if cfg.scenario == Scenario::SingleFree {
        let k = evolve_single_free(cfg.s, bath, t)?;
        (single_density_kernel(&k)?.entropy()?, k.abc().1)
    } else {
        let k = single_harmonic_coeffs(cfg.s, bath, cfg.omega0, t)?;
        (single_density_kernel(&k)?.entropy()?, k.abc().1)
    };
    let regime = single_damping_regime(bath, cfg.omega0)?;
    Ok(vec![
        t.into(),
        entropy.into(),
        coherence_variance_single(b, cfg.hbar)?.into(),
        regime.tag().into(),
    ])
}

fn pair_row(cfg: &RunConfig, state: &GaussianPairState, b1: &BathParams, b2: &BathParams, t: f64) -> Result<Vec<Cell>> {
    let (ln, lam, coh, regime) = if cfg.scenario == Scenario::BipartiteFree {
        let c = bipartite_free_coeffs(state, b1, b2, t)?;
        let g = covariance_from_kernel(&c)?;
        let lam = pt_spectrum_free(&g)?.lambda_minus;
        (
            g.log_negativity(cfg.convention)?,
            lam,
            coherence_variance_pair(c.b1, c.b2, c.d, cfg.hbar)?,
            "free",
        )
    } else {
        let c = bipartite_harmonic_coeffs(state, b1, cfg.omega0, t)?;
        let g = covariance_harmonic(&c)?;
        let lam = pt_spectrum_harmonic(&g)?.lambda_minus;
        let regime = HarmonicSystem::new(cfg.gamma1, cfg.omega0, cfg.mass)?.regime().tag();
        (
            g.log_negativity(cfg.convention)?,
            lam,
            coherence_variance_bipartite(c.b, c.d, cfg.hbar)?,
            regime,
        )
    };
    Ok(vec![t.into(), ln.into(), lam.into(), coh.into(), regime.into()])
}

/// One row per grid time: entropy for one particle, negativity for a pair.
pub fn time_series(cfg: &RunConfig) -> Result<Table> {
    let (b1, b2) = baths(cfg)?;
    let times = cfg.times();
    if cfg.scenario.is_single() {
        let mut table = Table::new(SINGLE_COLUMNS);
        for t in times {
            table.push(single_row(cfg, &b1, t)?);
        }
        Ok(table)
    } else {
        let state = pair_state(cfg)?;
        let mut table = Table::new(PAIR_COLUMNS);
        for t in times {
            table.push(pair_row(cfg, &state, &b1, &b2, t)?);
        }
        Ok(table)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("series {series}: {source}")]
    Numeric { series: String, source: Error },
}

/// Label of a sweep series, e.g. `s=0.25`.
pub fn series_label(vary: &str, value: f64) -> String {
    format!("{vary}={value}")
}

fn resolve_all(base: &Settings, vary: &str, values: &[f64]) -> std::result::Result<Vec<RunConfig>, ConfigError> {
    if values.is_empty() {
        return Err(ConfigError("values list is empty".into()));
    }
    values.iter().map(|&v| base.with_param(vary, v)?.resolve()).collect()
}

/// Long format: `series`, the varied parameter, then the `run` columns.
/// Series are computed on `threads` workers and written in input order.
pub fn sweep(
    base: &Settings,
    vary: &str,
    values: &[f64],
    threads: Option<usize>,
) -> std::result::Result<Table, SweepError> {
    let cfgs = resolve_all(base, vary, values)?;
    let work = || {
        cfgs.par_iter()
            .zip(values.par_iter())
            .map(|(cfg, &v)| {
                time_series(cfg).map_err(|source| SweepError::Numeric {
                    series: series_label(vary, v),
                    source,
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()
    };
    let tables = with_threads(threads, work)?;
    let inner = tables.first().map(|t| t.header.clone()).unwrap_or_default();
    let mut header = vec!["series".to_string(), vary.to_string()];
    header.extend(inner);
    let mut out = Table {
        header,
        rows: Vec::new(),
    };
    for (table, &v) in tables.into_iter().zip(values) {
        for row in table.rows {
            let mut full = vec![Cell::Text(series_label(vary, v)), Cell::Num(v)];
            full.extend(row);
            out.rows.push(full);
        }
    }
    Ok(out)
}

/// Runs `f` on a pool of at most `threads` workers, or the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// `NRW_NUM_THREADS`, when it holds a positive integer.
pub fn threads_from_env() -> std::result::Result<Option<usize>, ConfigError> {
    match std::env::var("NRW_NUM_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError(format!(
                "NRW_NUM_THREADS must be a positive integer, got '{v}'"
            ))),
        },
    }
}

/// Sudden-death search over `[0, t_max]` with `n_points` bracketing points.
/// `Err(NoBracket)` means the state starts separable.
pub fn esd(cfg: &RunConfig) -> std::result::Result<Result<EsdOutcome>, ConfigError> {
    esd_scenario(cfg)?;
    let run = || -> Result<EsdOutcome> {
        let (b1, b2) = baths(cfg)?;
        let state = pair_state(cfg)?;
        if cfg.scenario == Scenario::BipartiteFree {
            esd_time(&state, &b1, &b2, cfg.t_max, cfg.n_points)
        } else {
            esd_time_harmonic(&state, &b1, cfg.omega0, cfg.t_max, cfg.n_points)
        }
    };
    Ok(run())
}

fn esd_scenario(cfg: &RunConfig) -> std::result::Result<(), ConfigError> {
    if cfg.scenario.is_single() {
        return Err(ConfigError(format!(
            "esd needs a bipartite scenario, got {}",
            cfg.scenario
        )));
    }
    Ok(())
}

fn esd_cells(outcome: Result<EsdOutcome>) -> Result<[Cell; 2]> {
    match outcome {
        Ok(EsdOutcome::SuddenDeath(t)) => Ok([Cell::Num(t), "sudden-death".into()]),
        Ok(EsdOutcome::Entangled) => Ok([Cell::Empty, "entangled".into()]),
        Err(Error::NoBracket) => Ok([Cell::Empty, "separable".into()]),
        Err(e) => Err(e),
    }
}

/// `t_esd,status`, with `series` and the varied parameter in front when sweeping.
pub fn esd_table(
    base: &Settings,
    vary: Option<(&str, &[f64])>,
    threads: Option<usize>,
) -> std::result::Result<Table, SweepError> {
    match vary {
        None => {
            let cfg = base.resolve()?;
            let cells = esd_cells(esd(&cfg)?).map_err(|source| SweepError::Numeric {
                series: "run".into(),
                source,
            })?;
            let mut t = Table::new(&["t_esd", "status"]);
            t.push(cells.to_vec());
            Ok(t)
        }
        Some((name, values)) => {
            let cfgs = resolve_all(base, name, values)?;
            for cfg in &cfgs {
                esd_scenario(cfg)?;
            }
            let rows = with_threads(threads, || {
                cfgs.par_iter()
                    .zip(values.par_iter())
                    .map(|(cfg, &v)| {
                        let outcome = esd(cfg).expect("scenario checked above");
                        esd_cells(outcome)
                            .map(|c| (v, c))
                            .map_err(|source| SweepError::Numeric {
                                series: series_label(name, v),
                                source,
                            })
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()
            })?;
            let mut t = Table::new(&["series", name, "t_esd", "status"]);
            for (v, [a, b]) in rows {
                t.push(vec![Cell::Text(series_label(name, v)), Cell::Num(v), a, b]);
            }
            Ok(t)
        }
    }
}

/// Entanglement entropy of the initial pure pair.
pub fn entropy_initial(cfg: &RunConfig) -> Result<Table> {
    let state = pair_state(cfg)?;
    let spec = state.reduced_spectrum();
    let mut t = Table::new(&["s", "d", "ratio", "entropy"]);
    t.push(vec![
        cfg.s.into(),
        cfg.d.into(),
        spec.ratio().into(),
        spec.entropy().into(),
    ]);
    Ok(t)
}
