//! Closed forms against the oracle for one configuration.

use nalgebra::DMatrix;

use crate::bipartite_free::{bipartite_free_coeffs, covariance_from_kernel};
use crate::bipartite_harmonic::{
    bipartite_harmonic_coeffs, covariance_harmonic, noise_integrals, propagator_f, HarmonicSystem,
};
use crate::cli::commands::{baths, pair_state};
use crate::cli::config::{RunConfig, Scenario};
use crate::cli::table::{Cell, Table};
use crate::error::Result;
use crate::oracle::kernel::{integrate_characteristics, numeric_covariance, KernelEvaluator};
use crate::oracle::noise::noise_quadrature;
use crate::oracle::nystrom::pair_reduced_spectrum;
use crate::single::{evolve_single_free, single_harmonic_coeffs, SingleKernel};

/// Coupling used by the propagator and noise checks when the scenario has none.
pub const REFERENCE_OMEGA0: f64 = 2.0;
/// Relative perturbation applied by the corruption hook.
pub const CORRUPTION: f64 = 1e-3;

const NYSTROM_NODES: usize = 200;
const NYSTROM_TOP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub check: &'static str,
    /// The worst-matching term.
    pub term: String,
    pub error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["check", "term", "error", "tolerance", "status"]);
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "fail" };
            t.push(vec![
                c.check.into(),
                Cell::Text(c.term.clone()),
                c.error.into(),
                c.tolerance.into(),
                status.into(),
            ]);
        }
        t
    }
}

/// Named closed-form values next to their oracle counterparts.
struct Terms(Vec<(String, f64, f64)>);

impl Terms {
    fn from_matrices(prefix: &str, closed: &DMatrix<f64>, oracle: &DMatrix<f64>) -> Self {
        let mut v = Vec::new();
        for i in 0..closed.nrows() {
            for j in 0..closed.ncols() {
                v.push((format!("{prefix}{}{}", i + 1, j + 1), closed[(i, j)], oracle[(i, j)]));
            }
        }
        Self(v)
    }

    fn scale(&self) -> f64 {
        self.0
            .iter()
            .map(|t| t.1.abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    fn corrupt(&mut self, name: Option<&str>) -> bool {
        let Some(name) = name else { return false };
        let scale = self.scale();
        match self.0.iter_mut().find(|t| t.0 == name) {
            Some(t) => {
                t.1 = if t.1 == 0.0 {
                    CORRUPTION * scale
                } else {
                    t.1 * (1.0 + CORRUPTION)
                };
                true
            }
            None => false,
        }
    }

    /// Largest `|closed - oracle|`, over the largest closed value when `relative`.
    fn worst(&self, check: &'static str, relative: bool, tolerance: f64) -> CheckResult {
        let scale = if relative { self.scale() } else { 1.0 };
        let (term, error) = self
            .0
            .iter()
            .map(|(n, a, b)| (n.clone(), (a - b).abs() / scale))
            .fold((String::new(), -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        CheckResult {
            check,
            term,
            error,
            tolerance,
        }
    }
}

/// Every term name the corruption hook accepts.
pub fn corruptible_terms() -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=4 {
        for j in 1..=4 {
            v.push(format!("f{i}{j}"));
            v.push(format!("g{i}{j}"));
        }
    }
    v.extend(["chi1", "theta1", "chi2", "theta2", "lambda1", "lambda2"].map(String::from));
    v.extend((0..NYSTROM_TOP).map(|n| format!("eig{n}")));
    v
}

fn covariance_terms(cfg: &RunConfig, t: f64) -> Result<Terms> {
    let (b1, b2) = baths(cfg)?;
    let (closed, oracle) = match cfg.scenario {
        Scenario::SingleFree | Scenario::SingleHarmonic => {
            let (a, b, c, _) = if cfg.scenario == Scenario::SingleFree {
                evolve_single_free(cfg.s, &b1, t)?.abc()
            } else {
                single_harmonic_coeffs(cfg.s, &b1, cfg.omega0, t)?.abc()
            };
            let closed = DMatrix::from_row_slice(2, 2, &[4.0 * a, -c, -c, b]);
            let ev = KernelEvaluator::single(cfg.s, &b1, cfg.omega0)?;
            (closed, numeric_covariance(&ev, t)?.matrix().clone())
        }
        Scenario::BipartiteFree => {
            let state = pair_state(cfg)?;
            let g = covariance_from_kernel(&bipartite_free_coeffs(&state, &b1, &b2, t)?)?;
            let ev = KernelEvaluator::pair_free(&state, &b1, &b2)?;
            (g.matrix().clone(), numeric_covariance(&ev, t)?.matrix().clone())
        }
        Scenario::BipartiteHarmonic => {
            let state = pair_state(cfg)?;
            let g = covariance_harmonic(&bipartite_harmonic_coeffs(&state, &b1, cfg.omega0, t)?)?;
            let ev = KernelEvaluator::pair_harmonic(&state, &b1, cfg.omega0)?;
            (g.matrix().clone(), numeric_covariance(&ev, t)?.matrix().clone())
        }
    };
    Ok(Terms::from_matrices("g", &closed, &oracle))
}

/// Runs the four checks at `t = t_max`. `corrupt` names one closed-form term to perturb.
pub fn validate(cfg: &RunConfig, tol: f64, corrupt: Option<&str>) -> Result<ValidationReport> {
    let t = cfg.t_max;
    let omega0 = if cfg.scenario == Scenario::BipartiteHarmonic {
        cfg.omega0
    } else {
        REFERENCE_OMEGA0
    };
    let (b1, _) = baths(cfg)?;
    let state = pair_state(cfg)?;
    let mut checks = Vec::new();

    // characteristics: columns of F(-t) against backward RK4 of the oracle generator
    let sys = HarmonicSystem::new(cfg.gamma1, omega0, cfg.mass)?;
    let f = propagator_f(&sys, -t)?.matrix();
    let closed = DMatrix::from_iterator(4, 4, f.iter().copied());
    let generator = KernelEvaluator::pair_harmonic(&state, &b1, omega0)?.generator().clone();
    let mut oracle = DMatrix::zeros(4, 4);
    for j in 0..4 {
        let mut e = [0.0; 4];
        e[j] = 1.0;
        let col = integrate_characteristics(&generator, cfg.mass, &e, t)?;
        for i in 0..4 {
            oracle[(i, j)] = col[i];
        }
    }
    let mut terms = Terms::from_matrices("f", &closed, &oracle);
    terms.corrupt(corrupt);
    checks.push(terms.worst("characteristics", true, tol));

    let mut terms = covariance_terms(cfg, t)?;
    terms.corrupt(corrupt);
    checks.push(terms.worst("covariance", true, tol));

    let n = noise_integrals(&sys, t)?;
    let q = noise_quadrature(cfg.gamma1, omega0, cfg.mass, t, 1e-10)?;
    let mut terms = Terms(vec![
        ("chi1".into(), n.chi1, q.chi1),
        ("theta1".into(), n.theta1, q.theta1),
        ("chi2".into(), n.chi2, q.chi2),
        ("theta2".into(), n.theta2, q.theta2),
        ("lambda1".into(), n.lambda1, q.lambda1),
        ("lambda2".into(), n.lambda2, q.lambda2),
    ]);
    terms.corrupt(corrupt);
    checks.push(terms.worst("noise-integrals", true, tol));

    let ladder = state.reduced_spectrum();
    let numeric = pair_reduced_spectrum(&state, NYSTROM_NODES, NYSTROM_TOP)?;
    let mut terms = Terms(
        numeric
            .iter()
            .enumerate()
            .map(|(k, &x)| (format!("eig{k}"), ladder.eigenvalue(k as u32), x))
            .collect(),
    );
    terms.corrupt(corrupt);
    checks.push(terms.worst("nystrom", false, tol));

    Ok(ValidationReport { checks })
}
