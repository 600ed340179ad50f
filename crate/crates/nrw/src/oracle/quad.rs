//! Quadrature helpers on top of `gauss-quad`.

use std::num::NonZeroUsize;

use gauss_quad::{GaussHermite, GaussLegendre};

use crate::error::{Error, Result};

fn degree(n: usize) -> NonZeroUsize {
    NonZeroUsize::new(n.max(1)).expect("degree is at least one")
}

/// Gauss–Legendre nodes and weights on `[a, b]`, split into `panels` equal panels.
pub fn legendre_nodes(n_per_panel: usize, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(degree(n_per_panel));
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(n_per_panel * panels);
    for p in 0..panels {
        let lo = a + width * p as f64;
        let (mid, half) = (lo + 0.5 * width, 0.5 * width);
        out.extend(
            rule.as_node_weight_pairs()
                .iter()
                .map(|&(x, w)| (mid + half * x, half * w)),
        );
    }
    out
}

/// Gauss–Hermite nodes and weights for the weight `exp(-x^2)`.
pub fn hermite_nodes(n: usize) -> Vec<(f64, f64)> {
    GaussHermite::new(degree(n)).as_node_weight_pairs().to_vec()
}

const LOW: usize = 10;
const HIGH: usize = 20;
const MAX_DEPTH: u32 = 48;

/// Adaptive Gauss–Legendre: each panel compares a 10- and a 20-point rule and is
/// bisected until they agree to `tol` times the larger of the panel magnitude and
/// its share of the whole-interval magnitude.
pub fn adaptive_quad(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let low = GaussLegendre::new(degree(LOW));
    let high = GaussLegendre::new(degree(HIGH));
    let span = (b - a).abs();
    if span == 0.0 {
        return Ok(0.0);
    }
    let global = high.integrate(a, b, |x| f(x).abs()).abs();
    let mut stack = vec![(a, b, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let coarse = low.integrate(lo, hi, &f);
        let fine = high.integrate(lo, hi, &f);
        let mag = high.integrate(lo, hi, |x| f(x).abs()).abs();
        let allowed = tol * mag.max(global * (hi - lo).abs() / span);
        if (fine - coarse).abs() <= allowed {
            total += fine;
        } else if depth >= MAX_DEPTH {
            return Err(Error::NonConvergence(format!(
                "adaptive quadrature stalled on [{lo:e}, {hi:e}]"
            )));
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    Ok(total)
}
