//! Small dense ODE integrators: classical RK4 and Dormand–Prince 5(4).

use crate::error::{Error, Result};

/// `rtol` and `atol` defaults for adaptive stepping.
pub const DEFAULT_RTOL: f64 = 1e-10;
pub const DEFAULT_ATOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum StepControl {
    /// `steps` equal RK4 steps.
    Fixed { steps: usize },
    /// Dormand–Prince with per-component absolute tolerance (one entry broadcasts).
    Adaptive { rtol: f64, atol: Vec<f64> },
}

impl StepControl {
    pub fn adaptive_default() -> Self {
        Self::Adaptive {
            rtol: DEFAULT_RTOL,
            atol: vec![DEFAULT_ATOL],
        }
    }
}

/// `dy/dt = f(t, y)` on `[t0, t1]`; `t1 < t0` integrates backwards.
pub struct OdeProblem<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub rhs: F,
    pub y0: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
    pub control: StepControl,
}

impl<F> OdeProblem<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, y0: Vec<f64>, t0: f64, t1: f64, control: StepControl) -> Self {
        Self {
            rhs,
            y0,
            t0,
            t1,
            control,
        }
    }

    pub fn dimension(&self) -> usize {
        self.y0.len()
    }

    /// State at `t1`.
    pub fn solve(&self) -> Result<Vec<f64>> {
        if self.t0 == self.t1 {
            return Ok(self.y0.clone());
        }
        match &self.control {
            StepControl::Fixed { steps } => Ok(rk4(&self.rhs, &self.y0, self.t0, self.t1, *steps)),
            StepControl::Adaptive { rtol, atol } => dopri5(&self.rhs, &self.y0, self.t0, self.t1, *rtol, atol),
        }
    }
}

pub fn rk4<F>(f: &F, y0: &[f64], t0: f64, t1: f64, steps: usize) -> Vec<f64>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for i in 0..steps {
        let t = t0 + h * i as f64;
        f(t, &y, &mut k1);
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * h * k1[j];
        }
        f(t + 0.5 * h, &tmp, &mut k2);
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * h * k2[j];
        }
        f(t + 0.5 * h, &tmp, &mut k3);
        for j in 0..n {
            tmp[j] = y[j] + h * k3[j];
        }
        f(t + h, &tmp, &mut k4);
        for j in 0..n {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub fn dopri5<F>(f: &F, y0: &[f64], t0: f64, t1: f64, rtol: f64, atol: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    if atol.len() != 1 && atol.len() != n {
        return Err(Error::InvalidParameter(format!(
            "atol has {} entries for a system of dimension {n}",
            atol.len()
        )));
    }
    let tol = |j: usize| if atol.len() == 1 { atol[0] } else { atol[j] };
    let span = t1 - t0;
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = span / 100.0;
    let h_min = 1e-14 * span.abs();
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    f(t, &y, &mut k[0]);
    for _ in 0..10_000_000u64 {
        if (t1 - t) * dir <= 0.0 {
            return Ok(y);
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            for j in 0..n {
                let mut acc = y[j];
                for (r, kr) in k.iter().enumerate().take(s) {
                    acc += h * A[s][r] * kr[j];
                }
                tmp[j] = acc;
            }
            f(t + C[s] * h, &tmp, &mut k[s]);
        }
        let mut err = 0.0_f64;
        for j in 0..n {
            let mut hi = y[j];
            let mut lo = y[j];
            for s in 0..7 {
                hi += h * B5[s] * k[s][j];
                lo += h * B4[s] * k[s][j];
            }
            y5[j] = hi;
            let sc = tol(j) + rtol * y[j].abs().max(hi.abs());
            err = err.max((hi - lo).abs() / sc);
        }
        if !err.is_finite() {
            err = 1e10;
        }
        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            // first-same-as-last: stage 7 is the derivative at the new point
            let last = k[6].clone();
            k[0] = last;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() < h_min {
            return Err(Error::StepFailure { t });
        }
    }
    Err(Error::StepFailure { t })
}
