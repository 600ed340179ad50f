use nalgebra::{DMatrix, Matrix4};
use nrw::bipartite_free::{bipartite_free_coeffs, covariance_from_kernel};
use nrw::bipartite_harmonic::{
    bipartite_harmonic_coeffs, covariance_harmonic, harmonic_matrix4, noise_integrals, propagator_f, HarmonicSystem,
};
use nrw::gaussian::{CovarianceMatrix, GaussianPairState};
use nrw::oracle::kernel::characteristics_rk4;
use nrw::oracle::noise::noise_quadrature;
use nrw::oracle::nystrom::nystrom_spectrum;
use nrw::oracle::ode::{OdeProblem, StepControl};
use nrw::oracle::*;
use nrw::single::{evolve_single_free, single_harmonic_coeffs, BathParams, SingleKernel};
use nrw::Error;

fn pair(s: f64, d: f64) -> GaussianPairState {
    GaussianPairState::new(s, d, 1.0).unwrap()
}

/// Largest entry difference over the largest entry of `b`.
fn mat_rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / b.amax()
}

fn dyn4(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

fn single_g<K: SingleKernel>(k: &K) -> DMatrix<f64> {
    let (a, b, c, _) = k.abc();
    DMatrix::from_row_slice(2, 2, &[4.0 * a, -c, -c, b])
}

#[test]
fn characteristics_at_zero_time_are_unchanged() {
    let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 0.0]);
    let v = integrate_characteristics(&m, 1.0, &[0.3, -0.7], 0.0).unwrap();
    assert_eq!(v, vec![0.3, -0.7]);
}

#[test]
fn free_characteristic_matches_closed_form() {
    let (g, mass) = (0.7, 1.3);
    let m = DMatrix::from_row_slice(2, 2, &[2.0 * g, 1.0, 0.0, 0.0]);
    for &t in &[0.1, 1.0, 3.0] {
        let (z, q) = (0.4, -1.1);
        let v = integrate_characteristics(&m, mass, &[z, q], t).unwrap();
        let e = (-g * t / mass).exp();
        let z0 = z * e - q / (2.0 * g) * (1.0 - e);
        assert!((v[0] - z0).abs() < 1e-10, "t={t}: {} vs {z0}", v[0]);
        assert!((v[1] - q).abs() < 1e-14);
    }
}

#[test]
fn harmonic_characteristics_match_propagator_at_negative_time() {
    for &(g, w0) in &[(1.0, 2.0), (3.0, 1.0), (0.3, 0.5)] {
        let sys = HarmonicSystem::new(g, w0, 1.0).unwrap();
        let m = dyn4(&sys.matrix());
        for &t in &[0.5, 2.0, 4.0] {
            let v_end = [0.3, -0.2, 0.9, 0.1];
            let v0 = integrate_characteristics(&m, 1.0, &v_end, t).unwrap();
            let f = dyn4(&propagator_f(&sys, -t).unwrap().matrix());
            let expect = f * DMatrix::from_column_slice(4, 1, &v_end);
            for i in 0..4 {
                assert!(
                    (v0[i] - expect[i]).abs() < 1e-8 * expect.amax().max(1.0),
                    "g={g} t={t} i={i}"
                );
            }
        }
    }
}

#[test]
fn rk4_is_fourth_order() {
    let sys = HarmonicSystem::new(1.0, 2.0, 1.0).unwrap();
    let m = dyn4(&sys.matrix());
    let v_end = [0.3, -0.2, 0.9, 0.1];
    let exact = integrate_characteristics(&m, 1.0, &v_end, 2.0).unwrap();
    let err = |n: usize| {
        let v = characteristics_rk4(&m, 1.0, &v_end, 2.0, n);
        v.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let order = (err(40) / err(80)).log2();
    assert!((order - 4.0).abs() < 0.15, "observed order {order}");
}

#[test]
fn adaptive_and_fixed_steps_agree() {
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    let adaptive = OdeProblem::new(rhs, vec![1.0, 0.0], 0.0, 3.0, StepControl::adaptive_default());
    let fixed = OdeProblem::new(rhs, vec![1.0, 0.0], 0.0, 3.0, StepControl::Fixed { steps: 2000 });
    assert_eq!(adaptive.dimension(), 2);
    let (a, f) = (adaptive.solve().unwrap(), fixed.solve().unwrap());
    assert!((a[0] - 3f64.cos()).abs() < 1e-9);
    assert!((f[0] - 3f64.cos()).abs() < 1e-11);
    let back = OdeProblem::new(rhs, a.clone(), 3.0, 0.0, StepControl::adaptive_default())
        .solve()
        .unwrap();
    assert!((back[0] - 1.0).abs() < 1e-9 && back[1].abs() < 1e-9);
}

#[test]
fn exponential_basics() {
    let zero = DMatrix::<f64>::zeros(3, 3);
    assert_eq!(matrix_exponential(&zero, 1.0), DMatrix::identity(3, 3));
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, -1.0, 2.0]));
    let e = matrix_exponential(&diag, 1.5);
    for (i, &d) in [0.5, -1.0, 2.0].iter().enumerate() {
        assert!((e[(i, i)] - (d * 1.5_f64).exp()).abs() < 1e-12 * e[(i, i)]);
    }
}

#[test]
fn exponential_inverts_and_matches_the_closed_propagator() {
    for &(g, w0) in &[(3.0, 1.0), (1.0, 2.0), (1.0, (1.0_f64 / 8.0).sqrt() * (1.0 + 1e-6))] {
        let sys = HarmonicSystem::new(g, w0, 1.0).unwrap();
        let m = dyn4(&sys.matrix());
        for &t in &[0.3, 1.0, 2.5] {
            let s = t / 2.0;
            let ep = matrix_exponential(&m, s);
            let em = matrix_exponential(&m, -s);
            assert!((&ep * &em - DMatrix::identity(4, 4)).amax() < 1e-10);
            let f = dyn4(&propagator_f(&sys, t).unwrap().matrix());
            assert!(mat_rel(&f, &ep) < 1e-8, "g={g} w0={w0} t={t}");
        }
    }
}

#[test]
fn exponential_matches_the_eigenbasis_form() {
    let eig = harmonic_matrix4(1.0, 2.0, 1.0).unwrap();
    let m = dyn4(&eig.matrix());
    let t = 1.2;
    let f = dyn4(&propagator_f(&eig.system, t).unwrap().matrix());
    assert!(mat_rel(&f, &matrix_exponential(&m, t / 2.0)) < 1e-9);
}

#[test]
fn kernel_is_normalised() {
    let b1 = BathParams::unit(0.8, 4.0).unwrap();
    let b2 = BathParams::unit(1.7, 12.0).unwrap();
    let free = KernelEvaluator::pair_free(&pair(1.0, 2.0), &b1, &b2).unwrap();
    let harm = KernelEvaluator::pair_harmonic(&pair(0.7, 1.5), &b1, 2.0).unwrap();
    let single = KernelEvaluator::single(1.3, &b1, 0.6).unwrap();
    for &t in &[0.0, 0.5, 3.0] {
        assert!((free.eval(&[0.0, 0.0], &[0.0, 0.0], t).unwrap() - 1.0).abs() < 1e-9);
        assert!((harm.eval(&[0.0, 0.0], &[0.0, 0.0], t).unwrap() - 1.0).abs() < 1e-9);
        assert!((single.eval(&[0.0], &[0.0], t).unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn initial_transform_is_gaussian() {
    // direct check of the quadrature transform against the Gaussian integral
    let ev = KernelEvaluator::single(1.5, &BathParams::unit(1.0, 1.0).unwrap(), 0.0).unwrap();
    for &(q, z) in &[(0.3, 0.1), (1.2, -0.4), (-2.0, 0.7)] {
        let exact = -z * z / (1.5 * 1.5) - q * q * 1.5 * 1.5 / 4.0;
        assert!((ev.ln_initial(&[q], &[z]) - exact).abs() < 1e-9);
    }
}

#[test]
fn single_covariance_matches_free_and_harmonic_forms() {
    let bath = BathParams::new(0.9, 3.0, 1.2, 1.0, 1.0).unwrap();
    for &t in &[0.0, 0.4, 2.0] {
        let ev = KernelEvaluator::single(1.1, &bath, 0.0).unwrap();
        let g = numeric_covariance(&ev, t).unwrap();
        let want = single_g(&evolve_single_free(1.1, &bath, t).unwrap());
        assert!(mat_rel(g.matrix(), &want) < 1e-6, "free t={t}");
        for &w in &[0.1, 0.5, 2.0] {
            let ev = KernelEvaluator::single(1.1, &bath, w).unwrap();
            let g = numeric_covariance(&ev, t).unwrap();
            let want = single_g(&single_harmonic_coeffs(1.1, &bath, w, t).unwrap());
            assert!(mat_rel(g.matrix(), &want) < 1e-6, "omega={w} t={t}");
        }
    }
}

#[test]
fn pair_covariance_matches_free_closed_form() {
    let state = pair(1.0, 2.0);
    let b1 = BathParams::unit(1.0, 10.0).unwrap();
    for &t in &[0.0, 0.5] {
        let g = numeric_covariance(&KernelEvaluator::pair_free(&state, &b1, &b1).unwrap(), t).unwrap();
        let want = covariance_from_kernel(&bipartite_free_coeffs(&state, &b1, &b1, t).unwrap()).unwrap();
        assert!(mat_rel(g.matrix(), want.matrix()) < 1e-6, "t={t}");
    }
}

#[test]
fn pair_covariance_matches_harmonic_closed_form() {
    let state = pair(1.0, 2.0);
    let bath = BathParams::unit(1.0, 10.0).unwrap();
    let g = numeric_covariance(&KernelEvaluator::pair_harmonic(&state, &bath, 2.0).unwrap(), 1.0).unwrap();
    let want = covariance_harmonic(&bipartite_harmonic_coeffs(&state, &bath, 2.0, 1.0).unwrap()).unwrap();
    assert!(mat_rel(g.matrix(), want.matrix()) < 1e-6);
}

#[test]
fn noise_quadrature_matches_closed_integrals() {
    for &(g, w0) in &[(3.0, 1.0), (1.0, 2.0), (0.2, 0.9)] {
        let sys = HarmonicSystem::new(g, w0, 1.0).unwrap();
        for &t in &[0.2, 1.0, 2.5] {
            let n = noise_integrals(&sys, t).unwrap();
            let q = noise_quadrature(g, w0, 1.0, t, 1e-10).unwrap();
            let pairs = [
                (n.chi1, q.chi1),
                (n.theta1, q.theta1),
                (n.chi2, q.chi2),
                (n.theta2, q.theta2),
                (n.lambda1, q.lambda1),
                (n.lambda2, q.lambda2),
            ];
            let scale = pairs.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
            for (i, (a, b)) in pairs.iter().enumerate() {
                assert!((a - b).abs() < 1e-8 * scale, "g={g} w0={w0} t={t} term {i}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn generic_symplectic_eigenvalues_of_pure_states_are_hbar() {
    let g = CovarianceMatrix::from_row_slice(1, &[2.0, 0.0, 0.0, 0.5], 1.0).unwrap();
    let nu = generic_symplectic_eigenvalues(g.matrix()).unwrap();
    assert!((nu[0] - 1.0).abs() < 1e-12);
    let state = pair(0.6, 2.5);
    let b = BathParams::unit(1.0, 1.0).unwrap();
    let g0 = covariance_from_kernel(&bipartite_free_coeffs(&state, &b, &b, 0.0).unwrap()).unwrap();
    for nu in generic_symplectic_eigenvalues(g0.matrix()).unwrap() {
        assert!((nu - 1.0).abs() < 1e-9);
    }
}

#[test]
fn nystrom_recovers_the_geometric_ladder() {
    for &(s, d) in &[(1.0, 2.0), (0.5, 2.0), (3.0, 2.0)] {
        let state = pair(s, d);
        let ladder = state.reduced_spectrum();
        let ev = pair_reduced_spectrum(&state, 200, 20).unwrap();
        for (n, lam) in ev.iter().enumerate() {
            assert!((lam - ladder.eigenvalue(n as u32)).abs() < 1e-7, "s={s} n={n}");
        }
        let all = nystrom::nystrom_eigenvalues(&|x, y| state.reduced_kernel().eval(x, y), 6.0 * s.max(2.0 * d), 400);
        assert!((all.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn nystrom_separable_point_is_pure() {
    let ev = pair_reduced_spectrum(&pair(4.0, 2.0), 200, 5).unwrap();
    assert!((ev[0] - 1.0).abs() < 1e-9);
    assert!(ev[1..].iter().all(|l| l.abs() < 1e-9));
}

#[test]
fn nystrom_flags_coarse_grids() {
    let k = |x: f64, y: f64| (-(x - y) * (x - y) * 400.0 - 0.1 * (x * x + y * y)).exp();
    assert!(matches!(
        nystrom_spectrum(&k, 20.0, 20, 3),
        Err(Error::GridTooCoarse { .. })
    ));
}
