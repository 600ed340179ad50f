use nalgebra::{DMatrix, Matrix4};
use nrw::bipartite_free::{bipartite_free_coeffs, covariance_from_kernel, initial_kernel};
use nrw::bipartite_harmonic::*;
use nrw::gaussian::{GaussianPairState, NegativityConvention};
use nrw::mode::DampingRegime;
use nrw::single::BathParams;
use nrw::Error;

fn pair(s: f64, d: f64) -> GaussianPairState {
    GaussianPairState::new(s, d, 1.0).unwrap()
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale
}

#[test]
fn eigenvalues_for_reference_parameters() {
    let od = HarmonicSystem::new(3.0, 1.0, 1.0).unwrap();
    let ev = od.eigenvalues();
    assert!((ev[2].re - 4.0).abs() < 1e-14 && (ev[3].re - 2.0).abs() < 1e-14);
    assert_eq!(od.regime(), DampingRegime::OverDamped);
    let ud = HarmonicSystem::new(1.0, 1.0, 1.0).unwrap();
    let ev = ud.eigenvalues();
    assert!((ev[2].im - 7f64.sqrt()).abs() < 1e-14 && (ev[3].im + 7f64.sqrt()).abs() < 1e-14);
    assert_eq!(ud.regime(), DampingRegime::UnderDamped);
}

#[test]
fn eigenbasis_reconstructs_the_matrix() {
    for &(g, w) in &[(3.0, 1.0), (1.0, 1.0), (0.2, 0.05)] {
        let eig = harmonic_matrix4(g, w, 1.0).unwrap();
        let m = eig.matrix();
        let r = eig.reconstruct();
        for i in 0..4 {
            for j in 0..4 {
                assert!((r[(i, j)].re - m[(i, j)]).abs() < 1e-10, "{g} {w}");
                assert!(r[(i, j)].im.abs() < 1e-10);
            }
        }
        let id = eig.q * eig.q_inv;
        assert!((id - Matrix4::identity().map(|x: f64| x.into())).norm() < 1e-12);
    }
}

#[test]
fn eigenbasis_refuses_critical_and_uncoupled_cases() {
    let w = (1.0f64 / 8.0).sqrt();
    assert!(matches!(
        harmonic_matrix4(1.0, w, 1.0),
        Err(Error::CriticalDamping { .. })
    ));
    assert!(matches!(harmonic_matrix4(1.0, 0.0, 1.0), Err(Error::DomainError(_))));
}

#[test]
fn propagator_is_identity_at_zero_and_inverts() {
    let sys = HarmonicSystem::new(1.0, 2.0, 1.3).unwrap();
    let f0 = propagator_f(&sys, 0.0).unwrap();
    assert_eq!(f0.matrix(), Matrix4::identity());
    for &t in &[0.3, 1.0, 3.0] {
        let p = propagator_f(&sys, t).unwrap().matrix() * propagator_f(&sys, -t).unwrap().matrix();
        assert!((p - Matrix4::identity()).amax() < 1e-9, "t = {t}");
    }
}

#[test]
fn propagator_has_particle_swap_structure() {
    let sys = HarmonicSystem::new(0.7, 0.9, 1.0).unwrap();
    let f = propagator_f(&sys, 1.7).unwrap().matrix();
    let swap = Matrix4::new(0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.);
    assert!((swap * f * swap - f).amax() < 1e-15);
}

#[test]
fn noise_vanishes_at_zero_with_flat_start() {
    let sys = HarmonicSystem::new(1.0, 2.0, 1.0).unwrap();
    let n = noise_integrals(&sys, 0.0).unwrap();
    assert_eq!([n.chi1, n.theta1, n.chi2, n.theta2, n.lambda1, n.lambda2], [0.0; 6]);
    // d chi2/dt = delta_+^2 + delta_-^2 vanishes at t = 0
    let h = 1e-5;
    let d = (noise_integrals(&sys, h).unwrap().chi2 - noise_integrals(&sys, -h).unwrap().chi2) / (2.0 * h);
    assert!(d.abs() < 1e-8);
    // d chi1/dt = alpha_+^2 + alpha_-^2 = 1 at t = 0
    let d = (noise_integrals(&sys, h).unwrap().chi1 - noise_integrals(&sys, -h).unwrap().chi1) / (2.0 * h);
    assert!((d - 1.0).abs() < 1e-8);
}

fn noise_form(n: &HarmonicNoiseIntegrals) -> DMatrix<f64> {
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        n.chi1,          n.theta1 / 2.0,  n.lambda1 / 2.0, n.lambda2 / 2.0,
        n.theta1 / 2.0,  n.chi1,          n.lambda2 / 2.0, n.lambda1 / 2.0,
        n.lambda1 / 2.0, n.lambda2 / 2.0, n.chi2,          n.theta2 / 2.0,
        n.lambda2 / 2.0, n.lambda1 / 2.0, n.theta2 / 2.0,  n.chi2,
    ]);
    m
}

fn initial_form(st: &GaussianPairState) -> DMatrix<f64> {
    let k = initial_kernel(st);
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        k.b0,       k.d0 / 2.0, 0.0,        0.0,
        k.d0 / 2.0, k.b0,       0.0,        0.0,
        0.0,        0.0,        k.a0,       k.e0 / 2.0,
        0.0,        0.0,        k.e0 / 2.0, k.a0,
    ]);
    m
}

fn pulled_back(st: &GaussianPairState, bath: &BathParams, w0: f64, t: f64) -> DMatrix<f64> {
    let sys = HarmonicSystem::new(bath.gamma(), w0, bath.mass()).unwrap();
    let f = propagator_f(&sys, -t).unwrap().matrix();
    let f = DMatrix::from_iterator(4, 4, f.iter().copied());
    let gk = 4.0 * bath.gamma() * bath.kt();
    let inner = initial_form(st) + noise_form(&noise_integrals(&sys, t).unwrap()) * gk;
    f.transpose() * inner * f
}

#[test]
fn corrected_grouping_equals_matrix_pull_back() {
    let st = pair(1.0, 2.0);
    for &(g, w0, kt) in &[(3.0, 1.0, 10.0), (1.0, 2.0, 1.0), (0.5, 0.3, 4.0)] {
        let bath = BathParams::unit(g, kt).unwrap();
        for &t in &[0.1, 0.8, 2.0] {
            let want = pulled_back(&st, &bath, w0, t);
            for c in [
                bipartite_harmonic_coeffs(&st, &bath, w0, t).unwrap(),
                bipartite_harmonic_coeffs_forward(&st, &bath, w0, t, Grouping::Corrected).unwrap(),
            ] {
                let got = kernel_matrix_harmonic(&c);
                let scale = want.amax();
                assert!(
                    (&got - &want).amax() < 1e-9 * scale,
                    "g={g} w0={w0} t={t}\n{got}\n{want}"
                );
            }
        }
    }
}

#[test]
fn printed_grouping_departs_in_the_identified_terms() {
    // the printed grouping matches only where the factors it drops multiply zero
    let st = pair(1.0, 2.0);
    let bath = BathParams::unit(1.0, 1.0).unwrap();
    let t = 0.8;
    let good = bipartite_harmonic_coeffs_forward(&st, &bath, 2.0, t, Grouping::Corrected).unwrap();
    let printed = bipartite_harmonic_coeffs_forward(&st, &bath, 2.0, t, Grouping::Printed).unwrap();
    for (name, x, y) in [
        ("A", good.a, printed.a),
        ("B", good.b, printed.b),
        ("C1", good.c1, printed.c1),
        ("C2", good.c2, printed.c2),
        ("D", good.d, printed.d),
        ("E", good.e, printed.e),
    ] {
        assert!((x - y).abs() > 1e-6 * x.abs().max(1.0), "{name} unexpectedly agrees");
    }
}

#[test]
fn zero_time_matches_free_pair() {
    let st = pair(1.0, 2.0);
    let bath = BathParams::unit(1.0, 10.0).unwrap();
    let h = bipartite_harmonic_coeffs(&st, &bath, 2.0, 0.0).unwrap();
    let f = bipartite_free_coeffs(&st, &bath, &bath, 0.0).unwrap();
    for (x, y) in [
        (h.a, f.a1),
        (h.b, f.b1),
        (h.d, f.d),
        (h.e, f.e),
        (h.c1, 0.0),
        (h.c2, 0.0),
    ] {
        assert!((x - y).abs() < 1e-10 * y.abs().max(1.0));
    }
}

#[test]
fn weak_coupling_approaches_free_pair() {
    let st = pair(1.0, 2.0);
    let bath = BathParams::unit(1.0, 10.0).unwrap();
    for &t in &[0.2, 1.0] {
        let h = bipartite_harmonic_coeffs(&st, &bath, 1e-6, t).unwrap();
        let f = bipartite_free_coeffs(&st, &bath, &bath, t).unwrap();
        for (x, y) in [
            (h.a, f.a1),
            (h.b, f.b1),
            (h.c1, f.c11),
            (h.c2, f.c12),
            (h.d, f.d),
            (h.e, f.e),
        ] {
            assert!(rel(x, y, y.abs().max(1.0)) < 1e-7, "t={t}: {x} vs {y}");
        }
    }
}

#[test]
fn smooth_through_critical_damping() {
    let st = pair(1.0, 2.0);
    let bath = BathParams::unit(1.0, 2.0).unwrap();
    let wc = (1.0f64 / 8.0).sqrt();
    let at = |w| bipartite_harmonic_coeffs(&st, &bath, w, 2.0).unwrap();
    let (lo, mid, hi) = (at(wc * (1.0 - 1e-6)), at(wc), at(wc * (1.0 + 1e-6)));
    for (x, y, z) in [
        (lo.a, mid.a, hi.a),
        (lo.b, mid.b, hi.b),
        (lo.c1, mid.c1, hi.c1),
        (lo.e, mid.e, hi.e),
    ] {
        assert!((x - y).abs() < 1e-5 * y.abs() && (z - y).abs() < 1e-5 * y.abs());
    }
}

#[test]
fn initial_state_is_pure_and_entangled() {
    let st = pair(1.0, 2.0);
    let bath = BathParams::unit(1.0, 10.0).unwrap();
    let g = covariance_harmonic(&bipartite_harmonic_coeffs(&st, &bath, 2.0, 0.0).unwrap()).unwrap();
    for nu in g.symplectic_eigenvalues().unwrap() {
        assert!((nu - 1.0).abs() < 1e-9);
    }
    let pt = pt_spectrum_harmonic(&g).unwrap();
    assert!(pt.lambda_plus >= 1.0 && pt.lambda_minus < 1.0);
}

#[test]
fn pt_closed_form_matches_generic_invariants() {
    let st = pair(0.8, 2.0);
    let bath = BathParams::unit(1.0, 3.0).unwrap();
    for &t in &[0.3, 1.2, 4.0] {
        let g = covariance_harmonic(&bipartite_harmonic_coeffs(&st, &bath, 1.5, t).unwrap()).unwrap();
        let pt = pt_spectrum_harmonic(&g).unwrap();
        let sq = g.partial_transpose(0).unwrap().symplectic_spectrum_squared().unwrap();
        assert!((pt.lambda_minus - sq[0]).abs() < 1e-8 * sq[1]);
        assert!((pt.lambda_plus - sq[1]).abs() < 1e-8 * sq[1]);
    }
}

#[test]
fn decoupled_form_gives_product_spectrum() {
    let st = pair(1.0, 2.0);
    let bath = BathParams::unit(1.0, 1.0).unwrap();
    let mut c = bipartite_harmonic_coeffs(&st, &bath, 1.0, 0.5).unwrap();
    c.c1 = 0.0;
    c.c2 = 0.0;
    c.d = 0.0;
    c.e = 0.0;
    let pt = pt_spectrum_harmonic(&covariance_harmonic(&c).unwrap()).unwrap();
    assert!((pt.lambda_plus - 4.0 * c.a * c.b).abs() < 1e-12);
    assert!((pt.lambda_minus - 4.0 * c.a * c.b).abs() < 1e-12);
}

#[test]
fn asymmetric_matrix_is_rejected_by_the_symmetric_formula() {
    let st = pair(1.0, 2.0);
    let c = bipartite_free_coeffs(
        &st,
        &BathParams::unit(1.0, 1.0).unwrap(),
        &BathParams::unit(2.0, 5.0).unwrap(),
        1.0,
    )
    .unwrap();
    let g = covariance_from_kernel(&c).unwrap();
    assert!(pt_spectrum_harmonic(&g).is_err());
}

#[test]
fn coherence_variance_value_and_symmetry() {
    assert!((coherence_variance_bipartite(1.0, 0.0, 1.0).unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-14);
    assert_eq!(
        coherence_variance_bipartite(1.3, 0.4, 1.0),
        coherence_variance_bipartite(1.3, -0.4, 1.0)
    );
    assert!(coherence_variance_bipartite(1.0, 2.0, 1.0).is_err());
}

#[test]
fn unequal_baths_are_rejected() {
    let a = BathParams::unit(1.0, 1.0).unwrap();
    let b = BathParams::unit(1.0, 2.0).unwrap();
    assert_eq!(shared_bath(&a, &b), Err(Error::UnequalBaths));
    assert_eq!(shared_bath(&a, &a), Ok(a));
}

#[test]
fn stable_route_survives_long_horizons() {
    let st = pair(1.0, 2.0);
    let bath = BathParams::unit(1.0, 1.0).unwrap();
    let c = bipartite_harmonic_coeffs(&st, &bath, 2.0, 50.0).unwrap();
    assert!(c.a.is_finite() && c.b.is_finite() && c.e.is_finite());
    let ln = log_negativity_harmonic(&st, &bath, 2.0, 50.0, NegativityConvention::Standard).unwrap();
    assert!(ln.is_finite());
}
