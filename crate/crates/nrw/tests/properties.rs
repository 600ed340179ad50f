//! Randomised invariants of the closed forms.

use nalgebra::{DMatrix, Matrix4};
use proptest::prelude::*;

use nrw::bipartite_free::{bipartite_free_coeffs, covariance_from_kernel};
use nrw::bipartite_harmonic::{bipartite_harmonic_coeffs, covariance_harmonic, propagator_f, HarmonicSystem};
use nrw::cli::Cell;
use nrw::gaussian::{CovarianceMatrix, GaussianPairState, GeometricSpectrum, NegativityConvention};
use nrw::single::{evolve_single_free, single_harmonic_coeffs, BathParams, SingleKernel};

fn single_uncertainty(k: &impl SingleKernel) -> f64 {
    let (a, b, c, h) = k.abc();
    (4.0 * a * b - c * c) / (h * h)
}

fn free_cov(s: f64, d: f64, g1: f64, kt1: f64, g2: f64, kt2: f64, t: f64) -> CovarianceMatrix {
    let state = GaussianPairState::new(s, d, 1.0).unwrap();
    let b1 = BathParams::unit(g1, kt1).unwrap();
    let b2 = BathParams::unit(g2, kt2).unwrap();
    covariance_from_kernel(&bipartite_free_coeffs(&state, &b1, &b2, t).unwrap()).unwrap()
}

/// The bath equation only preserves positivity once the momentum spread does not exceed its
/// thermal value, so the physicality properties draw states whose momentum block has every
/// eigenvalue of `<p p^T>` below `m kT`.
fn momentum_within_thermal(g0: &CovarianceMatrix, kt: f64) -> bool {
    let (a, b, c) = (g0.get(1, 1), g0.get(3, 3), g0.get(1, 3));
    let top = 0.5 * (a + b) + (0.25 * (a - b).powi(2) + c * c).sqrt();
    top / 2.0 <= kt
}

fn harmonic_cov(s: f64, d: f64, g: f64, kt: f64, w0: f64, t: f64) -> CovarianceMatrix {
    let state = GaussianPairState::new(s, d, 1.0).unwrap();
    let bath = BathParams::unit(g, kt).unwrap();
    covariance_harmonic(&bipartite_harmonic_coeffs(&state, &bath, w0, t).unwrap()).unwrap()
}

/// Local squeeze and rotation on each mode.
fn local_symplectic(r1: f64, th1: f64, r2: f64, th2: f64) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(4, 4);
    for (k, (r, th)) in [(r1, th1), (r2, th2)].into_iter().enumerate() {
        let (c, sn) = (th.cos(), th.sin());
        let (e, ei) = (r.exp(), (-r).exp());
        let o = 2 * k;
        s[(o, o)] = c * e;
        s[(o, o + 1)] = -sn * e;
        s[(o + 1, o)] = sn * ei;
        s[(o + 1, o + 1)] = c * ei;
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn free_pair_stays_physical(s in 0.3..3.0f64, d in 0.3..3.0f64, g1 in 0.2..3.0f64, kt1 in 1.0..20.0f64,
                                g2 in 0.2..3.0f64, kt2 in 1.0..20.0f64, t in 0.0..5.0f64) {
        prop_assume!(momentum_within_thermal(&free_cov(s, d, g1, kt1, g2, kt2, 0.0), kt1.min(kt2)));
        let g = free_cov(s, d, g1, kt1, g2, kt2, t);
        let nu = g.symplectic_eigenvalues().unwrap();
        prop_assert!(nu[0] >= 1.0 - 1e-9, "nu_min = {}", nu[0]);
    }

    #[test]
    fn harmonic_pair_stays_physical(s in 0.3..3.0f64, d in 0.3..3.0f64, g in 0.2..3.0f64, kt in 1.0..20.0f64,
                                    w0 in 0.1..3.0f64, t in 0.0..10.0f64) {
        // the relative mode relaxes to nu = 2 kT / (sqrt(2) omega0), below hbar when colder
        prop_assume!(kt >= w0 / 2f64.sqrt());
        prop_assume!(momentum_within_thermal(&harmonic_cov(s, d, g, kt, w0, 0.0), kt));
        let nu = harmonic_cov(s, d, g, kt, w0, t).symplectic_eigenvalues().unwrap();
        prop_assert!(nu[0] >= 1.0 - 1e-9, "nu_min = {}", nu[0]);
    }

    #[test]
    fn single_particle_obeys_uncertainty(s in 0.2..4.0f64, g in 0.2..3.0f64, kt in 1.0..20.0f64,
                                         w in 0.0..3.0f64, t in 0.0..10.0f64) {
        // <p^2> = hbar^2 / 2 s^2 initially; the oscillator relaxes to nu = 2 kT / sqrt(omega)
        prop_assume!(0.5 / (s * s) <= kt && 2.0 * kt >= w.sqrt());
        let bath = BathParams::unit(g, kt).unwrap();
        prop_assert!(single_uncertainty(&evolve_single_free(s, &bath, t).unwrap()) >= 1.0 - 1e-9);
        prop_assert!(single_uncertainty(&single_harmonic_coeffs(s, &bath, w, t).unwrap()) >= 1.0 - 1e-9);
    }

    #[test]
    fn negativity_conventions_differ_by_four(s in 0.3..3.0f64, d in 0.3..3.0f64, g in 0.2..3.0f64,
                                             kt in 1.0..20.0f64, t in 0.0..0.5f64) {
        let cov = free_cov(s, d, g, kt, g, kt, t);
        let std = cov.log_negativity(NegativityConvention::Standard).unwrap();
        let paper = cov.log_negativity(NegativityConvention::Paper).unwrap();
        prop_assert!(std >= 0.0);
        prop_assert!((paper - 4.0 * std).abs() <= 1e-9 * (1.0 + paper.abs()), "{paper} vs 4 x {std}");
    }

    #[test]
    fn local_symplectic_maps_preserve_invariants(s in 0.3..3.0f64, d in 0.3..3.0f64, t in 0.0..2.0f64,
                                                 r1 in -1.0..1.0f64, th1 in 0.0..6.3f64,
                                                 r2 in -1.0..1.0f64, th2 in 0.0..6.3f64) {
        let g = free_cov(s, d, 1.0, 10.0, 0.5, 2.0, t);
        let moved = g.transformed(&local_symplectic(r1, th1, r2, th2)).unwrap();
        for (a, b) in g.symplectic_eigenvalues().unwrap().iter().zip(moved.symplectic_eigenvalues().unwrap()) {
            prop_assert!((a - b).abs() <= 1e-9 * a, "{a} vs {b}");
        }
        let (la, lb) = (g.log_negativity(NegativityConvention::Standard).unwrap(),
                        moved.log_negativity(NegativityConvention::Standard).unwrap());
        prop_assert!((la - lb).abs() <= 1e-8, "{la} vs {lb}");
    }

    #[test]
    fn partial_transpose_is_an_involution(s in 0.3..3.0f64, d in 0.3..3.0f64, w0 in 0.1..3.0f64, t in 0.0..5.0f64) {
        let g = harmonic_cov(s, d, 1.0, 5.0, w0, t);
        for party in 0..2 {
            prop_assert_eq!(&g.partial_transpose(party).unwrap().partial_transpose(party).unwrap(), &g);
        }
    }

    #[test]
    fn propagator_inverts_under_time_reversal(g in 0.2..3.0f64, w0 in 0.05..3.0f64, t in -5.0..5.0f64) {
        let sys = HarmonicSystem::new(g, w0, 1.0).unwrap();
        let prod = propagator_f(&sys, t).unwrap().matrix() * propagator_f(&sys, -t).unwrap().matrix();
        prop_assert!((prod - Matrix4::identity()).amax() <= 1e-9);
    }

    #[test]
    fn entropy_depends_only_on_the_ratio(s in 0.1..5.0f64, d in 0.1..5.0f64, k in 0.05..20.0f64) {
        let a = GaussianPairState::new(s, d, 1.0).unwrap().entanglement_entropy();
        let b = GaussianPairState::new(k * s, k * d, 1.0).unwrap().entanglement_entropy();
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn geometric_spectrum_is_normalised(r in 0.0..0.999f64) {
        let spec = GeometricSpectrum::new(r).unwrap();
        let total: f64 = (0..200_000u32).map(|n| spec.eigenvalue(n)).take_while(|&l| l > 1e-300).sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        prop_assert!(spec.entropy() >= 0.0);
    }

    #[test]
    fn rendered_numbers_round_trip(x in proptest::num::f64::NORMAL) {
        let back: f64 = Cell::Num(x).render().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}
