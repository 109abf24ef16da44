//! Cross-validation of the fast kernels against explicit 2^N x 2^N matrix
//! exponentials built by eigendecomposition.

mod common;

use common::*;
use num_complex::Complex64;

use floq_otoc::{
    build_initial_state, compute_otoc_series, FloquetMap, InitialState, ModelConfig,
    ObservableAxis, OtocRequest, Variant,
};

fn haar(n: usize, seed: u64) -> floq_otoc::StateVector {
    build_initial_state(InitialState::HaarRandom { seed }, n).unwrap()
}

#[test]
fn x_basis_kick_matches_dense_exponential_at_n4() {
    let n = 4;
    let (j_x, h_x, tau) = (1.0, 0.7, 0.23);
    let state = haar(n, 21);
    let h = h_xx(n) * Complex64::from(j_x) + h_x_mat(n, h_x);
    let reference = expm_herm(&h, tau) * to_vector(&state);
    let fast = state.apply_x_basis_kick(j_x, h_x, tau);
    let dev = max_deviation(&fast, &reference);
    assert!(dev <= 1e-12, "max deviation {dev:e}");
}

fn h_x_mat(n: usize, coupling: f64) -> CMat {
    h_x(n) * Complex64::from(coupling)
}

#[test]
fn z_kick_matches_dense_exponential() {
    let n = 5;
    let (h_zc, tau) = (0.9, 0.41);
    let state = haar(n, 22);
    let reference = expm_herm(&h_z(n), tau * h_zc) * to_vector(&state);
    let fast = state.apply_diagonal_z_kick(h_zc, tau);
    let dev = max_deviation(&fast, &reference);
    assert!(dev <= 1e-13, "max deviation {dev:e}");
}

#[test]
fn floquet_map_matches_dense_product_at_n4() {
    // nonintegrable point J = h_x = h_z = 1, tau = pi/56
    let config =
        ModelConfig::standard(4, std::f64::consts::PI / 56.0, Variant::Nonintegrable).unwrap();
    let state = haar(4, 23);
    let reference = dense_floquet(&config) * to_vector(&state);
    let fast = FloquetMap::new(config).apply(state).unwrap();
    let dev = max_deviation(&fast, &reference);
    assert!(dev <= 1e-12, "max deviation {dev:e}");
}

#[test]
fn every_kick_operation_matches_dense_up_to_n6() {
    for n in [2, 3, 4, 5, 6] {
        let (j_x, h_x_c, h_z_c, tau) = (0.8, 0.5, 1.1, 0.19);
        let state = haar(n, 24 + n as u64);
        let hj = h_xx(n) * Complex64::from(j_x) + h_x(n) * Complex64::from(h_x_c);
        let ref_x = expm_herm(&hj, tau) * to_vector(&state);
        let got_x = state.clone().apply_x_basis_kick(j_x, h_x_c, tau);
        assert!(max_deviation(&got_x, &ref_x) <= 1e-12, "x kick N={n}");
        let ref_z = expm_herm(&h_z(n), tau * h_z_c) * to_vector(&state);
        let got_z = state.apply_diagonal_z_kick(h_z_c, tau);
        assert!(max_deviation(&got_z, &ref_z) <= 1e-12, "z kick N={n}");
    }
}

#[test]
fn inverse_map_matches_dense_adjoint() {
    let config = ModelConfig::standard(4, 0.37, Variant::Nonintegrable).unwrap();
    let state = haar(4, 29);
    let reference = dense_floquet(&config).adjoint() * to_vector(&state);
    let fast = FloquetMap::new(config).inverted().apply(state).unwrap();
    let dev = max_deviation(&fast, &reference);
    assert!(dev <= 1e-12, "max deviation {dev:e}");
}

#[test]
fn echo_otoc_matches_dense_heisenberg_oracle_at_n6() {
    // transverse pair at separation 2, nonintegrable, tau = 0.11
    let config = ModelConfig::standard(6, 0.11, Variant::Nonintegrable).unwrap();
    let request =
        OtocRequest::with_default_initial(config, ObservableAxis::Transverse, 0, 2, 8, 1).unwrap();
    let series = compute_otoc_series(&request).unwrap();
    let init = build_initial_state(InitialState::AllUpZ, 6).unwrap();
    for (&n, &f) in series.kicks.iter().zip(&series.f_values) {
        let reference = dense_otoc(&config, ObservableAxis::Transverse, 0, 2, n, &init);
        assert!(
            (f - reference).norm() <= 1e-10,
            "kick {n}: echo {f}, dense {reference}"
        );
    }
}

#[test]
fn echo_otoc_matches_dense_for_longitudinal_axis() {
    let config = ModelConfig::standard(6, 0.3, Variant::Nonintegrable).unwrap();
    let request =
        OtocRequest::with_default_initial(config, ObservableAxis::Longitudinal, 1, 4, 6, 1)
            .unwrap();
    let series = compute_otoc_series(&request).unwrap();
    let init = build_initial_state(InitialState::AllRightX, 6).unwrap();
    for (&n, &f) in series.kicks.iter().zip(&series.f_values) {
        let reference = dense_otoc(&config, ObservableAxis::Longitudinal, 1, 4, n, &init);
        assert!(
            (f - reference).norm() <= 1e-10,
            "kick {n}: echo {f}, dense {reference}"
        );
    }
}

#[test]
fn echo_otoc_matches_dense_for_haar_initial_state() {
    let config = ModelConfig::standard(5, 0.27, Variant::Nonintegrable).unwrap();
    let init_kind = InitialState::HaarRandom { seed: 31 };
    let request = OtocRequest::new(
        config,
        ObservableAxis::Transverse,
        0,
        2,
        5,
        1,
        init_kind,
    )
    .unwrap();
    let series = compute_otoc_series(&request).unwrap();
    let init = build_initial_state(init_kind, 5).unwrap();
    for (&n, &f) in series.kicks.iter().zip(&series.f_values) {
        let reference = dense_otoc(&config, ObservableAxis::Transverse, 0, 2, n, &init);
        assert!((f - reference).norm() <= 1e-10, "kick {n}");
    }
}
