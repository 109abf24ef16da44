//! Structural invariants of the kernels and the correlator, checked over
//! randomized inputs where that adds coverage.

use num_complex::Complex64;
use proptest::prelude::*;

use floq_otoc::{
    build_initial_state, compute_otoc_series, inner_product, otoc_at_kick, FloquetMap,
    InitialState, ModelConfig, ObservableAxis, OtocRequest, PauliAxis, SiteObservable,
    StateVector, Variant, EPSILON,
};

fn haar(n: usize, seed: u64) -> StateVector {
    build_initial_state(InitialState::HaarRandom { seed }, n).unwrap()
}

/// One step of a random kick/Pauli program.
#[derive(Debug, Clone)]
enum Op {
    ZKick(f64),
    XKick { j_x: f64, h_x: f64, tau: f64 },
    Pauli(usize, u8),
}

fn op_strategy(n_sites: usize) -> impl Strategy<Value = Op> {
    prop_oneof![
        (0.0..0.8f64).prop_map(Op::ZKick),
        (0.0..0.8f64, -1.0..1.0f64, 0.0..0.6f64)
            .prop_map(|(j_x, h_x, tau)| Op::XKick { j_x, h_x, tau }),
        (0..n_sites, 0..3u8).prop_map(|(s, a)| Op::Pauli(s, a)),
    ]
}

fn apply_op(state: StateVector, op: &Op) -> StateVector {
    match *op {
        Op::ZKick(tau) => state.apply_diagonal_z_kick(1.0, tau),
        Op::XKick { j_x, h_x, tau } => state.apply_x_basis_kick(j_x, h_x, tau),
        Op::Pauli(site, axis) => {
            let axis = match axis {
                0 => PauliAxis::X,
                1 => PauliAxis::Y,
                _ => PauliAxis::Z,
            };
            state.apply_pauli(SiteObservable { site, axis }).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_is_preserved_by_random_programs(
        seed in 0u64..1000,
        ops in prop::collection::vec(op_strategy(6), 1..120),
    ) {
        let mut state = haar(6, seed);
        for op in &ops {
            state = apply_op(state, op);
        }
        prop_assert!((state.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn translation_covariance_of_inner_products(
        seed in 0u64..1000,
        shift in 1usize..6,
        site in 0usize..6,
        tau in 0.05..0.5f64,
    ) {
        // rotate the bit labels of both states and every operation site:
        // inner products must not change
        let n = 6;
        let a = haar(n, seed);
        let b = haar(n, seed.wrapping_add(7));
        let obs = SiteObservable { site, axis: PauliAxis::Z };
        let lhs = {
            let ta = a.clone().apply_x_basis_kick(1.0, 0.4, tau).apply_pauli(obs).unwrap();
            inner_product(&ta, &b).unwrap()
        };
        let rhs = {
            let obs_shifted = SiteObservable { site: (site + shift) % n, axis: PauliAxis::Z };
            let ta = a
                .rotate_sites(shift)
                .apply_x_basis_kick(1.0, 0.4, tau)
                .apply_pauli(obs_shifted)
                .unwrap();
            inner_product(&ta, &b.rotate_sites(shift)).unwrap()
        };
        prop_assert!((lhs - rhs).norm() <= 1e-12, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn characteristic_kick_is_tau_independent(
        tau_frac in 0.5f64..6.0,
        delta_l in 2usize..4,
    ) {
        // first departure at delta_l (transverse) for any kick period
        let tau = tau_frac * EPSILON;
        let config = ModelConfig::standard(8, tau, Variant::Nonintegrable).unwrap();
        let request = OtocRequest::with_default_initial(
            config, ObservableAxis::Transverse, 0, delta_l, delta_l, 1,
        ).unwrap();
        let series = compute_otoc_series(&request).unwrap();
        for k in 0..delta_l {
            prop_assert!(series.c_values[k].abs() <= 1e-10);
        }
        prop_assert!(series.c_values[delta_l] > 1e-10);
    }
}

#[test]
fn norm_drift_over_one_thousand_kicks() {
    let config = ModelConfig::standard(10, 0.3, Variant::Nonintegrable).unwrap();
    let map = FloquetMap::new(config);
    let state = haar(10, 17);
    let evolved = map.evolve_n_kicks(state, 1000).unwrap();
    let drift = (evolved.norm() - 1.0).abs();
    assert!(drift <= 1e-12, "drift {drift:e}");
}

#[test]
fn site_resolved_expectations_are_site_independent() {
    // translation-invariant initial states keep translation-invariant
    // observables under the ring evolution
    for (initial, variant) in [
        (InitialState::AllUpZ, Variant::Nonintegrable),
        (InitialState::AllRightX, Variant::Integrable),
    ] {
        let n = 8;
        let config = ModelConfig::standard(n, 0.29, variant).unwrap();
        let map = FloquetMap::new(config);
        let state = build_initial_state(initial, n).unwrap();
        let evolved = map.evolve_n_kicks(state, 7).unwrap();
        for axis in [PauliAxis::X, PauliAxis::Z] {
            let values: Vec<Complex64> = (0..n)
                .map(|site| evolved.expectation(SiteObservable { site, axis }).unwrap())
                .collect();
            for v in &values[1..] {
                assert!(
                    (v - values[0]).norm() <= 1e-12,
                    "site dependence for {axis:?}: {values:?}"
                );
            }
        }
    }
}

#[test]
fn haar_initial_state_shares_the_characteristic_kick() {
    let tau = 4.0 * EPSILON;
    let config = ModelConfig::standard(10, tau, Variant::Nonintegrable).unwrap();
    for (axis, delta_l, expected) in [
        (ObservableAxis::Transverse, 3usize, 3usize),
        (ObservableAxis::Longitudinal, 3, 4),
    ] {
        for initial in [axis.default_initial(), InitialState::HaarRandom { seed: 77 }] {
            let request =
                OtocRequest::new(config, axis, 0, delta_l, expected, 1, initial).unwrap();
            let series = compute_otoc_series(&request).unwrap();
            for k in 0..expected {
                assert!(
                    series.c_values[k].abs() <= 1e-10,
                    "{axis} {initial:?} early departure at {k}"
                );
            }
            assert!(series.c_values[expected] > 1e-10, "{axis} {initial:?}");
        }
    }
}

#[test]
fn from_scratch_evaluation_reproduces_the_incremental_series() {
    let config = ModelConfig::standard(8, 0.33, Variant::Nonintegrable).unwrap();
    let request =
        OtocRequest::with_default_initial(config, ObservableAxis::Longitudinal, 1, 4, 9, 1)
            .unwrap();
    let series = compute_otoc_series(&request).unwrap();
    for (&n, &f) in series.kicks.iter().zip(&series.f_values) {
        let fresh = otoc_at_kick(&request, n).unwrap();
        assert!((fresh - f).norm() <= 1e-12, "kick {n}");
    }
}

#[test]
fn dynamic_onset_moves_earlier_as_the_period_grows() {
    // kick index at which C first exceeds 0.1 is non-increasing in tau
    let n = 10;
    for delta_l in [2usize, 3] {
        let mut onsets = Vec::new();
        for k in 1..=6 {
            let tau = k as f64 * EPSILON / 2.0;
            let config = ModelConfig::standard(n, tau, Variant::Nonintegrable).unwrap();
            let request = OtocRequest::with_default_initial(
                config,
                ObservableAxis::Transverse,
                0,
                delta_l,
                60,
                1,
            )
            .unwrap();
            let series = compute_otoc_series(&request).unwrap();
            let onset = series
                .kicks
                .iter()
                .zip(&series.c_values)
                .find(|(_, &c)| c > 0.1)
                .map(|(&n, _)| n)
                .expect("C should exceed 0.1 within the horizon");
            onsets.push(onset);
        }
        for pair in onsets.windows(2) {
            assert!(pair[1] <= pair[0], "onsets not monotone: {onsets:?}");
        }
    }
}

#[test]
fn correlator_magnitude_stays_bounded() {
    let config = ModelConfig::standard(8, 5.0 * EPSILON, Variant::Nonintegrable).unwrap();
    let request =
        OtocRequest::with_default_initial(config, ObservableAxis::Transverse, 0, 4, 40, 1)
            .unwrap();
    let series = compute_otoc_series(&request).unwrap();
    for (&n, f) in series.kicks.iter().zip(&series.f_values) {
        assert!(f.norm() <= 1.0 + 1e-10, "kick {n}: |F| = {}", f.norm());
    }
}
