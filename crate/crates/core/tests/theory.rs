// Copyright 2026 The scramble-sense Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

use proptest::prelude::*;
use scramble_sense::harness::collision_empirical;
use scramble_sense::theory::{
    collision_bound, insensitivity_failure, loglog_slope, predict_variance, readout_transition_m_star,
    required_circuits, weingarten_d, CircuitKind, Estimator, PredictionInput,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

#[test]
fn variance_examples() {
    let q = predict_variance(&PredictionInput::new(Estimator::Quadratic, 1e4, 1.0)).unwrap();
    assert!(close(q[0], 2.5e-5, 1e-12));
    let c = predict_variance(&PredictionInput::new(Estimator::CliffordCoherent, 2.0, 1.0)).unwrap();
    assert!(close(c[0], 0.25, 1e-12));
    let mut inc = PredictionInput::new(Estimator::CliffordIncoherent, 1e3, 0.9);
    inc.gammas = vec![0.0, 0.09];
    let v = predict_variance(&inc).unwrap();
    assert_eq!(v[0], 0.0);
    assert!(close(v[1], 0.09 / 900.0, 1e-12));
}

#[test]
fn tilted_and_ruc_variances() {
    let mut t = PredictionInput::new(Estimator::Tilted, 1e4, 1.0);
    t.phi = 0.7;
    t.weights = vec![1, 2];
    t.gamma_r = 0.05;
    let v = predict_variance(&t).unwrap();
    for (s, got) in [1.0f64, 2.0].iter().zip(&v) {
        let expected = 1.0 / (4.0 * (s * 0.7).sin().powi(2) * 0.9f64.powf(2.0 * s) * 1e4);
        assert!(close(*got, expected, 1e-12));
    }
    let mut r = PredictionInput::new(Estimator::Ruc, 100.0, 0.5);
    assert!(predict_variance(&r).is_err());
    r.beta = Some(2.3);
    assert!(close(predict_variance(&r).unwrap()[0], 2.3 / 25.0, 1e-12));
    assert!(predict_variance(&PredictionInput::new(Estimator::Quadratic, 0.0, 1.0)).is_err());
}

#[test]
fn prediction_input_from_json() {
    let p: PredictionInput = serde_json::from_str(r#"{"estimator":"clifford-incoherent","m":100,"gammas":[0.1]}"#).unwrap();
    assert_eq!(p.a, 1.0);
    assert!(close(predict_variance(&p).unwrap()[0], 1e-3, 1e-12));
}

#[test]
fn circuit_count_examples() {
    assert_eq!(required_circuits(CircuitKind::Coherent, 580, 12, 0.01).unwrap(), 16);
    assert!(insensitivity_failure(580, 16) <= 0.01 && insensitivity_failure(580, 15) > 0.01);
    assert_eq!(required_circuits(CircuitKind::Coherent, 1, 12, 0.5).unwrap(), 1);
    assert_eq!(required_circuits(CircuitKind::Incoherent, 580, 12, 0.01).unwrap(), 3);
    assert!(collision_bound(580, 12, 2) > 0.01);
    assert!(collision_bound(580, 12, 3) <= 0.01);
    assert!(required_circuits(CircuitKind::Incoherent, 1, 12, 0.01).is_err());
    assert!(required_circuits(CircuitKind::Coherent, 5, 12, 1.0).is_err());
    assert!(required_circuits(CircuitKind::Coherent, 5, 12, 0.0).is_err());
}

#[test]
fn collision_bound_examples() {
    assert_eq!(collision_bound(2, 10, 1), 2f64.powi(-10));
    assert_eq!(collision_bound(1, 10, 1), 0.0);
    assert_eq!(collision_bound(1000, 2, 1), 1.0);
    let (draws, bound) = (10_000, collision_bound(20, 6, 1));
    let p = collision_empirical(6, 20, 1, draws, 3);
    let sigma = (p * (1.0 - p) / draws as f64).sqrt();
    assert!(p <= bound + 5.0 * sigma);
    let (p3, b3) = (collision_empirical(6, 20, 3, draws, 4), collision_bound(20, 6, 3));
    assert!(p3 <= b3 + 5.0 * (b3 / draws as f64).sqrt(), "{p3} vs {b3}");
}

#[test]
fn readout_transition_examples() {
    let m = readout_transition_m_star(0.05, 10, 0.1).unwrap();
    assert!((m - 824.36).abs() < 0.01, "{m}");
    assert_eq!(readout_transition_m_star(0.0, 10, 0.1).unwrap(), 0.0);
    let half = readout_transition_m_star(0.05, 10, 0.2).unwrap();
    assert!(close(m / half, 16.0, 1e-12));
    assert!(readout_transition_m_star(0.05, 10, 0.0).is_err());
}

#[test]
fn weingarten_outside_lightcone() {
    assert_eq!(weingarten_d(0, 3, 2.0), 0.0);
    assert_eq!(weingarten_d(4, 0, 2.0), 0.0);
}

#[test]
fn weingarten_single_gate_value() {
    let q: f64 = 2.0;
    let expected = q * q / (q.powi(4) - 1.0) / (q * q);
    assert!(close(weingarten_d(1, 1, q), expected, 1e-14), "{} vs {expected}", weingarten_d(1, 1, q));
}

#[test]
fn weingarten_nonnegative_and_symmetric() {
    for lu in 0..=12 {
        for lv in 0..=12 - lu {
            let d = weingarten_d(lu, lv, 2.0);
            assert!(d >= 0.0, "D({lu},{lv}) = {d}");
            assert!(close(d, weingarten_d(lv, lu, 2.0), 1e-12) || d == 0.0);
        }
    }
}

#[test]
fn weingarten_decays_away_from_the_diagonal() {
    for lv in 1..=6 {
        for lu in lv..12 - lv {
            assert!(weingarten_d(lu + 1, lv, 2.0) < weingarten_d(lu, lv, 2.0), "l_u {lu} l_v {lv}");
        }
    }
}

#[test]
fn slope_of_power_law() {
    let x = [1e3, 1e4, 1e5];
    let y: Vec<f64> = x.iter().map(|m: &f64| 3.0 * m.powf(-0.5)).collect();
    assert!((loglog_slope(&x, &y) + 0.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn coherent_count_monotone(k in 1usize..2000, dk in 0usize..500, delta in 0.001..0.5f64, shrink in 0.1..1.0f64) {
        let base = required_circuits(CircuitKind::Coherent, k, 10, delta).unwrap();
        prop_assert!(required_circuits(CircuitKind::Coherent, k + dk, 10, delta).unwrap() >= base);
        prop_assert!(required_circuits(CircuitKind::Coherent, k, 10, delta * shrink).unwrap() >= base);
    }

    #[test]
    fn incoherent_count_meets_target(k in 2usize..3000, n in 4usize..30, delta in 0.001..0.5f64) {
        let nc = required_circuits(CircuitKind::Incoherent, k, n, delta).unwrap();
        prop_assert!(collision_bound(k, n, nc) <= delta);
        if nc > 1 {
            prop_assert!(collision_bound(k, n, nc - 1) > delta);
        }
    }

    #[test]
    fn variances_scale_inversely_with_shots(m in 1.0..1e7f64, a in 0.01..1.0f64, c in 1.0..100.0f64) {
        for est in [Estimator::Quadratic, Estimator::CliffordCoherent] {
            let v1 = predict_variance(&PredictionInput::new(est, m, a)).unwrap()[0];
            let v2 = predict_variance(&PredictionInput::new(est, m * c, a)).unwrap()[0];
            prop_assert!(close(v1 / v2, c, 1e-10));
        }
    }
}
