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

use scramble_sense::harness::{
    bias_infinite_m, collision_empirical, median_of_means, run_trial, scaling_sweep, Experiment, ExperimentConfig,
    SignalSource,
};
use scramble_sense::theory::{predict_variance, Estimator, PredictionInput};
use scramble_sense::{signal_fidelity_a, SignalKind};

fn config(json: &str) -> ExperimentConfig {
    serde_json::from_str(json).unwrap()
}

const PROTOCOLS: [&str; 6] = ["quad-ramsey", "tilted-ramsey", "global-clifford", "local-clifford", "ruc", "hamiltonian"];

fn zero_config(protocol: &str) -> ExperimentConfig {
    let signals = if protocol.ends_with("ramsey") {
        r#"{"pool":"ramsey-z","sparsity":{"coherent":3,"incoherent":0},"ranges":{"theta":[0,0],"gamma":[0,0]}}"#
    } else if protocol.ends_with("clifford") {
        r#"{"pool":"local-xyz","sparsity":{"coherent":3,"incoherent":2,"disjoint":true},"ranges":{"theta":[0,0],"gamma":[0,0]}}"#
    } else {
        r#"[{"kind":"coherent","pauli":"XIIII","t":1,"amplitude":0},{"kind":"coherent","pauli":"IIZII","t":1,"amplitude":0},
            {"kind":"incoherent","pauli":"IYIII","t":1,"amplitude":0},{"kind":"incoherent","pauli":"IIIIX","t":1,"amplitude":0}]"#
    };
    config(&format!(
        r#"{{"protocol":"{protocol}","n":5,"t_steps":1,"signals":{signals},
        "n_circuits":{{"coherent":15,"incoherent":8,"dense":2}},"shots":2000,"seed":3}}"#
    ))
}

#[test]
fn zero_signals_give_zero_error_everywhere() {
    let t = run_trial(&zero_config("quad-ramsey"), 2000).unwrap();
    assert_eq!(t.metrics.rms_coherent, 0.0);
    assert_eq!(t.metrics.a_true, 1.0);
    for protocol in PROTOCOLS {
        let b = bias_infinite_m(&zero_config(protocol)).unwrap();
        assert!(b.worst_case.sqrt() < 1e-12, "{protocol}: {}", b.worst_case);
    }
}

#[test]
fn underdetermined_dense_fit_is_an_error() {
    let cfg = config(
        r#"{"protocol":"hamiltonian","n":5,"t_steps":1,
        "signals":{"pool":"local-xyz","sparsity":{"coherent":3,"incoherent":2,"disjoint":true},"ranges":{"theta":[0,0],"gamma":[0,0]}},
        "n_circuits":{"coherent":15,"incoherent":8,"dense":4},"shots":2000,"seed":3}"#,
    );
    assert!(matches!(bias_infinite_m(&cfg), Err(scramble_sense::Error::Numerical(_))));
}

#[test]
fn runs_are_deterministic_in_the_seed() {
    for protocol in ["tilted-ramsey", "global-clifford", "ruc"] {
        let mut cfg = zero_config(protocol);
        match &mut cfg.signals {
            SignalSource::Recipe(r) => {
                r.ranges.theta = (0.05, 0.1);
                r.ranges.gamma = (0.01, 0.02);
            }
            SignalSource::Explicit(list) => {
                for s in list {
                    s.amplitude = 0.02;
                }
            }
        }
        let a = run_trial(&cfg, 3000).unwrap();
        let b = run_trial(&cfg, 3000).unwrap();
        assert_eq!(a.report, b.report, "{protocol}");
        cfg.seed += 1;
        let c = run_trial(&cfg, 3000).unwrap();
        assert_ne!(a.report, c.report, "{protocol}");
    }
}

#[test]
fn estimates_follow_signal_permutations() {
    let signals = [
        r#"{"kind":"coherent","pauli":"ZIIII","t":1,"amplitude":0.08}"#,
        r#"{"kind":"coherent","pauli":"IZZII","t":1,"amplitude":-0.05}"#,
        r#"{"kind":"coherent","pauli":"IIIZZ","t":1,"amplitude":0.03}"#,
        r#"{"kind":"coherent","pauli":"ZIZIZ","t":1,"amplitude":0.06}"#,
    ];
    for protocol in ["tilted-ramsey", "quad-ramsey"] {
        let run = |order: &[usize]| {
            let list: Vec<&str> = order.iter().map(|&i| signals[i]).collect();
            let cfg = config(&format!(
                r#"{{"protocol":"{protocol}","n":5,"t_steps":1,"signals":[{}],"shots":5000,"seed":9}}"#,
                list.join(",")
            ));
            let exp = Experiment::prepare(&cfg).unwrap();
            let t = exp.trial(5000, 0).unwrap();
            order.iter().enumerate().map(|(pos, &orig)| (orig, t.report.entries[pos].estimate)).collect::<Vec<_>>()
        };
        let mut base = run(&[0, 1, 2, 3]);
        let mut perm = run(&[2, 0, 3, 1]);
        base.sort_by_key(|p| p.0);
        perm.sort_by_key(|p| p.0);
        assert_eq!(base, perm, "{protocol}");
    }
}

#[test]
fn config_round_trips_through_json() {
    let cfg = zero_config("global-clifford");
    let text = serde_json::to_string(&cfg).unwrap();
    let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(back.build_signals().unwrap(), cfg.build_signals().unwrap());
}

#[test]
fn validation_errors_and_warnings() {
    let mut cfg = zero_config("tilted-ramsey");
    assert!(cfg.validate().unwrap().is_empty());
    cfg.gamma_readout = 0.5;
    assert!(cfg.validate().is_err());

    let bad_shots = config(r#"{"protocol":"tilted-ramsey","n":2,"t_steps":1,"signals":[],"shots":0,"seed":1}"#);
    assert!(bad_shots.validate().is_err());

    let few = r#"{"protocol":"global-clifford","n":6,"t_steps":1,
        "signals":{"pool":"local-xyz","sparsity":{"coherent":3,"incoherent":3},"ranges":{"theta":[0.1,0.1],"gamma":[0.01,0.01]}},
        "n_circuits":{"coherent":2,"incoherent":1},"shots":100,"seed":1"#;
    assert!(config(&format!("{few}}}")).validate().is_err());
    assert!(Experiment::prepare(&config(&format!("{few}}}"))).is_err());
    let warnings = config(&format!(r#"{few},"override_circuits":true}}"#)).validate().unwrap();
    assert_eq!(warnings.len(), 2);

    assert!(serde_json::from_str::<ExperimentConfig>(r#"{"protocol":"nope","n":2}"#).is_err());
}

#[test]
fn sweep_needs_three_shot_counts() {
    let cfg = zero_config("quad-ramsey");
    assert!(scaling_sweep(&cfg, &[100, 1000]).is_err());
    let recs = scaling_sweep(&cfg, &[100, 1000, 10_000]).unwrap();
    assert_eq!(recs.len(), 3);
    assert!(recs.iter().all(|r| r.rms_coherent == 0.0));
}

#[test]
fn sweep_theory_columns_match_predictions() {
    let cfg = config(
        r#"{"protocol":"global-clifford","n":6,"t_steps":1,
        "signals":{"pool":"local-xyz","sparsity":{"coherent":3,"incoherent":3,"disjoint":true},"ranges":{"theta":[0.05,0.1],"gamma":[0.02,0.04]}},
        "n_circuits":{"coherent":15,"incoherent":3},"shots":1000,"seed":2,"repetitions":4}"#,
    );
    let exp = Experiment::prepare(&cfg).unwrap();
    let a = signal_fidelity_a(&exp.signals);
    let gammas: Vec<f64> = exp.signals.of_kind(SignalKind::Incoherent).map(|s| s.amplitude).collect();
    let recs = scaling_sweep(&cfg, &[1000, 2000, 4000]).unwrap();
    for r in &recs {
        let coh = predict_variance(&PredictionInput::new(Estimator::CliffordCoherent, r.m as f64, a)).unwrap()[0];
        let mut inc = PredictionInput::new(Estimator::CliffordIncoherent, r.m as f64, a);
        inc.gammas = gammas.clone();
        let v = predict_variance(&inc).unwrap();
        let inc_rms = (v.iter().sum::<f64>() / v.len() as f64).sqrt();
        assert!((r.theory_coherent - coh.sqrt()).abs() < 1e-15);
        assert!((r.theory_incoherent - inc_rms).abs() < 1e-15);
    }
    assert!(recs[0].slope_running.is_nan());
    assert!(recs[2].slope_running.is_finite());
}

#[test]
fn clifford_coherent_rms_matches_closed_form() {
    let cfg = config(
        r#"{"protocol":"global-clifford","n":8,"t_steps":1,
        "signals":{"pool":{"random-paulis":{"count":20}},"sparsity":{"coherent":20,"incoherent":0},"ranges":{"theta":[0.02,0.04],"gamma":[0,0]},"kinds":["coherent"]},
        "n_circuits":{"coherent":15,"incoherent":1},"override_circuits":true,"shots":[10000,30000,100000],"seed":12,"repetitions":12}"#,
    );
    let exp = Experiment::prepare(&cfg).unwrap();
    let a = signal_fidelity_a(&exp.signals);
    for r in scaling_sweep(&cfg, &[10_000, 30_000, 100_000]).unwrap() {
        let scaled = r.rms_coherent * (r.m as f64).sqrt() * a * 2f64.sqrt();
        assert!((0.8..=1.3).contains(&scaled), "M {} scaled {scaled}", r.m);
    }
}

#[test]
fn tilted_bias_is_third_order_for_one_signal() {
    let cfg = config(
        r#"{"protocol":"tilted-ramsey","n":4,"t_steps":1,
        "signals":[{"kind":"coherent","pauli":"IZIZ","t":1,"amplitude":0.05}],"shots":1000,"seed":1}"#,
    );
    let b = bias_infinite_m(&cfg).unwrap();
    assert!(b.bias[0].2.abs() <= 0.05f64.powi(3), "{}", b.bias[0].2);
    assert!(b.bias[0].2 != 0.0);
}

#[test]
fn clifford_incoherent_bias_shrinks_with_size() {
    let mut wins = 0;
    let mut total = [0.0f64; 2];
    for seed in 0..30u64 {
        let mut ms = [0.0; 2];
        for (i, n) in [8usize, 10].into_iter().enumerate() {
            let cfg = config(&format!(
                r#"{{"protocol":"global-clifford","n":{n},"t_steps":1,
                "signals":{{"pool":{{"random-paulis":{{"count":10}}}},"sparsity":{{"coherent":0,"incoherent":10}},"ranges":{{"theta":[0,0],"gamma":[0.03,0.06]}},"kinds":["incoherent"]}},
                "n_circuits":{{"coherent":1,"incoherent":3}},"override_circuits":true,"shots":1000,"seed":{seed}}}"#
            ));
            ms[i] = bias_infinite_m(&cfg).unwrap().mean_squared;
            total[i] += ms[i];
        }
        wins += usize::from(ms[1] < ms[0]);
    }
    assert!(total[1] < total[0], "{total:?}");
    assert!(wins >= 20, "{wins} of 30");
}

#[test]
fn collision_frequency_edge_cases() {
    assert_eq!(collision_empirical(6, 1, 1, 200, 1), 0.0);
    assert!(collision_empirical(2, 10, 1, 200, 1) == 1.0);
}

#[test]
fn median_of_means_is_robust() {
    assert_eq!(median_of_means(&[1.0, 3.0]), 2.0);
    let v = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1e6];
    assert!(median_of_means(&v) < 2.0);
    assert_eq!(median_of_means(&[2.0, f64::NAN, 2.0, 2.0]), 2.0);
}
