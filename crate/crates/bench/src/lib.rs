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

//! Fixtures shared by the kernel benchmarks.

use rand::Rng;
use scramble_sense::harness::{Experiment, ExperimentConfig};
use scramble_sense::readout::{apply_bitflip_noise, CodewordSet};
use scramble_sense::rng::stream;
use scramble_sense::signal::pools;
use scramble_sense::tableau::sample_uniform_clifford;
use scramble_sense::{Bitstring, BitstringCounts, CliffordTableau, PauliString};

pub fn clifford(n: usize, seed: u64) -> CliffordTableau {
    sample_uniform_clifford(n, &mut stream(seed, 0))
}

pub fn paulis(n: usize, count: usize, seed: u64) -> Vec<PauliString> {
    pools::random_paulis(n, count, &mut stream(seed, 1)).expect("pool large enough")
}

/// `k` random nonzero codewords on `n <= 64` bits and `shots` noisy readouts spread over them.
pub fn noisy_codewords(n: usize, k: usize, gamma_r: f64, shots: u64, seed: u64) -> (CodewordSet, BitstringCounts) {
    let mut rng = stream(seed, 2);
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut words = Vec::with_capacity(k);
    while words.len() < k {
        let w = Bitstring::from_index(n, rng.random::<u64>() & mask);
        if !w.is_zero() && !words.contains(&w) {
            words.push(w);
        }
    }
    let set = CodewordSet::new(n, &words).expect("distinct codewords");
    let mut clean = BitstringCounts::new(n);
    for w in &set.codewords {
        clean.add(*w, (shots / set.codewords.len() as u64) as f64);
    }
    let noisy = apply_bitflip_noise(&clean, gamma_r, seed).expect("valid readout rate");
    (set, noisy)
}

/// Global Clifford experiment on the local-xyz pool.
pub fn clifford_experiment(n: usize, t_steps: usize, seed: u64) -> Experiment {
    let json = format!(
        r#"{{"protocol":"global-clifford","n":{n},"t_steps":{t_steps},
        "signals":{{"pool":"local-xyz","sparsity":{{"coherent":4,"incoherent":3}},"ranges":{{"theta":[0.1,0.15],"gamma":[0.07,0.1]}}}},
        "n_circuits":{{"coherent":15,"incoherent":3}},"override_circuits":true,"shots":10000,"seed":{seed}}}"#
    );
    let cfg: ExperimentConfig = serde_json::from_str(&json).expect("valid fixture config");
    Experiment::prepare(&cfg).expect("fixture prepares")
}
