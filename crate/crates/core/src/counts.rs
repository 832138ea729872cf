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

//! Measurement tallies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pauli::Bitstring;

/// Per-circuit tally of observed bitstrings.
///
/// Weights are `f64` so exact probability vectors can stand in for infinite-shot data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitstringCounts {
    pub n: usize,
    pub tallies: BTreeMap<Bitstring, f64>,
    pub shots: f64,
}

impl BitstringCounts {
    pub fn new(n: usize) -> Self {
        Self { n, tallies: BTreeMap::new(), shots: 0.0 }
    }

    /// Exact distribution over dense indices treated as a unit-weight record.
    pub fn from_distribution(n: usize, probs: &[f64]) -> Self {
        let mut c = Self::new(n);
        for (i, &p) in probs.iter().enumerate() {
            if p != 0.0 {
                c.tallies.insert(Bitstring::from_index(n, i as u64), p);
            }
        }
        c.shots = probs.iter().sum();
        c
    }

    pub fn add(&mut self, z: Bitstring, weight: f64) {
        *self.tallies.entry(z).or_insert(0.0) += weight;
        self.shots += weight;
    }

    pub fn merge(&mut self, other: &Self) {
        for (z, w) in &other.tallies {
            *self.tallies.entry(*z).or_insert(0.0) += w;
        }
        self.shots += other.shots;
    }

    pub fn count(&self, z: &Bitstring) -> f64 {
        self.tallies.get(z).copied().unwrap_or(0.0)
    }

    pub fn frequency(&self, z: &Bitstring) -> f64 {
        self.count(z) / self.shots
    }

    /// `(bitstring, frequency)` pairs in a fixed order.
    pub fn frequencies(&self) -> impl Iterator<Item = (&Bitstring, f64)> + '_ {
        self.tallies.iter().map(move |(z, w)| (z, w / self.shots))
    }

    /// Dense frequency vector for `n <= 30`.
    pub fn dense_frequencies(&self) -> Vec<f64> {
        let mut v = vec![0.0; 1usize << self.n];
        for (z, f) in self.frequencies() {
            v[z.index()] += f;
        }
        v
    }

    /// Same tallies multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            tallies: self.tallies.iter().map(|(z, w)| (*z, w * c)).collect(),
            shots: self.shots * c,
        }
    }
}
