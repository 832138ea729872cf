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

//! Closed-form quadratic and tilted Ramsey estimators.

use super::{EstimateReport, SignalEstimate};
use crate::counts::BitstringCounts;
use crate::error::{Error, Result};
use crate::pauli::Bitstring;
use crate::patterns::tilted_pattern;
use crate::readout::corrected_frequency;
use crate::signal::{SignalKind, SignalSet, SignalSpec};

/// `π(√5 - 1)/2`, a badly approximable tilt.
pub const DEFAULT_PHI: f64 = 1.941_611_038_725_466_6;

fn z_signals(signals: &SignalSet) -> Result<Vec<&SignalSpec>> {
    signals
        .signals
        .iter()
        .map(|s| {
            if s.kind != SignalKind::Coherent || !s.generator.is_z_type() {
                Err(Error::Input(format!("Ramsey estimators take coherent Z-string signals; signal {} is not", s.id)))
            } else {
                Ok(s)
            }
        })
        .collect()
}

/// `Â = f(0)`, `θ̂²_a = f(a)/Â`, `θ̂_a = √max(θ̂²_a, 0)`; frequencies are readout-corrected when
/// `gamma_r > 0`.
pub fn estimate_quadratic(counts: &BitstringCounts, signals: &SignalSet, gamma_r: f64) -> Result<EstimateReport> {
    let sig = z_signals(signals)?;
    let n = signals.n;
    let a_hat = corrected_frequency(counts, &Bitstring::zeros(n), gamma_r)?;
    if a_hat <= 0.0 || !a_hat.is_finite() {
        return Err(Error::Numerical(format!("estimated signal fidelity {a_hat} is not positive")));
    }
    let var = 1.0 / (4.0 * a_hat * counts.shots);
    let entries = sig
        .iter()
        .map(|s| {
            let raw = corrected_frequency(counts, &s.generator.z_support(), gamma_r)? / a_hat;
            Ok(SignalEstimate {
                id: s.id,
                kind: SignalKind::Coherent,
                estimate: raw.max(0.0).sqrt(),
                raw,
                predicted_std: var.sqrt(),
                estimable: true,
                thresholded: false,
                corrected: gamma_r > 0.0,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EstimateReport { a_hat, v0: a_hat, entries })
}

/// `θ̂_a = 2^{N-2} / sin²(s_a φ) · Σ_z f(z) δp_a(z)`, divided by `(1-2γ_r)^{s_a}` when readout
/// correction is requested through `gamma_r > 0`.
pub fn estimate_tilted(counts: &BitstringCounts, signals: &SignalSet, phi: f64, gamma_r: f64) -> Result<EstimateReport> {
    let sig = z_signals(signals)?;
    let n = signals.n as i32;
    let entries = sig
        .iter()
        .map(|s| {
            let pattern = tilted_pattern(&s.generator, phi)?;
            let weight = s.generator.weight() as i32;
            let sin = (f64::from(weight) * phi).sin();
            let shrink = (1.0 - 2.0 * gamma_r).powi(weight);
            let estimable = pattern.is_sensitive();
            let estimate = if estimable {
                let dot: f64 = counts.frequencies().map(|(z, f)| f * pattern.value(z)).sum();
                dot * 2f64.powi(n - 2) / (sin * sin) / shrink
            } else {
                0.0
            };
            let var = if estimable { 1.0 / (4.0 * sin * sin * shrink * shrink * counts.shots) } else { 0.0 };
            Ok(SignalEstimate {
                id: s.id,
                kind: SignalKind::Coherent,
                estimate,
                raw: estimate,
                predicted_std: var.sqrt(),
                estimable,
                thresholded: false,
                corrected: gamma_r > 0.0,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EstimateReport { a_hat: 1.0, v0: 1.0, entries })
}

