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

//! Signal estimators, thresholding and higher-order corrections.

mod clifford;
mod dense;
mod ramsey;

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

pub use clifford::{estimate_clifford_coherent, estimate_clifford_incoherent, CircuitRun};
pub use dense::{estimate_dense, DenseRun};
pub use ramsey::{estimate_quadratic, estimate_tilted, DEFAULT_PHI};

use crate::error::{Error, Result};
use crate::pauli::{Bitstring, PauliString};
use crate::signal::{SignalKind, SignalSet};

/// Condition-number estimate above which the normal system is regularized.
pub const MAX_CONDITION: f64 = 1e12;
/// Ridge strength relative to `trace / K`.
pub const RIDGE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignalEstimate {
    pub id: usize,
    pub kind: SignalKind,
    pub estimate: f64,
    /// Linear-inversion coefficient before nonlinear post-processing (`θ̂²` for quadratic Ramsey).
    pub raw: f64,
    pub predicted_std: f64,
    /// `false` when no circuit is sensitive to the signal; the estimate is then 0.
    pub estimable: bool,
    pub thresholded: bool,
    pub corrected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    /// Signal-fidelity estimate.
    pub a_hat: f64,
    /// Coefficient of the signal-free distribution.
    pub v0: f64,
    pub entries: Vec<SignalEstimate>,
}

impl EstimateReport {
    pub fn get(&self, id: usize) -> Option<&SignalEstimate> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn estimate(&self, id: usize) -> Option<f64> {
        self.get(id).map(|e| e.estimate)
    }

    pub fn of_kind(&self, kind: SignalKind) -> impl Iterator<Item = &SignalEstimate> {
        self.entries.iter().filter(move |e| e.kind == kind)
    }

    /// Entries of both reports sorted by id; `a_hat` and `v0` are taken from `self`.
    pub fn merged(&self, other: &Self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().chain(&other.entries).cloned().collect();
        entries.sort_by_key(|e| e.id);
        Self { a_hat: self.a_hat, v0: self.v0, entries }
    }
}

/// Solves the symmetric positive semidefinite system `g x = rhs` by Cholesky, falling back to a
/// small ridge when the factorization fails or the system is badly conditioned. Numerically
/// singular systems are an error rather than a ridge solution.
pub fn solve_normal(g: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let k = g.nrows();
    if k == 0 {
        return Ok(DVector::zeros(0));
    }
    let attempt = |m: DMatrix<f64>| -> Option<DVector<f64>> {
        let ch = m.cholesky()?;
        let d = ch.l_dirty().diagonal();
        let (lo, hi) = d.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
        if lo == 0.0 || (hi / lo).powi(2) > MAX_CONDITION {
            return None;
        }
        Some(ch.solve(rhs))
    };
    if let Some(x) = attempt(g.clone()) {
        return Ok(x);
    }
    let lambda = RIDGE * g.trace() / k as f64;
    let eig = g.clone().symmetric_eigenvalues();
    let smallest = eig.min();
    if smallest <= f64::EPSILON * k as f64 * eig.max() {
        return Err(Error::Numerical(format!(
            "normal system is rank deficient beyond the ridge tolerance (smallest eigenvalue {smallest:.3e})"
        )));
    }
    let ridged = g + DMatrix::identity(k, k) * lambda;
    ridged
        .cholesky()
        .map(|ch| ch.solve(rhs))
        .ok_or_else(|| Error::Numerical("ridge-regularized normal system is not positive definite".into()))
}

/// Zeroes estimates below a per-kind threshold `max(0, floor - 2σ̄)`, where `σ̄²` is the mean
/// predicted variance of the estimable signals of that kind. Without a floor the threshold is `2σ̄`.
pub fn hard_threshold(report: &EstimateReport, theta_min: Option<f64>, gamma_min: Option<f64>) -> EstimateReport {
    let mut out = report.clone();
    for (kind, floor) in [(SignalKind::Coherent, theta_min), (SignalKind::Incoherent, gamma_min)] {
        let vars: Vec<f64> =
            report.of_kind(kind).filter(|e| e.estimable).map(|e| e.predicted_std * e.predicted_std).collect();
        if vars.is_empty() {
            continue;
        }
        let sigma = (vars.iter().sum::<f64>() / vars.len() as f64).sqrt();
        let threshold = match floor {
            Some(f) => (f - 2.0 * sigma).max(0.0),
            None => 2.0 * sigma,
        };
        for e in out.entries.iter_mut().filter(|e| e.kind == kind) {
            if e.estimate.abs() < threshold {
                e.estimate = 0.0;
                e.thresholded = true;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RamseyKind {
    Quadratic,
    Tilted,
}

/// Removes the pairwise `Z_a Z_b → Z_{a⊕b}` contributions from Ramsey estimates.
///
/// Quadratic: `θ̂²_c -= Σ θ̂²_a θ̂²_b`. Tilted: `θ̂_c -= Σ θ̂_a θ̂_b (cos((s_a-s_b)φ) - cos(s_c φ)) / sin(s_c φ)`.
/// Sums run over unordered pairs `a ≠ b` of estimated signals with `a ⊕ b = c`.
pub fn second_order_correct(
    report: &EstimateReport,
    signals: &SignalSet,
    kind: RamseyKind,
    phi: f64,
) -> Result<EstimateReport> {
    let mut by_mask: HashMap<Bitstring, usize> = HashMap::new();
    for (i, e) in report.entries.iter().enumerate() {
        let g = &signals.signals[e.id].generator;
        if !g.is_z_type() {
            return Err(Error::Input(format!("signal {} is not a Z-string", e.id)));
        }
        by_mask.insert(g.z_support(), i);
    }
    let masks: Vec<Bitstring> = report.entries.iter().map(|e| signals.signals[e.id].generator.z_support()).collect();
    let mut out = report.clone();
    for (ci, c) in masks.iter().enumerate() {
        let mut delta = 0.0;
        for (ai, a) in masks.iter().enumerate() {
            let b = a.xor(c);
            let Some(&bi) = by_mask.get(&b) else { continue };
            if ai >= bi || ai == ci || bi == ci {
                continue;
            }
            let (ea, eb) = (&report.entries[ai], &report.entries[bi]);
            delta += match kind {
                RamseyKind::Quadratic => ea.raw.max(0.0) * eb.raw.max(0.0),
                RamseyKind::Tilted => {
                    let (sa, sb, sc) = (a.weight() as f64, b.weight() as f64, c.weight() as f64);
                    let sin_c = (sc * phi).sin();
                    if sin_c.abs() < 1e-12 {
                        continue;
                    }
                    ea.estimate * eb.estimate * (((sa - sb) * phi).cos() - (sc * phi).cos()) / sin_c
                }
            };
        }
        if delta == 0.0 {
            continue;
        }
        let e = &mut out.entries[ci];
        match kind {
            RamseyKind::Quadratic => {
                e.raw -= delta;
                e.estimate = e.raw.max(0.0).sqrt();
            }
            RamseyKind::Tilted => {
                e.estimate -= delta;
                e.raw = e.estimate;
            }
        }
        e.corrected = true;
    }
    Ok(out)
}

/// Removes the coherent `Â θ²` share from incoherent coefficients on shared `(generator, t)` slots:
/// `γ̂ = (v - Âθ²) / (v - Âθ² + v_0)`, clipped at zero.
pub fn overlap_correct(
    incoherent: &EstimateReport,
    signals: &SignalSet,
    coherent_theta: &BTreeMap<usize, f64>,
) -> EstimateReport {
    let slot = |id: usize| -> (PauliString, usize) {
        let s = &signals.signals[id];
        (s.generator, s.t)
    };
    let thetas: HashMap<(PauliString, usize), f64> = coherent_theta.iter().map(|(&id, &th)| (slot(id), th)).collect();
    let mut out = incoherent.clone();
    for e in out.entries.iter_mut().filter(|e| e.kind == SignalKind::Incoherent) {
        if let Some(&th) = thetas.get(&slot(e.id)) {
            let v = e.raw - incoherent.a_hat * th * th;
            e.estimate = (v / (v + incoherent.v0)).max(0.0);
            e.corrected = true;
        }
    }
    out
}
