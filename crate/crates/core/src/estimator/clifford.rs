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

//! Multi-circuit least-squares estimators for global and local Clifford protocols.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::{solve_normal, EstimateReport, SignalEstimate};
use crate::counts::BitstringCounts;
use crate::error::{Error, Result};
use crate::pauli::Bitstring;
use crate::patterns::Pattern;
use crate::signal::SignalKind;

/// Counts of one circuit with the closed-form pattern of every estimated signal, aligned with the
/// id list passed to the estimator.
#[derive(Clone, Debug)]
pub struct CircuitRun {
    pub counts: BitstringCounts,
    pub patterns: Vec<Pattern>,
}

fn check_runs(ids: &[usize], runs: &[CircuitRun]) -> Result<usize> {
    let n = runs.first().ok_or_else(|| Error::Input("no circuits supplied".into()))?.counts.n;
    for r in runs {
        if r.patterns.len() != ids.len() {
            return Err(Error::Input(format!("{} patterns for {} signals", r.patterns.len(), ids.len())));
        }
        if r.counts.n != n {
            return Err(Error::QubitMismatch(r.counts.n, n));
        }
        if r.counts.shots <= 0.0 {
            return Err(Error::Input("a circuit has no shots".into()));
        }
    }
    Ok(n)
}

fn point(p: &Pattern) -> Result<Bitstring> {
    match p {
        Pattern::PointMass { z } => Ok(*z),
        _ => Err(Error::Input("incoherent Clifford estimation needs point-mass patterns".into())),
    }
}

/// Ids whose columns coincide in every circuit.
fn collisions<K: std::hash::Hash + Eq>(keys: Vec<K>, ids: &[usize]) -> Vec<usize> {
    let mut seen: HashMap<K, usize> = HashMap::new();
    let mut out = Vec::new();
    for (col, key) in keys.into_iter().enumerate() {
        if let Some(&first) = seen.get(&key) {
            if first > 0 && !out.contains(&ids[first - 1]) {
                out.push(ids[first - 1]);
            }
            out.push(ids[col - 1]);
        } else {
            seen.insert(key, col);
        }
    }
    out
}

/// Incoherent rates from z-basis runs. Column 0 is the point mass at `0`; column `β` the codeword
/// of signal `β` in each circuit. `γ̂ = v_β / (v_β + v_0)` and `Â = v_0`.
pub fn estimate_clifford_incoherent(ids: &[usize], runs: &[CircuitRun]) -> Result<EstimateReport> {
    let n = check_runs(ids, runs)?;
    let k = ids.len() + 1;
    let words: Vec<Vec<Bitstring>> = runs
        .iter()
        .map(|r| {
            std::iter::once(Ok(Bitstring::zeros(n))).chain(r.patterns.iter().map(point)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let keys: Vec<Vec<Bitstring>> = (0..k).map(|c| words.iter().map(|w| w[c]).collect()).collect();
    let hit = collisions(keys, ids);
    if !hit.is_empty() {
        return Err(Error::Collision(hit));
    }

    let mut g = DMatrix::<f64>::zeros(k, k);
    let mut rhs = DVector::<f64>::zeros(k);
    for (run, w) in runs.iter().zip(&words) {
        let mut groups: HashMap<Bitstring, Vec<usize>> = HashMap::new();
        for (c, z) in w.iter().enumerate() {
            groups.entry(*z).or_default().push(c);
        }
        for (z, cols) in &groups {
            let f = run.counts.frequency(z);
            for &i in cols {
                rhs[i] += f;
                for &j in cols {
                    g[(i, j)] += 1.0;
                }
            }
        }
    }
    let v = solve_normal(&g, &rhs)?;
    let v0 = v[0];
    if v0 <= 0.0 || !v0.is_finite() {
        return Err(Error::Numerical(format!("fitted signal-free weight {v0} is not positive")));
    }
    let nc = runs.len() as f64;
    let inv_shots: f64 = runs.iter().map(|r| 1.0 / r.counts.shots).sum();
    let entries = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| {
            let vb = v[i + 1];
            let gamma = vb / (vb + v0);
            SignalEstimate {
                id,
                kind: SignalKind::Incoherent,
                estimate: gamma,
                raw: vb,
                predicted_std: (gamma.max(0.0) * inv_shots / (nc * nc * v0)).sqrt(),
                estimable: true,
                thresholded: false,
                corrected: false,
            }
        })
        .collect();
    Ok(EstimateReport { a_hat: v0, v0, entries })
}

fn signed(p: &Pattern) -> Result<(Bitstring, i8, f64)> {
    match p {
        Pattern::SignedUniform { mask, sigma, magnitude } => Ok((*mask, *sigma, *magnitude)),
        _ => Err(Error::Input("coherent Clifford estimation needs signed-uniform patterns".into())),
    }
}

/// Coherent angles from x-basis runs, using the closed-form normal system
/// `(V^T V)_{00} = n_c / 2^N`, `(V^T V)_{αα'} = Σ_n σσ' m m' 2^N [a = a']`, and `θ̂ = v_α / Â`.
/// With `gamma_r > 0` each circuit's contribution is divided by `(1-2γ_r)^{|a|}`.
pub fn estimate_clifford_coherent(ids: &[usize], runs: &[CircuitRun], a_hat: f64, gamma_r: f64) -> Result<EstimateReport> {
    let n = check_runs(ids, runs)?;
    if a_hat <= 0.0 {
        return Err(Error::Numerical(format!("signal fidelity {a_hat} is not positive")));
    }
    let dim = 2f64.powi(n as i32);
    let pats: Vec<Vec<(Bitstring, i8, f64)>> =
        runs.iter().map(|r| r.patterns.iter().map(signed).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let estimable: Vec<bool> = (0..ids.len()).map(|i| pats.iter().any(|p| p[i].1 != 0)).collect();
    let cols: Vec<usize> = (0..ids.len()).filter(|&i| estimable[i]).collect();

    let keys: Vec<Vec<Option<(Bitstring, i8)>>> = std::iter::once(vec![None; runs.len()])
        .chain(cols.iter().map(|&i| {
            let s0 = pats.iter().map(|p| p[i].1).find(|&s| s != 0).unwrap_or(1);
            pats.iter().map(|p| (p[i].1 != 0).then(|| (p[i].0, p[i].1 * s0))).collect()
        }))
        .collect();
    let col_ids: Vec<usize> = cols.iter().map(|&i| ids[i]).collect();
    let hit = collisions(keys, &col_ids);
    if !hit.is_empty() {
        return Err(Error::Collision(hit));
    }

    let k = cols.len() + 1;
    let mut g = DMatrix::<f64>::zeros(k, k);
    let mut rhs = DVector::<f64>::zeros(k);
    let mut noise = vec![0.0; cols.len()];
    for (run, p) in runs.iter().zip(&pats) {
        g[(0, 0)] += 1.0 / dim;
        rhs[0] += run.counts.frequencies().map(|(_, f)| f).sum::<f64>() / dim;
        let mut groups: HashMap<Bitstring, Vec<usize>> = HashMap::new();
        for (c, &i) in cols.iter().enumerate() {
            let (mask, sigma, m) = p[i];
            if sigma == 0 {
                continue;
            }
            groups.entry(mask).or_default().push(c);
            let boost = (1.0 - 2.0 * gamma_r).powi(-(mask.weight() as i32));
            let dot: f64 = run
                .counts
                .frequencies()
                .map(|(z, f)| if z.overlap_parity(&mask) == 0 { f } else { -f })
                .sum();
            rhs[c + 1] += boost * f64::from(sigma) * m * dot;
            noise[c] += boost * boost * m * m / run.counts.shots;
        }
        for members in groups.values() {
            for &a in members {
                for &b in members {
                    let (_, sa, ma) = p[cols[a]];
                    let (_, sb, mb) = p[cols[b]];
                    g[(a + 1, b + 1)] += f64::from(sa * sb) * ma * mb * dim;
                }
            }
        }
    }
    let v = solve_normal(&g, &rhs)?;
    let mut entries = Vec::with_capacity(ids.len());
    let mut c = 0;
    for (i, &id) in ids.iter().enumerate() {
        let (estimate, raw, std) = if estimable[i] {
            c += 1;
            let diag = g[(c, c)];
            (v[c] / a_hat, v[c], noise[c - 1].sqrt() / diag / a_hat)
        } else {
            (0.0, 0.0, 0.0)
        };
        entries.push(SignalEstimate {
            id,
            kind: SignalKind::Coherent,
            estimate,
            raw,
            predicted_std: std,
            estimable: estimable[i],
            thresholded: false,
            corrected: gamma_r > 0.0,
        });
    }
    Ok(EstimateReport { a_hat, v0: v[0], entries })
}
