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

//! Least-squares inversion with dense response vectors (random-unitary and Hamiltonian dynamics).

use nalgebra::{DMatrix, DVector};

use super::{solve_normal, EstimateReport, SignalEstimate};
use crate::counts::BitstringCounts;
use crate::error::{Error, Result};
use crate::patterns::DensePatterns;
use crate::readout::confusion_correct_dense;
use crate::signal::SignalKind;

#[derive(Clone, Debug)]
pub struct DenseRun {
    pub counts: BitstringCounts,
    pub patterns: DensePatterns,
}

/// Stacks `V = [p0 | δp_α | k_β]` over circuits and solves `V^T V v = V^T f`.
/// `θ̂ = v_α / v_0` and `γ̂ = v_β / (v_0 + v_β)`. With `gamma_r > 0` the frequency vectors are
/// multiplied by the inverse confusion matrix first. Predicted deviations use the multinomial
/// sandwich covariance at the observed frequencies.
pub fn estimate_dense(runs: &[DenseRun], gamma_r: f64) -> Result<EstimateReport> {
    let first = runs.first().ok_or_else(|| Error::Input("no circuits supplied".into()))?;
    let n = first.patterns.n;
    let coh: Vec<usize> = first.patterns.coherent.iter().map(|c| c.0).collect();
    let inc: Vec<usize> = first.patterns.incoherent.iter().map(|c| c.0).collect();
    let k = 1 + coh.len() + inc.len();
    let dim = 1usize << n;

    let mut g = DMatrix::<f64>::zeros(k, k);
    let mut rhs = DVector::<f64>::zeros(k);
    let mut designs = Vec::with_capacity(runs.len());
    for run in runs {
        let p = &run.patterns;
        if p.n != n || run.counts.n != n {
            return Err(Error::QubitMismatch(run.counts.n, n));
        }
        let same = p.coherent.iter().map(|c| c.0).eq(coh.iter().copied())
            && p.incoherent.iter().map(|c| c.0).eq(inc.iter().copied());
        if !same {
            return Err(Error::Input("circuits disagree on the estimated signals".into()));
        }
        let mut v = DMatrix::<f64>::zeros(dim, k);
        v.set_column(0, &DVector::from_column_slice(&p.p0));
        for (j, col) in p.coherent.iter().chain(&p.incoherent).enumerate() {
            v.set_column(j + 1, &DVector::from_column_slice(&col.1));
        }
        let mut f = run.counts.dense_frequencies();
        confusion_correct_dense(&mut f, n, gamma_r)?;
        g += v.transpose() * &v;
        rhs += v.transpose() * DVector::from_vec(f);
        designs.push(v);
    }
    let x = solve_normal(&g, &rhs)?;
    let v0 = x[0];
    if v0 <= 0.0 || !v0.is_finite() {
        return Err(Error::Numerical(format!("fitted signal-free weight {v0} is not positive")));
    }

    let mut meat = DMatrix::<f64>::zeros(k, k);
    for (run, v) in runs.iter().zip(designs) {
        let mut w = v;
        for mut col in w.column_iter_mut() {
            let mut c: Vec<f64> = col.iter().copied().collect();
            confusion_correct_dense(&mut c, n, gamma_r)?;
            col.copy_from_slice(&c);
        }
        let p = run.counts.dense_frequencies();
        let mean = w.transpose() * DVector::from_column_slice(&p);
        let mut weighted = w.clone();
        for (i, mut row) in weighted.row_iter_mut().enumerate() {
            row *= p[i];
        }
        meat += (w.transpose() * weighted - &mean * mean.transpose()) / run.counts.shots;
    }
    let cov = match g.clone().cholesky() {
        Some(ch) => {
            let inv = ch.inverse();
            &inv * meat * &inv
        }
        None => DMatrix::zeros(k, k),
    };

    let mut entries = Vec::with_capacity(k - 1);
    for (j, &id) in coh.iter().enumerate() {
        let c = j + 1;
        entries.push(SignalEstimate {
            id,
            kind: SignalKind::Coherent,
            estimate: x[c] / v0,
            raw: x[c],
            predicted_std: cov[(c, c)].max(0.0).sqrt() / v0,
            estimable: true,
            thresholded: false,
            corrected: gamma_r > 0.0,
        });
    }
    for (j, &id) in inc.iter().enumerate() {
        let c = j + 1 + coh.len();
        let vb = x[c];
        let scale = v0 / (v0 + vb).powi(2);
        entries.push(SignalEstimate {
            id,
            kind: SignalKind::Incoherent,
            estimate: vb / (v0 + vb),
            raw: vb,
            predicted_std: cov[(c, c)].max(0.0).sqrt() * scale,
            estimable: true,
            thresholded: false,
            corrected: gamma_r > 0.0,
        });
    }
    entries.sort_by_key(|e| e.id);
    Ok(EstimateReport { a_hat: v0, v0, entries })
}
