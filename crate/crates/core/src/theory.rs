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

//! Closed-form predictions: variances, circuit counts, collision bounds, the readout transition
//! and the brickwork lightcone correlator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Quadratic,
    Tilted,
    CliffordIncoherent,
    CliffordCoherent,
    /// Local random-unitary or Hamiltonian dynamics; needs a calibrated `beta`.
    Ruc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionInput {
    pub estimator: Estimator,
    /// Total shots.
    pub m: f64,
    /// Signal fidelity.
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default)]
    pub gamma_r: f64,
    #[serde(default)]
    pub phi: f64,
    /// Pauli weights `s_a`, one per signal (tilted Ramsey).
    #[serde(default)]
    pub weights: Vec<u32>,
    /// Incoherent rates, one per signal.
    #[serde(default)]
    pub gammas: Vec<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl PredictionInput {
    pub fn new(estimator: Estimator, m: f64, a: f64) -> Self {
        Self { estimator, m, a, gamma_r: 0.0, phi: 0.0, weights: Vec::new(), gammas: Vec::new(), beta: None }
    }
}

/// Per-signal predicted variance. Tilted predictions include the readout-correction factor
/// `(1-2γ_r)^{-2 s_a}`.
pub fn predict_variance(input: &PredictionInput) -> Result<Vec<f64>> {
    let PredictionInput { m, a, .. } = *input;
    if m <= 0.0 || a <= 0.0 {
        return Err(Error::Input("M and A must be positive".into()));
    }
    let count = input.weights.len().max(input.gammas.len()).max(1);
    Ok(match input.estimator {
        Estimator::Quadratic => vec![1.0 / (4.0 * a * m); count],
        Estimator::Tilted => input
            .weights
            .iter()
            .map(|&s| {
                let sin2 = (f64::from(s) * input.phi).sin().powi(2);
                let c = (1.0 - 2.0 * input.gamma_r).powi(2 * s as i32);
                1.0 / (4.0 * sin2 * c * m)
            })
            .collect(),
        Estimator::CliffordIncoherent => input.gammas.iter().map(|g| g / (a * m)).collect(),
        Estimator::CliffordCoherent => vec![1.0 / (2.0 * m * a * a); count],
        Estimator::Ruc => {
            let beta = input.beta.ok_or_else(|| Error::Input("random-unitary prediction needs beta".into()))?;
            vec![beta / (a * a * m); count]
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitKind {
    Incoherent,
    Coherent,
}

/// Smallest circuit count meeting the collision (incoherent) or insensitivity (coherent) target.
pub fn required_circuits(kind: CircuitKind, k: usize, n: usize, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Input(format!("delta = {delta} outside (0, 1)")));
    }
    match kind {
        CircuitKind::Incoherent => {
            if k < 2 {
                return Err(Error::Input("incoherent circuit count needs K >= 2".into()));
            }
            if n == 0 {
                return Err(Error::Input("N must be positive".into()));
            }
            let pairs = (k * (k - 1)) as f64 / 2.0;
            let nc = ((pairs / delta).log2() / n as f64).ceil().max(1.0) as usize;
            // guard the ceiling against rounding on exact powers of two
            Ok(if collision_bound(k, n, nc - 1) <= delta && nc > 1 { nc - 1 } else { nc })
        }
        CircuitKind::Coherent => {
            if k == 0 {
                return Err(Error::Input("coherent circuit count needs K >= 1".into()));
            }
            let mut nc = 1;
            while insensitivity_failure(k, nc) > delta {
                nc += 1;
            }
            Ok(nc)
        }
    }
}

/// `1 - (1 - 2^{-n_c})^K`: probability that some coherent signal is invisible in every circuit.
pub fn insensitivity_failure(k: usize, n_c: usize) -> f64 {
    -((-(0.5f64.powi(n_c as i32))).ln_1p() * k as f64).exp_m1()
}

/// `K(K-1)/2 · 2^{-N n_c}`, capped at one.
pub fn collision_bound(k: usize, n: usize, n_c: usize) -> f64 {
    if k < 2 {
        return 0.0;
    }
    let pairs = (k * (k - 1)) as f64 / 2.0;
    (pairs * 2f64.powf(-((n * n_c) as f64))).min(1.0)
}

/// Shots at which quadratic Ramsey under readout noise returns to standard scaling.
pub fn readout_transition_m_star(gamma_r: f64, n: usize, theta: f64) -> Result<f64> {
    if theta <= 0.0 {
        return Err(Error::Input("theta must be positive".into()));
    }
    Ok(gamma_r * (gamma_r * n as f64).exp() / theta.powi(4))
}

fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Haar-averaged squared correlation of two insertions separated by `(l_u, l_v)` in lightcone
/// coordinates, with depth `τ = l_u + l_v - 1` and local dimension `q`.
pub fn weingarten_d(l_u: usize, l_v: usize, q: f64) -> f64 {
    if l_u == 0 || l_v == 0 {
        return 0.0;
    }
    let tau = (l_u + l_v - 1) as i64;
    let mut sum = 0.0;
    for u in 0..l_u as i64 {
        for v in 0..l_v as i64 {
            let bracket = binom(tau - 1, v) * binom(tau - 1, u) - binom(tau - 1, v - 1) * binom(tau - 1, u - 1);
            sum += q.powi(-(2 * tau - 2 * u - 2 * v) as i32) * bracket;
        }
    }
    let q2 = q * q;
    q2 / (q2 * q2 - 1.0) * (q / (q2 + 1.0)).powi(2 * tau as i32 - 2) * sum
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_arithmetic() {
        let v = predict_variance(&PredictionInput::new(Estimator::Quadratic, 1e4, 1.0)).unwrap();
        assert!((v[0] - 2.5e-5).abs() < 1e-18);
        let v = predict_variance(&PredictionInput::new(Estimator::CliffordCoherent, 2.0, 1.0)).unwrap();
        assert_eq!(v[0], 0.25);
        let mut inp = PredictionInput::new(Estimator::CliffordIncoherent, 10.0, 1.0);
        inp.gammas = vec![0.0];
        assert_eq!(predict_variance(&inp).unwrap(), vec![0.0]);
    }

    #[test]
    fn transition_scale() {
        let m = readout_transition_m_star(0.05, 10, 0.1).unwrap();
        assert!((m - 824.36).abs() < 0.1);
        assert_eq!(readout_transition_m_star(0.0, 10, 0.1).unwrap(), 0.0);
        let r = readout_transition_m_star(0.05, 10, 0.2).unwrap();
        assert!((m / r - 16.0).abs() < 1e-9);
    }

    #[test]
    fn circuit_counts() {
        assert_eq!(required_circuits(CircuitKind::Coherent, 580, 12, 0.01).unwrap(), 16);
        assert_eq!(required_circuits(CircuitKind::Coherent, 1, 12, 0.5).unwrap(), 1);
        assert!(required_circuits(CircuitKind::Coherent, 1, 12, 1.0).is_err());
        assert_eq!(collision_bound(2, 10, 1), 2f64.powi(-10));
        assert_eq!(collision_bound(1, 10, 1), 0.0);
    }
}
