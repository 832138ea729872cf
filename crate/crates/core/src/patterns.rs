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

//! First-order responses of output distributions to individual signals.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{Bitstring, PauliString};
use crate::signal::{SignalKind, SignalSet};
use crate::sim::circuit::{run_pure, Circuit, Element};
use crate::tableau::{CircuitFamily, CliffordTableau};

/// Finite-difference step for dense coherent responses.
pub const FD_STEP: f64 = 1e-4;
/// Relative agreement required between the `h` and `h/2` central differences.
pub const FD_RTOL: f64 = 1e-6;
/// Below this `|sin(sφ)|` a tilted direction is treated as insensitive.
pub const SIN_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Pattern {
    /// Indicator of a single bitstring.
    PointMass { z: Bitstring },
    /// `σ (-1)^{z·a} m`.
    SignedUniform { mask: Bitstring, sigma: i8, magnitude: f64 },
    Dense(Vec<f64>),
}

impl Pattern {
    pub fn value(&self, z: &Bitstring) -> f64 {
        match self {
            Pattern::PointMass { z: w } => f64::from(u8::from(w == z)),
            Pattern::SignedUniform { mask, sigma, magnitude } => {
                if *sigma == 0 {
                    0.0
                } else {
                    let s = if z.overlap_parity(mask) == 0 { 1.0 } else { -1.0 };
                    f64::from(*sigma) * s * magnitude
                }
            }
            Pattern::Dense(v) => v[z.index()],
        }
    }

    /// Materializes the pattern over all `2^n` bitstrings.
    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        match self {
            Pattern::Dense(v) => v.clone(),
            _ => (0..1u64 << n).map(|i| self.value(&Bitstring::from_index(n, i))).collect(),
        }
    }

    pub fn is_sensitive(&self) -> bool {
        !matches!(self, Pattern::SignedUniform { sigma: 0, .. })
    }
}

fn z_mask(p: &PauliString) -> Result<Bitstring> {
    if p.is_identity() || !p.is_z_type() {
        return Err(Error::Input(format!("{p} is not a non-identity Z-string")));
    }
    Ok(p.z_support())
}

/// Quadratic Ramsey: the signal on `Z_a` lands on the single bitstring `a`.
pub fn quad_pattern(generator: &PauliString) -> Result<Pattern> {
    Ok(Pattern::PointMass { z: z_mask(generator)? })
}

/// Tilted Ramsey response `(-1)^{z·a} sin(s_a φ) / 2^{N-1}`.
pub fn tilted_pattern(generator: &PauliString, phi: f64) -> Result<Pattern> {
    let mask = z_mask(generator)?;
    let s = (f64::from(mask.weight()) * phi).sin();
    let sigma = if s.abs() < SIN_EPS { 0 } else if s > 0.0 { 1 } else { -1 };
    let magnitude = if sigma == 0 { 0.0 } else { s.abs() / 2f64.powi(generator.n() as i32 - 1) };
    Ok(Pattern::SignedUniform { mask, sigma, magnitude })
}

/// Global Clifford, z basis: the jump `P` maps `|0⟩` to the x-support of `prefix† P prefix`.
pub fn clifford_incoherent_pattern(prefix: &CliffordTableau, p: &PauliString) -> Result<Pattern> {
    let (q, _) = prefix.conjugate(p)?;
    Ok(Pattern::PointMass { z: q.x_support() })
}

/// Global Clifford, x basis: `Im[s i^{n_y} (-1)^{z·a}] / 2^{N-1}` for `prefix† P prefix = s P'`.
pub fn clifford_coherent_pattern(prefix: &CliffordTableau, p: &PauliString) -> Result<Pattern> {
    let (q, sign) = prefix.conjugate(p)?;
    let mask = q.x_support();
    let sigma = match q.count_y() % 4 {
        1 => sign,
        3 => -sign,
        _ => 0,
    };
    let magnitude = if sigma == 0 { 0.0 } else { 1.0 / 2f64.powi(p.n() as i32 - 1) };
    Ok(Pattern::SignedUniform { mask, sigma, magnitude })
}

/// Closed-form patterns of every `kind` signal for one Clifford family, in id order.
pub fn family_patterns(family: &CircuitFamily, signals: &SignalSet, kind: SignalKind) -> Result<Vec<(usize, Pattern)>> {
    signals
        .of_kind(kind)
        .map(|s| {
            let prefix = family.prefix(s.t);
            let p = match kind {
                SignalKind::Incoherent => clifford_incoherent_pattern(prefix, &s.generator)?,
                SignalKind::Coherent => clifford_coherent_pattern(prefix, &s.generator)?,
            };
            Ok((s.id, p))
        })
        .collect()
}

/// Dense responses of one circuit: the signal-free distribution, `δp` per coherent signal and
/// `k` per incoherent signal (both keyed by signal id).
#[derive(Clone, Debug, PartialEq)]
pub struct DensePatterns {
    pub n: usize,
    pub p0: Vec<f64>,
    pub coherent: Vec<(usize, Vec<f64>)>,
    pub incoherent: Vec<(usize, Vec<f64>)>,
}

/// Circuit with every signal amplitude set to zero.
fn zero_signals(c: &Circuit) -> Circuit {
    let mut c = c.clone();
    for e in &mut c.elements {
        match e {
            Element::PauliRotation { theta, .. } => *theta = 0.0,
            Element::PauliChannel { gamma, .. } => *gamma = 0.0,
            _ => {}
        }
    }
    c
}

fn with_theta(c: &Circuit, signal: usize, value: f64) -> Circuit {
    let mut c = c.clone();
    for e in &mut c.elements {
        if let Element::PauliRotation { theta, signal: Some(s), .. } = e {
            if *s == signal {
                *theta = value;
            }
        }
    }
    c
}

fn probabilities(c: &Circuit, jumps: &[bool]) -> Result<Vec<f64>> {
    Ok(run_pure(c, jumps)?.probabilities())
}

fn central_difference(c: &Circuit, signal: usize, h: f64, nchan: usize) -> Result<Vec<f64>> {
    let jumps = vec![false; nchan];
    let plus = probabilities(&with_theta(c, signal, h), &jumps)?;
    let minus = probabilities(&with_theta(c, signal, -h), &jumps)?;
    Ok(plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect())
}

/// Exact `p0` and `k`; `δp` by central differences at `h` and `h/2`, returning the Richardson
/// combination after checking that the two agree.
pub fn dense_patterns(c: &Circuit, signals: &SignalSet) -> Result<DensePatterns> {
    let base = zero_signals(c);
    let chans = base.channels();
    let nchan = chans.len();
    let p0 = probabilities(&base, &vec![false; nchan])?;

    let coherent: Vec<Result<(usize, Vec<f64>)>> = signals
        .of_kind(SignalKind::Coherent)
        .map(|s| s.id)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|id| {
            let d1 = central_difference(&base, id, FD_STEP, nchan)?;
            let d2 = central_difference(&base, id, FD_STEP / 2.0, nchan)?;
            let scale = d2.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            let gap = d1.iter().zip(&d2).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if gap > FD_RTOL * scale && gap > 1e-12 {
                return Err(Error::Numerical(format!(
                    "finite-difference response of signal {id} did not converge (gap {gap:.3e})"
                )));
            }
            Ok((id, d1.iter().zip(&d2).map(|(a, b)| (4.0 * b - a) / 3.0).collect()))
        })
        .collect();

    let incoherent: Vec<Result<(usize, Vec<f64>)>> = signals
        .of_kind(SignalKind::Incoherent)
        .map(|s| s.id)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|id| {
            let k = chans
                .iter()
                .position(|ch| ch.2 == Some(id))
                .ok_or_else(|| Error::Input(format!("signal {id} has no channel in the circuit")))?;
            let mut jumps = vec![false; nchan];
            jumps[k] = true;
            Ok((id, probabilities(&base, &jumps)?))
        })
        .collect();

    Ok(DensePatterns {
        n: c.n,
        p0,
        coherent: coherent.into_iter().collect::<Result<_>>()?,
        incoherent: incoherent.into_iter().collect::<Result<_>>()?,
    })
}
