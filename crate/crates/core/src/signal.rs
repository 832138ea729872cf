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

//! Estimation targets: coherent angles and incoherent Pauli-jump rates per time step.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalKind {
    Coherent,
    Incoherent,
}

/// One parameter: `exp(-i θ P)` (coherent) or `ρ → (1-γ)ρ + γ PρP` (incoherent) at step `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub id: usize,
    pub kind: SignalKind,
    pub generator: PauliString,
    /// Time step in `1..=T`.
    pub t: usize,
    pub amplitude: f64,
}

impl SignalSpec {
    fn validate(&self, n: usize, t_steps: usize) -> Result<()> {
        if self.generator.n() != n {
            return Err(Error::QubitMismatch(self.generator.n(), n));
        }
        if self.generator.is_identity() || self.generator.phase() != 0 {
            return Err(Error::Input(format!(
                "signal {}: generator must be a non-identity phase-0 Pauli",
                self.id
            )));
        }
        if self.t == 0 || self.t > t_steps {
            return Err(Error::Input(format!("signal {}: time step {} outside 1..={t_steps}", self.id, self.t)));
        }
        let a = self.amplitude;
        let ok = match self.kind {
            SignalKind::Coherent => a.abs() < std::f64::consts::FRAC_PI_2,
            SignalKind::Incoherent => (0.0..1.0).contains(&a),
        };
        if !ok || !a.is_finite() {
            return Err(Error::Input(format!("signal {}: amplitude {a} out of range", self.id)));
        }
        Ok(())
    }
}

/// Ordered signal list; ids are dense indices `0..len`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalSet {
    pub n: usize,
    pub t_steps: usize,
    pub signals: Vec<SignalSpec>,
}

impl SignalSet {
    /// Validates and assigns dense ids in the given order.
    pub fn new(n: usize, t_steps: usize, mut signals: Vec<SignalSpec>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, s) in signals.iter_mut().enumerate() {
            s.id = i;
            s.validate(n, t_steps)?;
            if !seen.insert((s.kind, s.generator, s.t)) {
                return Err(Error::Input(format!(
                    "duplicate signal ({:?}, {}, t={})",
                    s.kind, s.generator, s.t
                )));
            }
        }
        Ok(Self { n, t_steps, signals })
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn of_kind(&self, kind: SignalKind) -> impl Iterator<Item = &SignalSpec> {
        self.signals.iter().filter(move |s| s.kind == kind)
    }

    /// Signals acting at step `t`, ascending id.
    pub fn at_step(&self, t: usize) -> impl Iterator<Item = &SignalSpec> {
        self.signals.iter().filter(move |s| s.t == t)
    }

    /// `Σθ² + Σγ`, the perturbative-regime indicator.
    pub fn strength(&self) -> f64 {
        self.signals
            .iter()
            .map(|s| match s.kind {
                SignalKind::Coherent => s.amplitude * s.amplitude,
                SignalKind::Incoherent => s.amplitude,
            })
            .sum()
    }

    /// Copy with every amplitude set to zero.
    pub fn zeroed(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.signals {
            s.amplitude = 0.0;
        }
        out
    }

    pub fn with_amplitude(&self, id: usize, amplitude: f64) -> Self {
        let mut out = self.clone();
        out.signals[id].amplitude = amplitude;
        out
    }
}

/// Probability that no signal event occurs: `∏ cos²θ · ∏ (1-γ)`.
pub fn signal_fidelity_a(s: &SignalSet) -> f64 {
    s.signals
        .iter()
        .map(|x| match x.kind {
            SignalKind::Coherent => x.amplitude.cos().powi(2),
            SignalKind::Incoherent => 1.0 - x.amplitude,
        })
        .product()
}

/// Amplitude ranges for nonzero signals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ranges {
    pub theta: (f64, f64),
    pub gamma: (f64, f64),
}

impl Ranges {
    /// `|θ| ∈ [0.1, 0.15]`, `γ ∈ [0.07, 0.1]`.
    pub const FIG3: Ranges = Ranges { theta: (0.1, 0.15), gamma: (0.07, 0.1) };
}

/// How many candidates of each kind receive a nonzero amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Sparsity {
    pub coherent: usize,
    pub incoherent: usize,
    /// Keep nonzero coherent and incoherent signals on different `(generator, t)` slots.
    #[serde(default)]
    pub disjoint: bool,
}

/// Candidate set over `pool × {1..T}` for the requested kinds, with a random sparse subset of
/// nonzero amplitudes. Coherent signs are uniform.
pub fn random_sparse_instance<R: Rng + ?Sized>(
    pool: &[PauliString],
    t_steps: usize,
    kinds: &[SignalKind],
    sparsity: Sparsity,
    ranges: Ranges,
    rng: &mut R,
) -> Result<SignalSet> {
    let n = pool.first().ok_or_else(|| Error::Input("empty generator pool".into()))?.n();
    let slots: Vec<(usize, PauliString)> =
        (1..=t_steps).flat_map(|t| pool.iter().map(move |p| (t, *p))).collect();
    let mut signals = Vec::with_capacity(slots.len() * kinds.len());
    let mut taken = vec![false; slots.len()];
    for &kind in kinds {
        let want = match kind {
            SignalKind::Coherent => sparsity.coherent,
            SignalKind::Incoherent => sparsity.incoherent,
        };
        let free: Vec<usize> =
            (0..slots.len()).filter(|&i| !(sparsity.disjoint && taken[i])).collect();
        if want > free.len() {
            return Err(Error::Input(format!("cannot place {want} nonzero {kind:?} signals")));
        }
        let mut amp = vec![0.0; slots.len()];
        for j in sample(rng, free.len(), want) {
            let slot = free[j];
            taken[slot] = true;
            amp[slot] = match kind {
                SignalKind::Coherent => {
                    let mag = rng.random_range(ranges.theta.0..=ranges.theta.1);
                    if rng.random::<bool>() { mag } else { -mag }
                }
                SignalKind::Incoherent => rng.random_range(ranges.gamma.0..=ranges.gamma.1),
            };
        }
        for (i, (t, p)) in slots.iter().enumerate() {
            signals.push(SignalSpec { id: 0, kind, generator: *p, t: *t, amplitude: amp[i] });
        }
    }
    SignalSet::new(n, t_steps, signals)
}

/// Generator pools used by the bundled experiments.
pub mod pools {
    use super::*;
    use crate::pauli::Bitstring;

    /// `X_i, Y_i, Z_i` on every qubit plus open-chain `X_iX_{i+1}` and `Z_iZ_{i+1}`.
    pub fn local_xyz(n: usize) -> Vec<PauliString> {
        let mut out = Vec::with_capacity(5 * n);
        for letter in [Pauli::X, Pauli::Y, Pauli::Z] {
            out.extend((0..n).map(|k| PauliString::single(n, k, letter)));
        }
        for letter in [Pauli::X, Pauli::Z] {
            for k in 0..n.saturating_sub(1) {
                let mut p = PauliString::single(n, k, letter);
                p.set(k + 1, letter);
                out.push(p);
            }
        }
        out
    }

    /// Single-body `Z_i` and open-chain `Z_iZ_{i+1}`.
    pub fn ramsey_z(n: usize) -> Vec<PauliString> {
        let mut out: Vec<_> = (0..n).map(|k| PauliString::single(n, k, Pauli::Z)).collect();
        out.extend(ramsey_z_two_body(n));
        out
    }

    pub fn ramsey_z_single(n: usize) -> Vec<PauliString> {
        (0..n).map(|k| PauliString::single(n, k, Pauli::Z)).collect()
    }

    pub fn ramsey_z_two_body(n: usize) -> Vec<PauliString> {
        (0..n.saturating_sub(1))
            .map(|k| {
                let mut b = Bitstring::zeros(n);
                b.set(k, true);
                b.set(k + 1, true);
                PauliString::z_string(&b)
            })
            .collect()
    }

    /// `count` distinct uniformly random non-identity Pauli strings.
    pub fn random_paulis<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Result<Vec<PauliString>> {
        if n < 32 && count as u128 >= (1u128 << (2 * n)) {
            return Err(Error::Input(format!("only {} non-identity strings exist", (1u128 << (2 * n)) - 1)));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let mut p = PauliString::identity(n);
            for k in 0..n {
                p.set(k, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)]);
            }
            if !p.is_identity() && seen.insert(p) {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// `count` distinct random strings of 1 to `max_body` identical letters from {X, Y, Z}.
    pub fn random_uniform_letter_strings<R: Rng + ?Sized>(
        n: usize,
        max_body: usize,
        count: usize,
        rng: &mut R,
    ) -> Result<Vec<PauliString>> {
        let mut total = 0usize;
        let mut binom = 1usize;
        for b in 1..=max_body.min(n) {
            binom = binom * (n - b + 1) / b;
            total += 3 * binom;
        }
        if count > total {
            return Err(Error::Input(format!("only {total} distinct strings available")));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let body = rng.random_range(1..=max_body.min(n));
            let letter = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
            let mut p = PauliString::identity(n);
            for k in sample(rng, n, body) {
                p.set(k, letter);
            }
            if seen.insert(p) {
                out.push(p);
            }
        }
        Ok(out)
    }
}
