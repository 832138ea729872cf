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

//! Circuit description, pure-trajectory evolution and exact output distributions.

use std::sync::Arc;

use rayon::prelude::*;

use super::hamiltonian::{propagate_hamiltonian, PauliSum};
use super::haar::Unitary4;
use super::state::{InitialState, StateVector};
use crate::error::{Error, Result};
use crate::pauli::{Bitstring, PauliString};
use crate::tableau::{compose, CliffordTableau};

/// Default state-vector cap.
pub const DEFAULT_MAX_QUBITS: usize = 14;
/// Largest number of active channels enumerated by [`exact_distribution`].
pub const MAX_ENUMERATED_CHANNELS: usize = 20;
/// Krylov tolerance used for Hamiltonian segments.
pub const KRYLOV_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub enum Element {
    Clifford(Arc<CliffordTableau>),
    HadamardAll,
    /// `exp(-i (φ/2) X)` on every qubit.
    XRotationAll(f64),
    /// `exp(-i θ P)`.
    PauliRotation { pauli: PauliString, theta: f64, signal: Option<usize> },
    /// `ρ → (1-γ)ρ + γ PρP`, realized per trajectory by a jump flag.
    PauliChannel { pauli: PauliString, gamma: f64, signal: Option<usize> },
    HaarTwoQubit { u: Arc<Unitary4>, a: usize, b: usize },
    Hamiltonian { h: Arc<PauliSum>, tau: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

#[derive(Clone, Debug)]
pub struct Circuit {
    pub n: usize,
    pub initial: InitialState,
    pub elements: Vec<Element>,
    pub basis: Basis,
}

impl Circuit {
    pub fn new(n: usize, initial: InitialState) -> Self {
        Self { n, initial, elements: Vec::new(), basis: Basis::Z }
    }

    pub fn push(&mut self, e: Element) -> Result<()> {
        let n = self.n;
        let check = |m: usize| if m == n { Ok(()) } else { Err(Error::QubitMismatch(m, n)) };
        match &e {
            Element::Clifford(t) => check(t.n())?,
            Element::PauliRotation { pauli, .. } | Element::PauliChannel { pauli, .. } => {
                check(pauli.n())?;
                if !pauli.is_hermitian() {
                    return Err(Error::Input("rotation and channel generators must be Hermitian".into()));
                }
            }
            Element::HaarTwoQubit { a, b, .. } if *a >= n || *b >= n || a == b => {
                return Err(Error::Input(format!("bad gate sites ({a}, {b})")));
            }
            Element::Hamiltonian { h, .. } => check(h.n())?,
            _ => {}
        }
        self.elements.push(e);
        Ok(())
    }

    /// Channels in circuit order as `(element index, γ, signal id)`.
    pub fn channels(&self) -> Vec<(usize, f64, Option<usize>)> {
        self.elements
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e {
                Element::PauliChannel { gamma, signal, .. } => Some((i, *gamma, *signal)),
                _ => None,
            })
            .collect()
    }

    pub fn channel_count(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, Element::PauliChannel { .. })).count()
    }

    /// Position of the channel carrying `signal` in the channel ordering.
    pub fn channel_of_signal(&self, signal: usize) -> Option<usize> {
        self.channels().iter().position(|c| c.2 == Some(signal))
    }

    /// Indices (in channel order) of channels with `γ > 0`.
    pub fn active_channels(&self) -> Vec<usize> {
        self.channels().iter().enumerate().filter(|(_, c)| c.1 > 0.0).map(|(i, _)| i).collect()
    }
}

/// Pending Clifford `U` with `state = U φ`.
struct Frame {
    tab: Option<CliffordTableau>,
}

impl Frame {
    fn push(&mut self, c: &CliffordTableau) {
        self.tab = Some(match &self.tab {
            None => c.clone(),
            Some(u) => compose(c, u).expect("equal sizes"),
        });
    }

    /// Moves `P` behind the frame: `P U = U (U† P U)`.
    fn pull_back(&self, p: &PauliString) -> PauliString {
        match &self.tab {
            None => *p,
            Some(u) => u.conj_raw(p),
        }
    }

    fn flush(&mut self, psi: &mut StateVector) {
        if let Some(u) = self.tab.take() {
            let n = u.n();
            if u.is_identity() {
                return;
            }
            if u == CliffordTableau::hadamard_all(n) {
                psi.hadamard_all();
            } else {
                psi.apply_clifford(&u);
            }
        }
    }
}

/// Evolves the initial state along one trajectory; channel `k` applies its Pauli iff `jumps[k]`.
pub fn run_pure(c: &Circuit, jumps: &[bool]) -> Result<StateVector> {
    run_pure_capped(c, jumps, DEFAULT_MAX_QUBITS)
}

pub fn run_pure_capped(c: &Circuit, jumps: &[bool], cap: usize) -> Result<StateVector> {
    if c.n > cap {
        return Err(Error::DimensionCap { n: c.n, cap });
    }
    if jumps.len() != c.channel_count() {
        return Err(Error::Input(format!(
            "jump pattern length {} != channel count {}",
            jumps.len(),
            c.channel_count()
        )));
    }
    let mut psi = StateVector::new(c.n, c.initial);
    let mut frame = Frame { tab: None };
    let mut ch = 0;
    for e in &c.elements {
        match e {
            Element::Clifford(t) => frame.push(t),
            Element::HadamardAll => frame.push(&CliffordTableau::hadamard_all(c.n)),
            Element::PauliRotation { pauli, theta, .. } => {
                if *theta != 0.0 {
                    let q = frame.pull_back(pauli);
                    let theta = if q.phase() == 0 { *theta } else { -*theta };
                    psi.apply_rotation(&q.unsigned(), theta);
                }
            }
            Element::PauliChannel { pauli, .. } => {
                if jumps[ch] {
                    psi.apply_pauli(&frame.pull_back(pauli));
                }
                ch += 1;
            }
            Element::XRotationAll(phi) => {
                frame.flush(&mut psi);
                psi.x_rotation_all(*phi);
            }
            Element::HaarTwoQubit { u, a, b } => {
                frame.flush(&mut psi);
                psi.apply_2q(*a, *b, u);
            }
            Element::Hamiltonian { h, tau } => {
                frame.flush(&mut psi);
                psi = propagate_hamiltonian(h, *tau, &psi, KRYLOV_TOL)?;
            }
        }
    }
    if c.basis == Basis::X {
        frame.push(&CliffordTableau::hadamard_all(c.n));
    }
    frame.flush(&mut psi);
    Ok(psi)
}

/// Probability weight of a jump pattern over the listed active channels.
pub(crate) fn pattern_weight(gammas: &[f64], mask: u64) -> f64 {
    gammas
        .iter()
        .enumerate()
        .map(|(k, g)| if (mask >> k) & 1 == 1 { *g } else { 1.0 - g })
        .product()
}

/// Exact output distribution by enumerating all jump patterns of active channels.
pub fn exact_distribution(c: &Circuit) -> Result<Vec<f64>> {
    if c.n > DEFAULT_MAX_QUBITS {
        return Err(Error::DimensionCap { n: c.n, cap: DEFAULT_MAX_QUBITS });
    }
    let chans = c.channels();
    let active = c.active_channels();
    if active.len() > MAX_ENUMERATED_CHANNELS || (c.n > 10 && active.len() > 20) {
        return Err(Error::Budget(format!("{} active channels exceed the enumeration budget", active.len())));
    }
    let gammas: Vec<f64> = active.iter().map(|&k| chans[k].1).collect();
    let total = 1u64 << active.len();
    let chunk = (total / 256).max(1);
    let nchunks = total.div_ceil(chunk);
    let dim = 1usize << c.n;
    let partials: Vec<Result<Vec<f64>>> = (0..nchunks)
        .into_par_iter()
        .map(|ci| {
            let mut acc = vec![0.0; dim];
            let mut jumps = vec![false; chans.len()];
            for mask in ci * chunk..((ci + 1) * chunk).min(total) {
                let w = pattern_weight(&gammas, mask);
                if w == 0.0 {
                    continue;
                }
                for (k, &a) in active.iter().enumerate() {
                    jumps[a] = (mask >> k) & 1 == 1;
                }
                let psi = run_pure(c, &jumps)?;
                for (o, a) in acc.iter_mut().zip(psi.amplitudes()) {
                    *o += w * a.norm_sqr();
                }
            }
            Ok(acc)
        })
        .collect();
    let mut out = vec![0.0; dim];
    for p in partials {
        for (o, v) in out.iter_mut().zip(p?) {
            *o += v;
        }
    }
    Ok(out)
}

/// For circuits made only of Clifford layers and Pauli channels, started in `|0⟩`, whose
/// Clifford product is the identity and measured in `z`: the outcome bitstring of each channel's
/// jump. Any trajectory's outcome is the XOR of the fired channels' bitstrings.
pub fn stabilizer_codewords(c: &Circuit) -> Option<Vec<Bitstring>> {
    if c.initial != InitialState::Zero || c.basis != Basis::Z {
        return None;
    }
    let mut frame = Frame { tab: None };
    let mut out = Vec::new();
    for e in &c.elements {
        match e {
            Element::Clifford(t) => frame.push(t),
            Element::HadamardAll => frame.push(&CliffordTableau::hadamard_all(c.n)),
            Element::PauliChannel { pauli, .. } => out.push(frame.pull_back(pauli).x_support()),
            Element::PauliRotation { theta, .. } if *theta == 0.0 => {}
            _ => return None,
        }
    }
    match &frame.tab {
        Some(t) if !t.is_identity() => None,
        _ => Some(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::make_pauli;

    #[test]
    fn empty_circuit_keeps_state() {
        let c = Circuit::new(3, InitialState::PlusY);
        let psi = run_pure(&c, &[]).unwrap();
        assert_eq!(psi, StateVector::new(3, InitialState::PlusY));
    }

    #[test]
    fn cap_and_pattern_length_checked() {
        let c = Circuit::new(15, InitialState::Zero);
        assert!(matches!(run_pure(&c, &[]), Err(Error::DimensionCap { .. })));
        let mut c = Circuit::new(2, InitialState::Zero);
        c.push(Element::PauliChannel { pauli: make_pauli("XI").unwrap(), gamma: 0.1, signal: None }).unwrap();
        assert!(run_pure(&c, &[]).is_err());
    }

    #[test]
    fn single_channel_two_point_distribution() {
        let mut c = Circuit::new(3, InitialState::Zero);
        c.push(Element::PauliChannel { pauli: make_pauli("XIX").unwrap(), gamma: 0.25, signal: None }).unwrap();
        let p = exact_distribution(&c).unwrap();
        assert!((p[0] - 0.75).abs() < 1e-15);
        assert!((p[0b101] - 0.25).abs() < 1e-15);
    }
}
