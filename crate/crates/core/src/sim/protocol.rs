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

//! Sensing-circuit layouts.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::circuit::{Basis, Circuit, Element};
use super::haar::RucGates;
use super::hamiltonian::PauliSum;
use super::state::InitialState;
use crate::error::{Error, Result};
use crate::signal::{SignalKind, SignalSet};
use crate::tableau::CircuitFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    QuadRamsey,
    TiltedRamsey,
    CliffordZ,
    CliffordX,
    Ruc,
    Hamiltonian,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::QuadRamsey => "quad-ramsey",
            Protocol::TiltedRamsey => "tilted-ramsey",
            Protocol::CliffordZ => "clifford-z",
            Protocol::CliffordX => "clifford-x",
            Protocol::Ruc => "ruc",
            Protocol::Hamiltonian => "hamiltonian",
        }
    }
}

/// Scrambling resource consumed by a layout.
#[derive(Clone, Debug)]
pub enum Randomness<'a> {
    None,
    Family(&'a CircuitFamily),
    Ruc(&'a RucGates),
    Hamiltonian { h: Arc<PauliSum>, tau: f64 },
}

fn push_signals(c: &mut Circuit, signals: &SignalSet, t: usize) -> Result<()> {
    for s in signals.at_step(t) {
        let e = match s.kind {
            SignalKind::Coherent => {
                Element::PauliRotation { pauli: s.generator, theta: s.amplitude, signal: Some(s.id) }
            }
            SignalKind::Incoherent => {
                Element::PauliChannel { pauli: s.generator, gamma: s.amplitude, signal: Some(s.id) }
            }
        };
        c.push(e)?;
    }
    Ok(())
}

fn mismatch(p: Protocol) -> Error {
    Error::Input(format!("randomness does not match protocol {}", p.name()))
}

/// Builds the circuit for `protocol`. `phi` is the tilt angle and is only read by tilted Ramsey.
pub fn build_protocol_circuit(
    protocol: Protocol,
    signals: &SignalSet,
    randomness: &Randomness<'_>,
    phi: f64,
) -> Result<Circuit> {
    let n = signals.n;
    let steps = signals.t_steps;
    match (protocol, randomness) {
        (Protocol::QuadRamsey | Protocol::TiltedRamsey, Randomness::None) => {
            let mut c = Circuit::new(n, InitialState::Plus);
            for t in 1..=steps {
                push_signals(&mut c, signals, t)?;
            }
            c.push(if protocol == Protocol::QuadRamsey { Element::HadamardAll } else { Element::XRotationAll(phi) })?;
            Ok(c)
        }
        (Protocol::CliffordZ | Protocol::CliffordX, Randomness::Family(f)) => {
            if f.n() != n || f.t_steps() != steps {
                return Err(Error::Input(format!(
                    "circuit family is {} qubits x {} steps, signals are {n} x {steps}",
                    f.n(),
                    f.t_steps()
                )));
            }
            let mut c = Circuit::new(n, InitialState::Zero);
            for t in 1..=steps {
                c.push(Element::Clifford(Arc::new(f.layer(t).clone())))?;
                push_signals(&mut c, signals, t)?;
            }
            c.push(Element::Clifford(Arc::new(f.terminal().clone())))?;
            if protocol == Protocol::CliffordX {
                c.basis = Basis::X;
            }
            Ok(c)
        }
        (Protocol::Ruc, Randomness::Ruc(g)) => {
            if g.n != n || g.layers.len() != steps + 1 {
                return Err(mismatch(protocol));
            }
            let mut c = Circuit::new(n, InitialState::Zero);
            for (t, layer) in g.layers.iter().enumerate() {
                if t > 0 {
                    push_signals(&mut c, signals, t)?;
                }
                for gate in layer.iter().flatten() {
                    c.push(Element::HaarTwoQubit { u: gate.u.clone(), a: gate.a, b: gate.b })?;
                }
            }
            Ok(c)
        }
        (Protocol::Hamiltonian, Randomness::Hamiltonian { h, tau }) => {
            let mut c = Circuit::new(n, InitialState::PlusY);
            for t in 0..=steps {
                if t > 0 {
                    push_signals(&mut c, signals, t)?;
                }
                c.push(Element::Hamiltonian { h: h.clone(), tau: *tau })?;
            }
            Ok(c)
        }
        _ => Err(mismatch(protocol)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::make_pauli;
    use crate::signal::SignalSpec;
    use crate::sim::circuit::exact_distribution;
    use crate::tableau::FamilyKind;

    fn one(kind: SignalKind, label: &str, amp: f64) -> SignalSet {
        let s = SignalSpec { id: 0, kind, generator: make_pauli(label).unwrap(), t: 1, amplitude: amp };
        SignalSet::new(label.len(), 1, vec![s]).unwrap()
    }

    #[test]
    fn quad_single_z_signal() {
        let s = one(SignalKind::Coherent, "ZII", 0.3);
        let c = build_protocol_circuit(Protocol::QuadRamsey, &s, &Randomness::None, 0.0).unwrap();
        let p = exact_distribution(&c).unwrap();
        assert!((p[1] - 0.3f64.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn tilted_zero_signal_uniform() {
        let s = one(SignalKind::Coherent, "ZZI", 0.0);
        let c = build_protocol_circuit(Protocol::TiltedRamsey, &s, &Randomness::None, 1.1).unwrap();
        for v in exact_distribution(&c).unwrap() {
            assert!((v - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn clifford_zero_signal_returns_to_zero() {
        let s = one(SignalKind::Incoherent, "XYZI", 0.0);
        let f = CircuitFamily::sample(FamilyKind::GlobalUniform, 4, 1, 5).unwrap();
        let c = build_protocol_circuit(Protocol::CliffordZ, &s, &Randomness::Family(&f), 0.0).unwrap();
        let p = exact_distribution(&c).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
        assert!(build_protocol_circuit(Protocol::CliffordZ, &s, &Randomness::None, 0.0).is_err());
    }
}
