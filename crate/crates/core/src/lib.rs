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

//! Multiparameter quantum sensing with scrambling dynamics.
//!
//! The crate builds Ramsey, Clifford, random-unitary and Hamiltonian sensing circuits, samples
//! noisy measurement records, and recovers many coherent and incoherent signal amplitudes with
//! linear estimators.

#![allow(clippy::needless_range_loop)]

pub mod counts;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod patterns;
pub mod pauli;
pub mod readout;
pub mod rng;
pub mod signal;
pub mod sim;
pub mod tableau;
pub mod theory;

pub use counts::BitstringCounts;
pub use error::{Error, Result};
pub use pauli::{make_pauli, overlap_parity, Bitstring, Pauli, PauliString};
pub use signal::{signal_fidelity_a, SignalKind, SignalSet, SignalSpec};
pub use tableau::{compose, conjugate, inverse, CircuitFamily, CliffordTableau, FamilyKind};
