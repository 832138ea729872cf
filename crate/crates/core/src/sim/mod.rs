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

//! State-vector reference simulator.

pub mod circuit;
pub mod haar;
pub mod hamiltonian;
pub mod protocol;
pub mod sampling;
pub mod state;

pub use circuit::{exact_distribution, run_pure, stabilizer_codewords, Basis, Circuit, Element};
pub use haar::{haar_two_qubit, RucGates};
pub use hamiltonian::{kim_huse_hamiltonian, propagate_hamiltonian, PauliSum};
pub use protocol::{build_protocol_circuit, Protocol, Randomness};
pub use sampling::{sample_distribution, sample_shots};
pub use state::{InitialState, StateVector};
