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

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("dimension cap exceeded: {n} qubits > {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("signals collide in every circuit: {0:?}")]
    Collision(Vec<usize>),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that should map to the numerical-failure exit path.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Collision(_) | Error::Numerical(_) | Error::Budget(_))
    }
}
