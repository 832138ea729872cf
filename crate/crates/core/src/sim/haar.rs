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

//! Haar-random two-qubit unitaries and random-unitary brickwork circuits.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tableau::brick_pairs;

pub type Unitary4 = [[C64; 4]; 4];

/// Haar-distributed `U(4)` element: Gram–Schmidt on a complex Ginibre matrix, which yields the
/// QR factor with a positive real diagonal in `R` and therefore the correct phase convention.
pub fn haar_two_qubit<R: Rng + ?Sized>(rng: &mut R) -> Unitary4 {
    let mut cols = [[C64::new(0.0, 0.0); 4]; 4];
    for col in cols.iter_mut() {
        for z in col.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
        }
    }
    for j in 0..4 {
        for k in 0..j {
            let proj: C64 = (0..4).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..4 {
                let v = cols[k][i];
                cols[j][i] -= proj * v;
            }
        }
        let nrm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= nrm);
    }
    let mut u = [[C64::new(0.0, 0.0); 4]; 4];
    for (i, row) in u.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z = cols[j][i];
        }
    }
    u
}

/// A gate of a random-unitary brickwork row acting on `(a, b)`.
#[derive(Clone, Debug)]
pub struct HaarGate {
    pub a: usize,
    pub b: usize,
    pub u: Arc<Unitary4>,
}

/// `T + 1` scrambling layers, each two brickwork rows (odd offset first).
#[derive(Clone, Debug)]
pub struct RucGates {
    pub n: usize,
    pub seed: u64,
    pub layers: Vec<Vec<Vec<HaarGate>>>,
}

impl RucGates {
    pub fn sample(n: usize, t_steps: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input("random-unitary brickwork needs n >= 2".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = (0..=t_steps)
            .map(|_| {
                [1usize, 0]
                    .iter()
                    .map(|&offset| {
                        brick_pairs(n, offset)
                            .into_iter()
                            .map(|(a, b)| HaarGate { a, b, u: Arc::new(haar_two_qubit(&mut rng)) })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self { n, seed, layers })
    }
}
