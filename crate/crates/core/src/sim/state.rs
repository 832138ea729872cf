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

//! Dense state vectors and gate kernels.

use num_complex::Complex64 as C64;

use crate::pauli::PauliString;
use crate::tableau::CliffordTableau;

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub(crate) fn quarter(k: u8) -> C64 {
    match k & 3 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Product states the protocols start from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialState {
    /// `|0...0⟩`
    Zero,
    /// `|+⟩^⊗n`
    Plus,
    /// `|+y⟩^⊗n`, the `+1` eigenstate of `Y` on each qubit.
    PlusY,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(n: usize, init: InitialState) -> Self {
        let dim = 1usize << n;
        let amps = match init {
            InitialState::Zero => {
                let mut v = vec![C64::new(0.0, 0.0); dim];
                v[0] = C64::new(1.0, 0.0);
                v
            }
            InitialState::Plus => vec![C64::new((dim as f64).sqrt().recip(), 0.0); dim],
            InitialState::PlusY => {
                let s = (dim as f64).sqrt().recip();
                (0..dim).map(|x| quarter(x.count_ones() as u8) * s).collect()
            }
        };
        Self { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), 1usize << n);
        Self { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let s = self.norm().recip();
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `ψ ← P ψ` including the phase of `p`.
    pub fn apply_pauli(&mut self, p: &PauliString) {
        let act = p.basis_action();
        let amps = &mut self.amps;
        if act.flip == 0 {
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= quarter(act.phase(i));
            }
            return;
        }
        for i in 0..amps.len() {
            let j = i ^ act.flip;
            if i < j {
                let (a, b) = (amps[i], amps[j]);
                amps[j] = quarter(act.phase(i)) * a;
                amps[i] = quarter(act.phase(j)) * b;
            }
        }
    }

    /// `ψ ← exp(-iθP) ψ = cosθ ψ - i sinθ Pψ` for Hermitian `p`.
    pub fn apply_rotation(&mut self, p: &PauliString, theta: f64) {
        if theta == 0.0 {
            return;
        }
        let act = p.basis_action();
        let (c, s) = (theta.cos(), theta.sin());
        let ms = -I * s;
        let amps = &mut self.amps;
        if act.flip == 0 {
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= c + ms * quarter(act.phase(i));
            }
            return;
        }
        for i in 0..amps.len() {
            let j = i ^ act.flip;
            if i < j {
                let (a, b) = (amps[i], amps[j]);
                amps[i] = a * c + ms * quarter(act.phase(j)) * b;
                amps[j] = b * c + ms * quarter(act.phase(i)) * a;
            }
        }
    }

    /// Normalized Walsh–Hadamard transform, i.e. `H^⊗n`.
    pub fn hadamard_all(&mut self) {
        let dim = self.amps.len();
        let mut h = 1;
        while h < dim {
            for block in (0..dim).step_by(2 * h) {
                for i in block..block + h {
                    let (a, b) = (self.amps[i], self.amps[i + h]);
                    self.amps[i] = a + b;
                    self.amps[i + h] = a - b;
                }
            }
            h *= 2;
        }
        let s = (dim as f64).sqrt().recip();
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    /// Applies the 2×2 matrix `u` (row-major) on qubit `k`.
    pub fn apply_1q(&mut self, k: usize, u: &[[C64; 2]; 2]) {
        let bit = 1usize << k;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = u[0][0] * a + u[0][1] * b;
                self.amps[i | bit] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    /// Applies the 4×4 matrix `u` on qubits `(qa, qb)`; local index bit 0 is `qa`, bit 1 is `qb`.
    pub fn apply_2q(&mut self, qa: usize, qb: usize, u: &[[C64; 4]; 4]) {
        let (ba, bb) = (1usize << qa, 1usize << qb);
        for i in 0..self.amps.len() {
            if i & (ba | bb) == 0 {
                let idx = [i, i | ba, i | bb, i | ba | bb];
                let v = idx.map(|j| self.amps[j]);
                for (r, &j) in idx.iter().enumerate() {
                    self.amps[j] = u[r][0] * v[0] + u[r][1] * v[1] + u[r][2] * v[2] + u[r][3] * v[3];
                }
            }
        }
    }

    /// `exp(-i (φ/2) X)` on every qubit.
    pub fn x_rotation_all(&mut self, phi: f64) {
        let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
        let u = [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]];
        for k in 0..self.n {
            self.apply_1q(k, &u);
        }
    }

    /// Applies the Clifford `U` whose Heisenberg tableau is `tab`, up to a global phase.
    ///
    /// Builds `U|0⟩` from its stabilizers and walks the basis in Gray-code order using the
    /// images `U X_k U†`; cost `O(4^n)`.
    pub fn apply_clifford(&mut self, tab: &CliffordTableau) {
        let n = self.n;
        let dim = 1usize << n;
        let inv = tab.inverse();
        let mut col = StateVector {
            n,
            amps: (0..dim)
                .map(|x| {
                    let t = (x as f64 + 1.0) * 0.618_033_988_749_894_9;
                    C64::from_polar(1.0, std::f64::consts::TAU * t.fract())
                })
                .collect(),
        };
        for k in 0..n {
            let g = inv.z_image(k);
            let mut gv = col.clone();
            gv.apply_pauli(g);
            for (a, b) in col.amps.iter_mut().zip(&gv.amps) {
                *a = (*a + b) * 0.5;
            }
        }
        col.normalize();
        let mut out = vec![C64::new(0.0, 0.0); dim];
        let mut x = 0usize;
        for step in 0..dim {
            let amp = self.amps[x];
            if amp != C64::new(0.0, 0.0) {
                for (o, c) in out.iter_mut().zip(&col.amps) {
                    *o += amp * c;
                }
            }
            if step + 1 == dim {
                break;
            }
            let k = (step + 1).trailing_zeros() as usize;
            col.apply_pauli(inv.x_image(k));
            x ^= 1 << k;
        }
        self.amps = out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::make_pauli;

    #[test]
    fn plus_y_is_y_eigenstate() {
        let mut s = StateVector::new(3, InitialState::PlusY);
        let before = s.clone();
        s.apply_pauli(&make_pauli("YYY").unwrap());
        assert!((s.inner(&before) - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_rotation_is_identity() {
        let mut s = StateVector::new(3, InitialState::PlusY);
        let before = s.clone();
        s.apply_rotation(&make_pauli("XZY").unwrap(), 0.0);
        assert_eq!(s, before);
    }

    #[test]
    fn hadamard_all_maps_zero_to_plus() {
        let mut s = StateVector::new(4, InitialState::Zero);
        s.hadamard_all();
        let plus = StateVector::new(4, InitialState::Plus);
        assert!((s.inner(&plus).norm() - 1.0).abs() < 1e-12);
    }
}
