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

//! Pauli-sum Hamiltonians and Krylov time evolution.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::state::{quarter, StateVector};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Real linear combination of Hermitian Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

/// Kim–Huse transverse field.
pub const KIM_HUSE_HX: f64 = 0.904_508_497_187_473_7;
/// Kim–Huse longitudinal field.
pub const KIM_HUSE_HZ: f64 = 0.809_016_994_374_947_4;

impl PauliSum {
    pub fn new(n: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        for (_, p) in &terms {
            if p.n() != n {
                return Err(Error::QubitMismatch(p.n(), n));
            }
            if !p.is_hermitian() {
                return Err(Error::Input("Hamiltonian terms must be Hermitian".into()));
            }
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// `out = H ψ`.
    pub fn apply(&self, psi: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|o| *o = C64::new(0.0, 0.0));
        for (c, p) in &self.terms {
            let act = p.basis_action();
            for (i, a) in psi.iter().enumerate() {
                out[i ^ act.flip] += quarter(act.phase(i)) * (*a * *c);
            }
        }
    }

    /// Sum of absolute coefficients, an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for (c, p) in &self.terms {
            let act = p.basis_action();
            for i in 0..dim {
                m[(i ^ act.flip, i)] += quarter(act.phase(i)) * *c;
            }
        }
        m
    }
}

/// `H = -Σ Z_i Z_{i+1} - h_x Σ X_i - h_z Σ Z_i` on a ring.
///
/// For `n = 2` both ring bonds are the same pair, so the `ZZ` coefficient totals `-2`.
pub fn kim_huse_hamiltonian(n: usize) -> Result<PauliSum> {
    if n < 2 {
        return Err(Error::Input("Kim–Huse chain needs n >= 2".into()));
    }
    let mut terms = Vec::with_capacity(3 * n);
    for i in 0..n {
        let mut zz = PauliString::single(n, i, Pauli::Z);
        zz.set((i + 1) % n, Pauli::Z);
        terms.push((-1.0, zz));
    }
    for i in 0..n {
        terms.push((-KIM_HUSE_HX, PauliString::single(n, i, Pauli::X)));
    }
    for i in 0..n {
        terms.push((-KIM_HUSE_HZ, PauliString::single(n, i, Pauli::Z)));
    }
    PauliSum::new(n, terms)
}

const MAX_KRYLOV: usize = 40;
const MAX_RESTARTS: usize = 200;

/// Lanczos basis and tridiagonal coefficients for `H` started at unit vector `v0`.
struct Lanczos {
    basis: Vec<Vec<C64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// Norm of the residual after the last basis vector; zero on invariant-subspace breakdown.
    tail: f64,
}

fn lanczos(h: &PauliSum, v0: Vec<C64>, m_max: usize) -> Lanczos {
    let dim = v0.len();
    let mut basis = vec![v0];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut w = vec![C64::new(0.0, 0.0); dim];
    loop {
        let j = basis.len() - 1;
        h.apply(&basis[j], &mut w);
        let a: f64 = basis[j].iter().zip(&w).map(|(v, x)| (v.conj() * x).re).sum();
        alpha.push(a);
        // Full reorthogonalization keeps the small basis numerically orthonormal.
        for _ in 0..2 {
            for v in &basis {
                let proj: C64 = v.iter().zip(&w).map(|(p, x)| p.conj() * x).sum();
                w.iter_mut().zip(v).for_each(|(x, p)| *x -= proj * p);
            }
        }
        let b = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if b < 1e-13 || basis.len() == m_max || basis.len() == dim {
            return Lanczos { basis, alpha, beta, tail: if b < 1e-13 { 0.0 } else { b } };
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

impl Lanczos {
    fn eigen(&self) -> SymmetricEigen<f64, nalgebra::Dyn> {
        let m = self.alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = self.alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = self.beta[i];
                t[(i + 1, i)] = self.beta[i];
            }
        }
        SymmetricEigen::new(t)
    }
}

/// `e^{-iHτ} ψ` by restarted Lanczos with a posteriori error control; the result is renormalized.
pub fn propagate_hamiltonian(h: &PauliSum, tau: f64, psi: &StateVector, tol: f64) -> Result<StateVector> {
    if tol <= 0.0 {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    if h.n() != psi.n() {
        return Err(Error::QubitMismatch(h.n(), psi.n()));
    }
    if tau == 0.0 {
        return Ok(psi.clone());
    }
    let mut cur: Vec<C64> = psi.amplitudes().to_vec();
    let mut done = 0.0;
    let mut dt = tau.signum() * tau.abs().min(8.0 / h.norm_bound().max(1e-12));
    for _ in 0..MAX_RESTARTS {
        let nrm = cur.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let v0: Vec<C64> = cur.iter().map(|x| x / nrm).collect();
        let lz = lanczos(h, v0, MAX_KRYLOV);
        let eig = lz.eigen();
        let m = lz.alpha.len();
        let remaining = tau - done;
        if dt.abs() > remaining.abs() {
            dt = remaining;
        }
        let (y, step) = loop {
            // y = Q exp(-i dt Λ) Qᵀ e1
            let coeff: Vec<C64> = (0..m)
                .map(|k| C64::from_polar(eig.eigenvectors[(0, k)], -dt * eig.eigenvalues[k]))
                .collect();
            let y: DVector<C64> =
                DVector::from_fn(m, |i, _| (0..m).map(|k| coeff[k] * eig.eigenvectors[(i, k)]).sum());
            let err = lz.tail * y[m - 1].norm();
            if err <= tol * (dt / tau).abs().max(1e-3) || lz.tail == 0.0 {
                break (y, dt);
            }
            dt *= 0.5;
            if dt.abs() < tau.abs() * 1e-9 {
                return Err(Error::Numerical("Krylov propagation failed to converge".into()));
            }
        };
        let mut next = vec![C64::new(0.0, 0.0); cur.len()];
        for (k, v) in lz.basis.iter().enumerate() {
            let c = y[k] * nrm;
            next.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
        }
        cur = next;
        done += step;
        if (tau - done).abs() <= tau.abs() * 1e-14 {
            let mut out = StateVector::from_amplitudes(psi.n(), cur);
            out.normalize();
            return Ok(out);
        }
        dt = step * 1.5;
    }
    Err(Error::Numerical("Krylov propagation exceeded the restart cap".into()))
}
