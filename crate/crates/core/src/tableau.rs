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

//! Clifford unitaries as signed Heisenberg-picture tableaux.
//!
//! A [`CliffordTableau`] for `C` stores the images `C† X_k C` and `C† Z_k C`, so
//! [`CliffordTableau::conjugate`] returns `C† P C`. [`compose`]`(a, b)` represents the product
//! `AB` ("apply `b`, then `a`"); its conjugation map runs `P` through `a` first and `b` second.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, WORDS};

/// Signed images of the single-qubit generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordTableau {
    n: usize,
    x_img: Vec<PauliString>,
    z_img: Vec<PauliString>,
    y_img: Vec<PauliString>,
}

fn y_images(x: &[PauliString], z: &[PauliString]) -> Vec<PauliString> {
    x.iter()
        .zip(z)
        .map(|(a, b)| {
            let p = a.mul_unchecked(b);
            p.with_phase(p.phase() + 1)
        })
        .collect()
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        let x: Vec<_> = (0..n).map(|k| PauliString::single(n, k, Pauli::X)).collect();
        let z: Vec<_> = (0..n).map(|k| PauliString::single(n, k, Pauli::Z)).collect();
        Self::from_parts(n, x, z)
    }

    fn from_parts(n: usize, x_img: Vec<PauliString>, z_img: Vec<PauliString>) -> Self {
        let y_img = y_images(&x_img, &z_img);
        Self { n, x_img, z_img, y_img }
    }

    /// Builds from explicit images, validating Hermiticity and the commutation relations.
    pub fn from_images(x_img: Vec<PauliString>, z_img: Vec<PauliString>) -> Result<Self> {
        let n = x_img.len();
        if z_img.len() != n || n == 0 {
            return Err(Error::Input("need n X-images and n Z-images".into()));
        }
        if let Some(p) = x_img.iter().chain(&z_img).find(|p| p.n() != n) {
            return Err(Error::QubitMismatch(p.n(), n));
        }
        if x_img.iter().chain(&z_img).any(|p| !p.is_hermitian()) {
            return Err(Error::Input("tableau images must be Hermitian".into()));
        }
        let t = Self::from_parts(n, x_img, z_img);
        if !t.is_valid() {
            return Err(Error::Input("images violate the Pauli commutation relations".into()));
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, k: usize) -> &PauliString {
        &self.x_img[k]
    }

    pub fn z_image(&self, k: usize) -> &PauliString {
        &self.z_img[k]
    }

    /// Checks that `x_k` anticommutes with `z_k` and every other pair commutes.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let xz = self.x_img[i].commutes_unchecked(&self.z_img[j]);
                if xz == (i == j) {
                    return false;
                }
                if j > i
                    && (!self.x_img[i].commutes_unchecked(&self.x_img[j])
                        || !self.z_img[i].commutes_unchecked(&self.z_img[j]))
                {
                    return false;
                }
            }
        }
        true
    }

    /// `C† P C` including phase; `p` may carry any phase.
    #[inline]
    pub(crate) fn conj_raw(&self, p: &PauliString) -> PauliString {
        let mut acc = PauliString::identity(self.n).with_phase(p.phase());
        let (xw, zw) = (p.x_words(), p.z_words());
        for w in 0..WORDS {
            let mut bits = xw[w] | zw[w];
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let k = w * 64 + b;
                let img = match ((xw[w] >> b) & 1, (zw[w] >> b) & 1) {
                    (1, 0) => &self.x_img[k],
                    (0, 1) => &self.z_img[k],
                    _ => &self.y_img[k],
                };
                acc = acc.mul_unchecked(img);
            }
        }
        acc
    }

    /// Returns `C† P C` as an unsigned Pauli and a sign in `{+1, -1}`.
    pub fn conjugate(&self, p: &PauliString) -> Result<(PauliString, i8)> {
        if p.n() != self.n {
            return Err(Error::QubitMismatch(p.n(), self.n));
        }
        if !p.is_hermitian() {
            return Err(Error::Input("conjugate expects a Hermitian Pauli".into()));
        }
        let r = self.conj_raw(p);
        Ok((r.unsigned(), if r.phase() == 0 { 1 } else { -1 }))
    }

    /// Tableau of `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        compose(self, other)
    }

    pub fn inverse(&self) -> Self {
        let n = self.n;
        let mut x_out = Vec::with_capacity(n);
        let mut z_out = Vec::with_capacity(n);
        for target in [Pauli::X, Pauli::Z] {
            for k in 0..n {
                // Coefficients of the generator expansion follow from symplectic products with
                // the images: X_j appears iff the target anticommutes with z_img[j], and so on.
                let mut q = PauliString::identity(n);
                for j in 0..n {
                    let bit_of = |p: &PauliString| {
                        let words = if target == Pauli::X { p.z_words() } else { p.x_words() };
                        (words[k / 64] >> (k % 64)) & 1 == 1
                    };
                    let xj = bit_of(&self.z_img[j]);
                    let zj = bit_of(&self.x_img[j]);
                    let letter = match (xj, zj) {
                        (false, false) => Pauli::I,
                        (true, false) => Pauli::X,
                        (true, true) => Pauli::Y,
                        (false, true) => Pauli::Z,
                    };
                    q.set(j, letter);
                }
                let img = self.conj_raw(&q);
                debug_assert_eq!(img.unsigned(), PauliString::single(n, k, target));
                let out = q.with_phase((4 - img.phase()) % 4);
                if target == Pauli::X {
                    x_out.push(out);
                } else {
                    z_out.push(out);
                }
            }
        }
        Self::from_parts(n, x_out, z_out)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// `H` on every qubit.
    pub fn hadamard_all(n: usize) -> Self {
        let x: Vec<_> = (0..n).map(|k| PauliString::single(n, k, Pauli::Z)).collect();
        let z: Vec<_> = (0..n).map(|k| PauliString::single(n, k, Pauli::X)).collect();
        Self::from_parts(n, x, z)
    }

    pub fn hadamard(n: usize, k: usize) -> Self {
        let mut t = Self::identity(n);
        t.x_img[k] = PauliString::single(n, k, Pauli::Z);
        t.z_img[k] = PauliString::single(n, k, Pauli::X);
        Self::from_parts(n, t.x_img, t.z_img)
    }

    /// Phase gate `S = diag(1, i)`: `S† X S = -Y`.
    pub fn phase_gate(n: usize, k: usize) -> Self {
        let mut t = Self::identity(n);
        t.x_img[k] = PauliString::single(n, k, Pauli::Y).with_phase(2);
        Self::from_parts(n, t.x_img, t.z_img)
    }

    pub fn cnot(n: usize, control: usize, target: usize) -> Self {
        assert_ne!(control, target);
        let mut t = Self::identity(n);
        let mut xc = PauliString::single(n, control, Pauli::X);
        xc.set(target, Pauli::X);
        let mut zt = PauliString::single(n, target, Pauli::Z);
        zt.set(control, Pauli::Z);
        t.x_img[control] = xc;
        t.z_img[target] = zt;
        Self::from_parts(n, t.x_img, t.z_img)
    }

    /// Line-oriented text form: a header `n <N>`, then the X images, then the Z images.
    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for p in self.x_img.iter().chain(&self.z_img) {
            let sign = if p.phase() == 0 { '+' } else { '-' };
            let _ = writeln!(s, "{sign}{}", p.label());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Input("empty tableau text".into()))?;
        let n: usize = header
            .strip_prefix("n ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Input(format!("bad tableau header {header:?}")))?;
        let images: Vec<PauliString> = lines.map(str::parse).collect::<Result<_>>()?;
        if images.len() != 2 * n {
            return Err(Error::Input(format!("expected {} images, found {}", 2 * n, images.len())));
        }
        let z = images[n..].to_vec();
        let x = images[..n].to_vec();
        Self::from_images(x, z)
    }
}

/// Tableau of the product `AB` (apply `b`, then `a`).
pub fn compose(a: &CliffordTableau, b: &CliffordTableau) -> Result<CliffordTableau> {
    if a.n != b.n {
        return Err(Error::QubitMismatch(a.n, b.n));
    }
    let x = a.x_img.iter().map(|p| b.conj_raw(p)).collect();
    let z = a.z_img.iter().map(|p| b.conj_raw(p)).collect();
    Ok(CliffordTableau::from_parts(a.n, x, z))
}

pub fn inverse(a: &CliffordTableau) -> CliffordTableau {
    a.inverse()
}

/// `(C† P C, sign)` for Hermitian `p`.
pub fn conjugate(c: &CliffordTableau, p: &PauliString) -> Result<(PauliString, i8)> {
    c.conjugate(p)
}

type Gf2 = Vec<Vec<u8>>;

fn gf2_matmul(a: &Gf2, b: &Gf2) -> Gf2 {
    let (r, m, c) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0u8; c]; r];
    for i in 0..r {
        for k in 0..m {
            if a[i][k] == 1 {
                for j in 0..c {
                    out[i][j] ^= b[k][j];
                }
            }
        }
    }
    out
}

/// Inverse of a unit lower-triangular matrix over GF(2).
fn inverse_unit_lower(l: &Gf2) -> Gf2 {
    let n = l.len();
    let mut inv = vec![vec![0u8; n]; n];
    for col in 0..n {
        for i in 0..n {
            let mut v = u8::from(i == col);
            for k in 0..i {
                v ^= l[i][k] & inv[k][col];
            }
            inv[i][col] = v;
        }
    }
    inv
}

fn fill_tril<R: Rng + ?Sized>(m: &mut Gf2, rng: &mut R, symmetric: bool) {
    let n = m.len();
    for i in 0..n {
        for j in 0..i {
            let v = u8::from(rng.random::<bool>());
            m[i][j] = v;
            if symmetric {
                m[j][i] = v;
            }
        }
    }
}

/// Quantum Mallows sample: Hadamard flags and a permutation.
fn sample_qmallows<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Vec<bool>, Vec<usize>) {
    let mut had = vec![false; n];
    let mut perm = vec![0usize; n];
    let mut inds: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let m = n - i;
        let eps = 4f64.powi(-(m as i32));
        let r = 1.0 - rng.random::<f64>();
        let index = (-(r + (1.0 - r) * eps).log2().ceil()) as usize;
        let index = index.min(2 * m - 1);
        had[i] = index < m;
        let k = if index < m { index } else { 2 * m - index - 1 };
        perm[i] = inds.remove(k);
    }
    (had, perm)
}

fn block_table(delta: &Gf2, gamma: &Gf2) -> Gf2 {
    let n = delta.len();
    let prod = gf2_matmul(gamma, delta);
    let inv = inverse_unit_lower(delta);
    let mut t = vec![vec![0u8; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            t[i][j] = delta[i][j];
            t[n + i][j] = prod[i][j];
            t[n + i][n + j] = inv[j][i];
        }
    }
    t
}

/// Exactly uniform random Clifford, signs included, via the Bravyi–Maslov canonical form.
pub fn sample_uniform_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordTableau {
    assert!(n >= 1, "need at least one qubit");
    let (had, perm) = sample_qmallows(n, rng);
    let mut gamma1 = vec![vec![0u8; n]; n];
    let mut gamma2 = vec![vec![0u8; n]; n];
    for i in 0..n {
        gamma1[i][i] = u8::from(rng.random::<bool>());
    }
    for i in 0..n {
        gamma2[i][i] = u8::from(rng.random::<bool>());
    }
    let ident = |i: usize, j: usize| u8::from(i == j);
    let mut delta1: Gf2 = (0..n).map(|i| (0..n).map(|j| ident(i, j)).collect()).collect();
    let mut delta2 = delta1.clone();
    fill_tril(&mut gamma1, rng, true);
    fill_tril(&mut gamma2, rng, true);
    fill_tril(&mut delta1, rng, false);
    fill_tril(&mut delta2, rng, false);

    let table1 = block_table(&delta1, &gamma1);
    let table2 = block_table(&delta2, &gamma2);
    let mut table: Gf2 = perm
        .iter()
        .map(|&p| table2[p].clone())
        .chain(perm.iter().map(|&p| table2[n + p].clone()))
        .collect();
    for i in 0..n {
        if had[i] {
            table.swap(i, n + i);
        }
    }
    let sym = gf2_matmul(&table1, &table);

    let row_to_pauli = |row: &[u8], sign: bool| {
        let mut p = PauliString::identity(n);
        for k in 0..n {
            let letter = match (row[k], row[n + k]) {
                (0, 0) => Pauli::I,
                (1, 0) => Pauli::X,
                (1, 1) => Pauli::Y,
                _ => Pauli::Z,
            };
            p.set(k, letter);
        }
        p.with_phase(if sign { 2 } else { 0 })
    };
    let signs: Vec<bool> = (0..2 * n).map(|_| rng.random()).collect();
    let x = (0..n).map(|i| row_to_pauli(&sym[i], signs[i])).collect();
    let z = (0..n).map(|i| row_to_pauli(&sym[n + i], signs[n + i])).collect();
    CliffordTableau::from_parts(n, x, z)
}

/// Compact two-qubit Clifford: images of `X_0, Z_0, X_1, Z_1` as (x bits, z bits, phase).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwoQubitClifford {
    images: [(u8, u8, u8); 4],
}

impl TwoQubitClifford {
    fn from_tableau(t: &CliffordTableau) -> Self {
        let enc = |p: &PauliString| (p.x_words()[0] as u8, p.z_words()[0] as u8, p.phase());
        Self { images: [enc(&t.x_img[0]), enc(&t.z_img[0]), enc(&t.x_img[1]), enc(&t.z_img[1])] }
    }

    /// Full two-qubit tableau.
    pub fn tableau(&self) -> CliffordTableau {
        let dec = |(x, z, ph): (u8, u8, u8)| PauliString::from_u64(2, x as u64, z as u64, ph);
        let [x0, z0, x1, z1] = self.images.map(dec);
        CliffordTableau::from_parts(2, vec![x0, x1], vec![z0, z1])
    }

    fn embed(&self, n: usize, qa: usize, qb: usize, (x, z, ph): (u8, u8, u8)) -> PauliString {
        let mut p = PauliString::identity(n).with_phase(ph);
        for (bit, q) in [(0u8, qa), (1u8, qb)] {
            let letter = match ((x >> bit) & 1, (z >> bit) & 1) {
                (0, 0) => Pauli::I,
                (1, 0) => Pauli::X,
                (1, 1) => Pauli::Y,
                _ => Pauli::Z,
            };
            p.set(q, letter);
        }
        p
    }
}

/// All 11520 signed two-qubit Cliffords, in a fixed breadth-first order from the identity.
pub fn two_qubit_cliffords() -> &'static [TwoQubitClifford] {
    static TABLE: OnceLock<Vec<TwoQubitClifford>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let gens = [
            CliffordTableau::hadamard(2, 0),
            CliffordTableau::hadamard(2, 1),
            CliffordTableau::phase_gate(2, 0),
            CliffordTableau::phase_gate(2, 1),
            CliffordTableau::cnot(2, 0, 1),
        ];
        let start = CliffordTableau::identity(2);
        let mut seen: HashMap<TwoQubitClifford, ()> = HashMap::new();
        let mut order = Vec::with_capacity(11520);
        let mut queue = VecDeque::new();
        seen.insert(TwoQubitClifford::from_tableau(&start), ());
        order.push(TwoQubitClifford::from_tableau(&start));
        queue.push_back(start);
        while let Some(t) = queue.pop_front() {
            for g in &gens {
                let next = compose(g, &t).expect("two-qubit compose");
                let key = TwoQubitClifford::from_tableau(&next);
                if seen.insert(key, ()).is_none() {
                    order.push(key);
                    queue.push_back(next);
                }
            }
        }
        order
    })
}

/// One gate of a brickwork row: table index applied to qubits `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrickGate {
    pub a: usize,
    pub b: usize,
    pub index: usize,
}

/// Qubit pairs of one brickwork row. Offset 1 pairs `(1,2), (3,4), ...` and closes the ring
/// with `(n-1, 0)` for even `n`; offset 0 pairs `(0,1), (2,3), ...`.
pub fn brick_pairs(n: usize, offset: usize) -> Vec<(usize, usize)> {
    if n == 2 {
        return if offset == 1 { vec![(1, 0)] } else { vec![(0, 1)] };
    }
    let mut pairs = Vec::new();
    let mut a = offset;
    while a + 1 < n {
        pairs.push((a, a + 1));
        a += 2;
    }
    if offset == 1 && n % 2 == 0 {
        pairs.push((n - 1, 0));
    }
    pairs
}

/// Random gate list for `depth` brickwork rows, odd offset first.
pub fn sample_brickwork_gates<R: Rng + ?Sized>(
    n: usize,
    depth: usize,
    rng: &mut R,
) -> Result<Vec<Vec<BrickGate>>> {
    if n < 2 {
        return Err(Error::Input("brickwork needs at least two qubits".into()));
    }
    let table = two_qubit_cliffords();
    Ok((0..depth)
        .map(|r| {
            brick_pairs(n, if r % 2 == 0 { 1 } else { 0 })
                .into_iter()
                .map(|(a, b)| BrickGate { a, b, index: rng.random_range(0..table.len()) })
                .collect()
        })
        .collect())
}

/// Tableau of a single brickwork row of disjoint gates.
pub fn row_tableau(n: usize, row: &[BrickGate]) -> CliffordTableau {
    let table = two_qubit_cliffords();
    let mut t = CliffordTableau::identity(n);
    for g in row {
        let c = &table[g.index];
        t.x_img[g.a] = c.embed(n, g.a, g.b, c.images[0]);
        t.z_img[g.a] = c.embed(n, g.a, g.b, c.images[1]);
        t.x_img[g.b] = c.embed(n, g.a, g.b, c.images[2]);
        t.z_img[g.b] = c.embed(n, g.a, g.b, c.images[3]);
    }
    CliffordTableau::from_parts(n, t.x_img, t.z_img)
}

/// Tableau for a single gate placed on `(a, b)` of an `n`-qubit register.
pub fn gate_tableau(n: usize, gate: &BrickGate) -> CliffordTableau {
    row_tableau(n, std::slice::from_ref(gate))
}

/// Composition of `depth` alternating-offset rows of uniform two-qubit Cliffords.
pub fn sample_brickwork_layer<R: Rng + ?Sized>(
    n: usize,
    depth: usize,
    rng: &mut R,
) -> Result<CliffordTableau> {
    let rows = sample_brickwork_gates(n, depth, rng)?;
    Ok(brickwork_tableau(n, &rows))
}

pub fn brickwork_tableau(n: usize, rows: &[Vec<BrickGate>]) -> CliffordTableau {
    rows.iter().fold(CliffordTableau::identity(n), |acc, row| {
        compose(&row_tableau(n, row), &acc).expect("equal sizes")
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    GlobalUniform,
    BrickworkLocal,
}

/// Per-step Clifford layers `C_1..C_T` with cached prefixes `C_t ... C_1` and the terminal inverse.
#[derive(Clone, Debug)]
pub struct CircuitFamily {
    pub kind: FamilyKind,
    pub seed: u64,
    layers: Vec<CliffordTableau>,
    prefixes: Vec<CliffordTableau>,
    terminal: CliffordTableau,
}

impl CircuitFamily {
    /// Samples `t_steps` layers from `seed`. Brickwork layers use two rows each.
    pub fn sample(kind: FamilyKind, n: usize, t_steps: usize, seed: u64) -> Result<Self> {
        if t_steps == 0 {
            return Err(Error::Input("need at least one time step".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = (0..t_steps)
            .map(|_| match kind {
                FamilyKind::GlobalUniform => Ok(sample_uniform_clifford(n, &mut rng)),
                FamilyKind::BrickworkLocal => sample_brickwork_layer(n, 2, &mut rng),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_layers(kind, seed, layers))
    }

    pub fn from_layers(kind: FamilyKind, seed: u64, layers: Vec<CliffordTableau>) -> Self {
        let mut prefixes: Vec<CliffordTableau> = Vec::with_capacity(layers.len());
        for layer in &layers {
            let next = match prefixes.last() {
                Some(prev) => compose(layer, prev).expect("equal sizes"),
                None => layer.clone(),
            };
            prefixes.push(next);
        }
        let terminal = prefixes.last().expect("nonempty").inverse();
        Self { kind, seed, layers, prefixes, terminal }
    }

    pub fn n(&self) -> usize {
        self.layers[0].n()
    }

    pub fn t_steps(&self) -> usize {
        self.layers.len()
    }

    /// Layer `C_t` for `t` in `1..=T`.
    pub fn layer(&self, t: usize) -> &CliffordTableau {
        &self.layers[t - 1]
    }

    /// Prefix `C_t ... C_1` for `t` in `1..=T`.
    pub fn prefix(&self, t: usize) -> &CliffordTableau {
        &self.prefixes[t - 1]
    }

    /// `(C_T ... C_1)†`.
    pub fn terminal(&self) -> &CliffordTableau {
        &self.terminal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::make_pauli;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn gate_images() {
        let h = CliffordTableau::hadamard(1, 0);
        assert_eq!(h.conjugate(&make_pauli("Z").unwrap()).unwrap(), (make_pauli("X").unwrap(), 1));
        let cx = CliffordTableau::cnot(2, 0, 1);
        assert_eq!(cx.conjugate(&make_pauli("XI").unwrap()).unwrap(), (make_pauli("XX").unwrap(), 1));
        let s = CliffordTableau::phase_gate(1, 0);
        assert_eq!(s.conjugate(&make_pauli("Y").unwrap()).unwrap(), (make_pauli("X").unwrap(), 1));
    }

    #[test]
    fn compose_identity_and_inverse() {
        let mut r = rng(1);
        for _ in 0..100 {
            let c = sample_uniform_clifford(4, &mut r);
            assert_eq!(compose(&c, &CliffordTableau::identity(4)).unwrap(), c);
            let id = compose(&c.inverse(), &c).unwrap();
            assert!(id.is_identity());
            let x1 = make_pauli("XIII").unwrap();
            assert_eq!(id.conjugate(&x1).unwrap(), (x1, 1));
            assert_eq!(c.inverse().inverse(), c);
        }
    }

    #[test]
    fn two_qubit_table_size() {
        let t = two_qubit_cliffords();
        assert_eq!(t.len(), 11520);
        assert!(t.iter().all(|c| c.tableau().is_valid()));
    }

    #[test]
    fn brickwork_pairs_are_periodic_on_odd_offset() {
        assert_eq!(brick_pairs(6, 1), vec![(1, 2), (3, 4), (5, 0)]);
        assert_eq!(brick_pairs(6, 0), vec![(0, 1), (2, 3), (4, 5)]);
        assert_eq!(brick_pairs(5, 1), vec![(1, 2), (3, 4)]);
        assert_eq!(brick_pairs(2, 1), vec![(1, 0)]);
    }

    #[test]
    fn degenerate_brickwork_is_one_gate() {
        let rows = sample_brickwork_gates(2, 1, &mut rng(3)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].len(), 1);
        assert!(sample_brickwork_layer(1, 2, &mut rng(3)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = sample_uniform_clifford(5, &mut rng(9));
        assert_eq!(CliffordTableau::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn family_terminal_undoes_prefix() {
        for kind in [FamilyKind::GlobalUniform, FamilyKind::BrickworkLocal] {
            let f = CircuitFamily::sample(kind, 6, 4, 17).unwrap();
            let full = compose(f.terminal(), f.prefix(4)).unwrap();
            assert!(full.is_identity());
            let manual = compose(f.layer(3), &compose(f.layer(2), f.layer(1)).unwrap()).unwrap();
            assert_eq!(&manual, f.prefix(3));
        }
    }
}
