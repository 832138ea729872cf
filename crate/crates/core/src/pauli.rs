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

//! Bit-packed Pauli strings and computational-basis bitstrings.
//!
//! Qubit `k` (zero-based in this API, "qubit k+1" in physics notation) lives in bit `k % 64` of
//! word `k / 64`, so the first qubit is the least-significant bit. Text labels list qubits left to
//! right starting with the first qubit: `"XYZ"` has X on qubit 0, Y on qubit 1 and Z on qubit 2.
//!
//! A [`PauliString`] stores `i^phase * (P_0 ⊗ P_1 ⊗ ...)` where a site with both mask bits set is
//! the Hermitian letter `Y`. The string is Hermitian exactly when `phase` is even.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of 64-bit words per mask.
pub const WORDS: usize = 4;
/// Largest supported qubit count.
pub const MAX_QUBITS: usize = 64 * WORDS;

type Words = [u64; WORDS];

#[inline]
fn popcount(w: &Words) -> u32 {
    w.iter().map(|x| x.count_ones()).sum()
}

#[inline]
fn zip(a: &Words, b: &Words, f: impl Fn(u64, u64) -> u64) -> Words {
    let mut out = [0u64; WORDS];
    for i in 0..WORDS {
        out[i] = f(a[i], b[i]);
    }
    out
}

fn tail_mask(n: usize) -> Words {
    let mut m = [0u64; WORDS];
    for (i, w) in m.iter_mut().enumerate() {
        let lo = i * 64;
        if n >= lo + 64 {
            *w = u64::MAX;
        } else if n > lo {
            *w = (1u64 << (n - lo)) - 1;
        }
    }
    m
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Input(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    Ok(())
}

/// A computational-basis outcome on `n` qubits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Bitstring {
    n: u16,
    words: Words,
}

impl Bitstring {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "qubit count {n} exceeds {MAX_QUBITS}");
        Self { n: n as u16, words: [0; WORDS] }
    }

    /// Builds from a dense index (bit k of `idx` is qubit k). Bits beyond `n` are dropped.
    pub fn from_index(n: usize, idx: u64) -> Self {
        let mut b = Self::zeros(n);
        b.words[0] = idx;
        b.words = zip(&b.words, &tail_mask(n), |a, m| a & m);
        b
    }

    pub fn from_words(n: usize, words: [u64; WORDS]) -> Self {
        let mut b = Self::zeros(n);
        b.words = zip(&words, &tail_mask(n), |a, m| a & m);
        b
    }

    /// Parses a `0`/`1` label with the first qubit leftmost.
    pub fn parse(label: &str) -> Result<Self> {
        let n = label.chars().count();
        check_n(n)?;
        let mut b = Self::zeros(n);
        for (k, c) in label.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.set(k, true),
                _ => return Err(Error::Input(format!("bad bit character {c:?}"))),
            }
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn words(&self) -> &[u64; WORDS] {
        &self.words
    }

    /// Dense index; only meaningful when `n <= 64`.
    pub fn index(&self) -> usize {
        debug_assert!(self.n <= 64);
        self.words[0] as usize
    }

    pub fn get(&self, k: usize) -> bool {
        (self.words[k / 64] >> (k % 64)) & 1 == 1
    }

    pub fn set(&mut self, k: usize, v: bool) {
        assert!(k < self.n(), "bit {k} out of range");
        let bit = 1u64 << (k % 64);
        if v {
            self.words[k / 64] |= bit;
        } else {
            self.words[k / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, k: usize) {
        assert!(k < self.n(), "bit {k} out of range");
        self.words[k / 64] ^= 1u64 << (k % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> u32 {
        popcount(&self.words)
    }

    pub fn xor(&self, other: &Self) -> Self {
        Self { n: self.n, words: zip(&self.words, &other.words, |a, b| a ^ b) }
    }

    pub fn and(&self, other: &Self) -> Self {
        Self { n: self.n, words: zip(&self.words, &other.words, |a, b| a & b) }
    }

    pub fn hamming(&self, other: &Self) -> u32 {
        self.xor(other).weight()
    }

    /// Parity of `|self ∧ a|`.
    pub fn overlap_parity(&self, a: &Self) -> u8 {
        (self.and(a).weight() & 1) as u8
    }

    /// Order of the text labels (first qubit is the most significant character).
    pub fn label_cmp(&self, other: &Self) -> Ordering {
        for k in 0..self.n().min(other.n()) {
            match (self.get(k), other.get(k)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        self.n.cmp(&other.n)
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n() {
            f.write_str(if self.get(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for Bitstring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Overlap parity `|z ∧ a| mod 2`.
pub fn overlap_parity(z: &Bitstring, a: &Bitstring) -> u8 {
    z.overlap_parity(a)
}

/// Single-site Pauli letter.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | 'i' | '_' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            _ => Err(Error::Input(format!("unknown Pauli letter {c:?}"))),
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An `n`-qubit Pauli operator `i^phase * ⊗ P_k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    n: u16,
    x: Words,
    z: Words,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "qubit count {n} exceeds {MAX_QUBITS}");
        Self { n: n as u16, x: [0; WORDS], z: [0; WORDS], phase: 0 }
    }

    /// Parses a dense letter label such as `"IXYZ"`; the result has phase 0.
    pub fn from_label(labels: &str) -> Result<Self> {
        let n = labels.chars().count();
        check_n(n)?;
        let mut p = Self::identity(n);
        for (k, c) in labels.chars().enumerate() {
            p.set(k, Pauli::from_char(c)?);
        }
        Ok(p)
    }

    /// Builds from explicit masks; bits at positions `>= n` are rejected.
    pub fn from_masks(n: usize, x: Bitstring, z: Bitstring, phase: u8) -> Result<Self> {
        check_n(n)?;
        if x.n() != n || z.n() != n {
            return Err(Error::QubitMismatch(x.n().max(z.n()), n));
        }
        Ok(Self { n: n as u16, x: x.words, z: z.words, phase: phase & 3 })
    }

    /// Masks given as the low 64 bits; convenient for small systems.
    pub fn from_u64(n: usize, x: u64, z: u64, phase: u8) -> Self {
        let m = tail_mask(n);
        assert!(x & !m[0] == 0 && z & !m[0] == 0, "mask bits beyond n = {n}");
        let mut p = Self::identity(n);
        p.x[0] = x;
        p.z[0] = z;
        p.phase = phase & 3;
        p
    }

    /// A single letter on qubit `k`.
    pub fn single(n: usize, k: usize, letter: Pauli) -> Self {
        let mut p = Self::identity(n);
        p.set(k, letter);
        p
    }

    /// A Z string supported on the bits of `a`.
    pub fn z_string(a: &Bitstring) -> Self {
        let mut p = Self::identity(a.n());
        p.z = a.words;
        p
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Same masks, phase reset to zero.
    pub fn unsigned(self) -> Self {
        self.with_phase(0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&w| w == 0)
    }

    /// True when the string only contains `I` and `Z`.
    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    pub fn get(&self, k: usize) -> Pauli {
        let xb = (self.x[k / 64] >> (k % 64)) & 1 == 1;
        let zb = (self.z[k / 64] >> (k % 64)) & 1 == 1;
        match (xb, zb) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn set(&mut self, k: usize, letter: Pauli) {
        assert!(k < self.n(), "qubit {k} out of range");
        let bit = 1u64 << (k % 64);
        let (xb, zb) = letter.bits();
        let w = k / 64;
        self.x[w] = if xb { self.x[w] | bit } else { self.x[w] & !bit };
        self.z[w] = if zb { self.z[w] | bit } else { self.z[w] & !bit };
    }

    pub fn x_words(&self) -> &[u64; WORDS] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64; WORDS] {
        &self.z
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> u32 {
        popcount(&zip(&self.x, &self.z, |a, b| a | b))
    }

    /// Positions carrying X or Y.
    pub fn x_support(&self) -> Bitstring {
        Bitstring { n: self.n, words: self.x }
    }

    /// Positions carrying Z or Y.
    pub fn z_support(&self) -> Bitstring {
        Bitstring { n: self.n, words: self.z }
    }

    /// Number of Y letters.
    pub fn count_y(&self) -> u32 {
        popcount(&zip(&self.x, &self.z, |a, b| a & b))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::QubitMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        let a = popcount(&zip(&self.x, &other.z, |a, b| a & b));
        let b = popcount(&zip(&self.z, &other.x, |a, b| a & b));
        (a + b) % 2 == 0
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product `self * other` with exact phase tracking.
    #[inline]
    pub(crate) fn mul_unchecked(&self, q: &Self) -> Self {
        let mut plus = 0u32;
        let mut minus = 0u32;
        for i in 0..WORDS {
            let (x1, z1, x2, z2) = (self.x[i], self.z[i], q.x[i], q.z[i]);
            if (x1 | z1) & (x2 | z2) == 0 {
                continue;
            }
            let (px, py, pz) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (qx, qy, qz) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((px & qy) | (py & qz) | (pz & qx)).count_ones();
            minus += ((px & qz) | (pz & qy) | (py & qx)).count_ones();
        }
        let phase = (self.phase as u32 + q.phase as u32 + plus + 3 * minus) % 4;
        Self {
            n: self.n,
            x: zip(&self.x, &q.x, |a, b| a ^ b),
            z: zip(&self.z, &q.z, |a, b| a ^ b),
            phase: phase as u8,
        }
    }

    /// Action on a basis state: `P|z⟩ = i^k |z_out⟩`, returning `(k, z_out)`.
    pub fn apply_to_basis(&self, z: &Bitstring) -> Result<(u8, Bitstring)> {
        if z.n() != self.n() {
            return Err(Error::QubitMismatch(self.n(), z.n()));
        }
        Ok(self.apply_to_basis_unchecked(z))
    }

    #[inline]
    pub(crate) fn apply_to_basis_unchecked(&self, z: &Bitstring) -> (u8, Bitstring) {
        let signs = popcount(&zip(&self.z, &z.words, |a, b| a & b));
        let k = (self.phase as u32 + self.count_y() + 2 * signs) % 4;
        (k as u8, Bitstring { n: self.n, words: zip(&self.x, &z.words, |a, b| a ^ b) })
    }

    /// Dense-index variant of [`apply_to_basis`](Self::apply_to_basis) for `n <= 64`.
    #[inline]
    pub fn basis_action(&self) -> BasisAction {
        BasisAction {
            flip: self.x[0] as usize,
            zmask: self.z[0] as usize,
            base: ((self.phase as u32 + self.count_y()) % 4) as u8,
        }
    }

    /// Letter label without phase.
    pub fn label(&self) -> String {
        (0..self.n()).map(|k| self.get(k).as_char()).collect()
    }
}

/// Precomputed basis action of a Pauli on dense indices.
#[derive(Clone, Copy, Debug)]
pub struct BasisAction {
    pub flip: usize,
    pub zmask: usize,
    pub base: u8,
}

impl BasisAction {
    /// Quarter-turn phase acquired by basis state `idx`.
    #[inline]
    pub fn phase(&self, idx: usize) -> u8 {
        (self.base + 2 * ((idx & self.zmask).count_ones() & 1) as u8) % 4
    }
}

/// Parses `"XYZ"`, returning the phase-0 Hermitian Pauli.
pub fn make_pauli(labels: &str) -> Result<PauliString> {
    PauliString::from_label(labels)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;
    /// Accepts an optional `+`, `-`, `i`, `+i` or `-i` prefix before the letters.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if s.len() > 1 && s.starts_with('i') {
            (1, &s[1..])
        } else {
            (0, s)
        };
        Ok(Self::from_label(rest)?.with_phase(phase))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_encoding() {
        let p = make_pauli("IZI").unwrap();
        assert_eq!((p.x_words()[0], p.z_words()[0], p.phase()), (0b000, 0b010, 0));
        let p = make_pauli("XYZ").unwrap();
        assert_eq!((p.x_words()[0], p.z_words()[0], p.phase()), (0b011, 0b110, 0));
        let p = make_pauli("III").unwrap();
        assert!(p.is_identity());
        assert_eq!(p.weight(), 0);
        assert!(make_pauli("XQ").is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(make_pauli("ZZI").unwrap().weight(), 2);
        assert_eq!(make_pauli("XYZ").unwrap().weight(), 3);
    }

    #[test]
    fn commutation() {
        let c = |a: &str, b: &str| make_pauli(a).unwrap().commutes(&make_pauli(b).unwrap()).unwrap();
        assert!(!c("X", "Z"));
        assert!(c("XX", "ZZ"));
        assert!(c("XI", "IZ"));
        assert!(make_pauli("X").unwrap().commutes(&make_pauli("XX").unwrap()).is_err());
    }

    #[test]
    fn products() {
        let x = make_pauli("X").unwrap();
        let z = make_pauli("Z").unwrap();
        let xz = x.multiply(&z).unwrap();
        assert_eq!(xz.label(), "Y");
        assert_eq!(xz.phase(), 3);
        for l in ["XYZ", "YYI", "ZIX"] {
            let p = make_pauli(l).unwrap();
            let pp = p.multiply(&p).unwrap();
            assert!(pp.is_identity());
            assert_eq!(pp.phase(), 0);
        }
        let za = make_pauli("ZZI").unwrap();
        let zb = make_pauli("IZZ").unwrap();
        let zc = za.multiply(&zb).unwrap();
        assert_eq!(zc, make_pauli("ZIZ").unwrap());
    }

    #[test]
    fn basis_action_examples() {
        let z0 = Bitstring::parse("0").unwrap();
        let z1 = Bitstring::parse("1").unwrap();
        assert_eq!(make_pauli("X").unwrap().apply_to_basis(&z0).unwrap(), (0, z1));
        assert_eq!(make_pauli("Z").unwrap().apply_to_basis(&z1).unwrap(), (2, z1));
        assert_eq!(make_pauli("Y").unwrap().apply_to_basis(&z0).unwrap(), (1, z1));
    }

    #[test]
    fn supports_and_parities() {
        let p = make_pauli("XYZ").unwrap();
        assert_eq!(p.x_support().words()[0], 0b011);
        assert_eq!(p.count_y(), 1);
        // z = 110 and a = 011 as numeric masks share exactly one bit.
        let z = Bitstring::from_index(3, 0b110);
        let a = Bitstring::from_index(3, 0b011);
        assert_eq!(overlap_parity(&z, &a), 1);
    }

    #[test]
    fn text_round_trip() {
        for s in ["XYZI", "-ZZ", "iXY", "-iYYY"] {
            let p: PauliString = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let b = Bitstring::parse("1001").unwrap();
        assert_eq!(b.index(), 0b1001);
        assert_eq!(b.to_string(), "1001");
        let wide = PauliString::single(200, 150, Pauli::Y);
        assert_eq!(wide.to_string().parse::<PauliString>().unwrap(), wide);
    }

    #[test]
    fn label_order_puts_first_qubit_first() {
        let a = Bitstring::parse("011").unwrap();
        let b = Bitstring::parse("100").unwrap();
        assert_eq!(a.label_cmp(&b), Ordering::Less);
    }
}
