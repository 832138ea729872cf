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

//! Readout bit-flip noise, confusion-matrix inversion and nearest-codeword decoding.

use rayon::prelude::*;
use serde::Serialize;

use crate::counts::BitstringCounts;
use crate::error::{Error, Result};
use crate::pauli::Bitstring;
use crate::rng::stream;
use crate::sim::sampling::{check_readout, flip_bits};

/// Flips every bit of every recorded shot independently with probability `gamma_r`.
///
/// Tallies are treated as integer shot counts.
pub fn apply_bitflip_noise(counts: &BitstringCounts, gamma_r: f64, seed: u64) -> Result<BitstringCounts> {
    check_readout(gamma_r)?;
    if gamma_r == 0.0 {
        return Ok(counts.clone());
    }
    let entries: Vec<(usize, Bitstring, u64)> = counts
        .tallies
        .iter()
        .enumerate()
        .map(|(i, (z, w))| (i, *z, w.round() as u64))
        .collect();
    let parts: Vec<BitstringCounts> = entries
        .into_par_iter()
        .map(|(i, z0, c)| {
            let mut rng = stream(seed, i as u64);
            let mut out = BitstringCounts::new(counts.n);
            for _ in 0..c {
                let mut z = z0;
                flip_bits(&mut z, gamma_r, &mut rng);
                out.add(z, 1.0);
            }
            out
        })
        .collect();
    let mut out = BitstringCounts::new(counts.n);
    for p in parts {
        out.merge(&p);
    }
    Ok(out)
}

/// Entry `(a, j)` of the inverse of the `n`-qubit product bit-flip confusion matrix.
pub fn confusion_inverse_weight(a: &Bitstring, j: &Bitstring, gamma_r: f64, n: usize) -> Result<f64> {
    if (gamma_r - 0.5).abs() < 1e-15 {
        return Err(Error::Numerical("confusion matrix is singular at gamma_r = 1/2".into()));
    }
    let d = a.hamming(j) as i32;
    let n = n as i32;
    Ok((1.0 - gamma_r).powi(n - d) * (-gamma_r).powi(d) / (1.0 - 2.0 * gamma_r).powi(n))
}

/// Readout-corrected frequency of `a`, summed over observed bitstrings only.
pub fn corrected_frequency(counts: &BitstringCounts, a: &Bitstring, gamma_r: f64) -> Result<f64> {
    if gamma_r == 0.0 {
        return Ok(counts.frequency(a));
    }
    let mut acc = 0.0;
    for (j, f) in counts.frequencies() {
        acc += confusion_inverse_weight(a, j, gamma_r, counts.n)? * f;
    }
    Ok(acc)
}

/// Applies the inverse confusion matrix to a dense vector, one qubit at a time.
pub fn confusion_correct_dense(v: &mut [f64], n: usize, gamma_r: f64) -> Result<()> {
    if v.len() != 1usize << n {
        return Err(Error::Input(format!("vector length {} != 2^{n}", v.len())));
    }
    if gamma_r == 0.0 {
        return Ok(());
    }
    let det = 1.0 - 2.0 * gamma_r;
    if det.abs() < 1e-15 {
        return Err(Error::Numerical("confusion matrix is singular at gamma_r = 1/2".into()));
    }
    let (d, o) = ((1.0 - gamma_r) / det, -gamma_r / det);
    for k in 0..n {
        let bit = 1usize << k;
        for i in 0..v.len() {
            if i & bit == 0 {
                let (x0, x1) = (v[i], v[i | bit]);
                v[i] = d * x0 + o * x1;
                v[i | bit] = o * x0 + d * x1;
            }
        }
    }
    Ok(())
}

/// Exact bit-flip convolution of a dense distribution.
pub fn convolve_bitflip(p: &[f64], n: usize, gamma_r: f64) -> Vec<f64> {
    let mut v = p.to_vec();
    for k in 0..n {
        let bit = 1usize << k;
        for i in 0..v.len() {
            if i & bit == 0 {
                let (x0, x1) = (v[i], v[i | bit]);
                v[i] = (1.0 - gamma_r) * x0 + gamma_r * x1;
                v[i | bit] = gamma_r * x0 + (1.0 - gamma_r) * x1;
            }
        }
    }
    v
}

/// Signal bitstrings of one circuit together with the all-zeros outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct CodewordSet {
    pub n: usize,
    pub codewords: Vec<Bitstring>,
    pub d_min: u32,
}

impl CodewordSet {
    /// Adds `0` if absent and sorts in label order; duplicates are a collision.
    pub fn new(n: usize, words: &[Bitstring]) -> Result<Self> {
        let mut codewords: Vec<Bitstring> = words.to_vec();
        if !codewords.iter().any(Bitstring::is_zero) {
            codewords.push(Bitstring::zeros(n));
        }
        if let Some(w) = codewords.iter().find(|w| w.n() != n) {
            return Err(Error::QubitMismatch(w.n(), n));
        }
        codewords.sort_by(|a, b| a.label_cmp(b));
        let dup: Vec<usize> = (1..codewords.len()).filter(|&i| codewords[i] == codewords[i - 1]).collect();
        if !dup.is_empty() {
            return Err(Error::Collision(dup));
        }
        let d_min = min_pairwise_distance(&codewords).unwrap_or(n as u32);
        Ok(Self { n, codewords, d_min })
    }

    /// Largest distance that is always decoded correctly.
    pub fn radius(&self) -> u32 {
        (self.d_min - 1) / 2
    }
}

/// Minimum pairwise Hamming distance; `None` for fewer than two words.
pub fn min_pairwise_distance(words: &[Bitstring]) -> Option<u32> {
    let mut best = None;
    for i in 0..words.len() {
        for j in 0..i {
            let d = words[i].hamming(&words[j]);
            best = Some(best.map_or(d, |b: u32| b.min(d)));
        }
    }
    best
}

/// Nearest codeword, with ties going to the label-smallest and reported as `true`.
pub fn decode_nearest(z: &Bitstring, set: &CodewordSet) -> (Bitstring, u32, bool) {
    let mut best = set.codewords[0];
    let mut best_d = z.hamming(&best);
    let mut tie = false;
    for w in &set.codewords[1..] {
        let d = z.hamming(w);
        if d < best_d {
            best = *w;
            best_d = d;
            tie = false;
        } else if d == best_d {
            tie = true;
        }
    }
    (best, best_d, tie)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DecodeStats {
    pub shots: f64,
    pub ties: f64,
    /// Shots farther than `d_min / 2` from every codeword, left undecoded.
    pub out_of_radius: f64,
}

/// Replaces every bitstring within `d_min / 2` of the set by its nearest codeword; farther
/// bitstrings are kept unchanged.
pub fn decode_counts(counts: &BitstringCounts, set: &CodewordSet) -> (BitstringCounts, DecodeStats) {
    let mut out = BitstringCounts::new(counts.n);
    let mut stats = DecodeStats { shots: counts.shots, ..Default::default() };
    let decoded: Vec<(Bitstring, f64, u32, bool)> = counts
        .tallies
        .par_iter()
        .map(|(z, w)| {
            let (c, d, tie) = decode_nearest(z, set);
            (c, *w, d, tie)
        })
        .collect();
    for ((z, _), (c, w, d, tie)) in counts.tallies.iter().zip(decoded) {
        if 2 * d > set.d_min {
            stats.out_of_radius += w;
            out.add(*z, w);
            continue;
        }
        out.add(c, w);
        if tie {
            stats.ties += w;
        }
    }
    (out, stats)
}

/// `Σ_{i<=r} C(n, i)`.
pub fn hamming_ball_volume(n: usize, r: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..=r.min(n) {
        term *= (n + 1 - i) as f64 / i as f64;
        sum += term;
    }
    sum
}

pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Lower bound on the probability that `k` uniform `n`-bit words have pairwise distance `>= d`.
pub fn dmin_probability_bound(n: usize, k: usize, d: usize) -> f64 {
    if d == 0 {
        return 1.0;
    }
    let space = 2f64.powi(n as i32);
    let ball = hamming_ball_volume(n, d - 1);
    let mut log_p = 0.0;
    for m in 0..k {
        let f = 1.0 - m as f64 * ball / space;
        if f <= 0.0 {
            return 0.0;
        }
        log_p += f.ln();
    }
    log_p.exp()
}

/// Exponential approximation `exp(-2^{-n(1-H((d-1)/n))} k(k-1)/2)` of the bound.
pub fn dmin_probability_approx(n: usize, k: usize, d: usize) -> f64 {
    if d == 0 || k < 2 {
        return 1.0;
    }
    let h = binary_entropy((d - 1) as f64 / n as f64);
    let pairs = (k * (k - 1)) as f64 / 2.0;
    (-(2f64.powf(-(n as f64) * (1.0 - h))) * pairs).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Correctability {
    pub n: usize,
    pub codewords: usize,
    pub d_min: u32,
    /// `d_min / 2N`.
    pub threshold: f64,
    pub gamma_r: f64,
    pub correctable: bool,
    /// Random-code lower bound on `Pr(d_min >= observed d_min)`.
    pub probability_bound: f64,
    pub probability_approx: f64,
}

pub fn correctability_check(set: &CodewordSet, gamma_r: f64) -> Correctability {
    let threshold = f64::from(set.d_min) / (2.0 * set.n as f64);
    let k = set.codewords.len();
    Correctability {
        n: set.n,
        codewords: k,
        d_min: set.d_min,
        threshold,
        gamma_r,
        correctable: gamma_r < threshold,
        probability_bound: dmin_probability_bound(set.n, k, set.d_min as usize),
        probability_approx: dmin_probability_approx(set.n, k, set.d_min as usize),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Bitstring {
        Bitstring::parse(s).unwrap()
    }

    #[test]
    fn two_by_two_weights() {
        let w0 = confusion_inverse_weight(&b("0"), &b("0"), 0.1, 1).unwrap();
        let w1 = confusion_inverse_weight(&b("0"), &b("1"), 0.1, 1).unwrap();
        assert!((w0 - 1.125).abs() < 1e-15 && (w1 + 0.125).abs() < 1e-15);
        assert_eq!(confusion_inverse_weight(&b("01"), &b("01"), 0.0, 2).unwrap(), 1.0);
        assert_eq!(confusion_inverse_weight(&b("01"), &b("11"), 0.0, 2).unwrap(), 0.0);
        assert!(confusion_inverse_weight(&b("0"), &b("0"), 0.5, 1).is_err());
    }

    #[test]
    fn distances_and_decoding() {
        let set = CodewordSet::new(3, &[b("111")]).unwrap();
        assert_eq!(set.d_min, 3);
        assert_eq!(decode_nearest(&b("001"), &set), (b("000"), 1, false));
        let set = CodewordSet::new(4, &[b("1111"), b("0011")]).unwrap();
        assert_eq!(set.d_min, 2);
        let (_, _, tie) = decode_nearest(&b("0001"), &set);
        assert!(tie);
        assert!(CodewordSet::new(2, &[b("11"), b("11")]).is_err());
    }

    #[test]
    fn bound_endpoints() {
        assert_eq!(dmin_probability_bound(10, 1, 5), 1.0);
        assert_eq!(binary_entropy(0.5), 1.0);
        assert!((dmin_probability_approx(10, 2, 6) - (-1.0f64).exp()).abs() < 0.2);
    }
}
