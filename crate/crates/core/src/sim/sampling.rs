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

//! Seeded, parallelism-independent shot sampling.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::circuit::{run_pure, stabilizer_codewords, Circuit};
use crate::counts::BitstringCounts;
use crate::error::{Error, Result};
use crate::pauli::Bitstring;
use crate::rng::stream;

/// Shots per jump-sampling stream.
pub const BLOCK: u64 = 8192;
const OUTCOME_STREAM_BASE: u64 = 1 << 32;

pub(crate) fn check_readout(gamma_r: f64) -> Result<()> {
    if !(0.0..0.5).contains(&gamma_r) {
        return Err(Error::Input(format!("readout flip probability {gamma_r} outside [0, 0.5)")));
    }
    Ok(())
}

/// Flips each of the `n` bits of `z` independently with probability `gamma_r`.
#[inline]
pub(crate) fn flip_bits<R: Rng + ?Sized>(z: &mut Bitstring, gamma_r: f64, rng: &mut R) {
    if gamma_r == 0.0 {
        return;
    }
    for k in 0..z.n() {
        if rng.random::<f64>() < gamma_r {
            z.flip(k);
        }
    }
}

/// Inverse-CDF draw from a cumulative table.
#[inline]
pub(crate) fn draw_index<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let u = rng.random::<f64>() * cdf[cdf.len() - 1];
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p.max(0.0);
            acc
        })
        .collect()
}

/// Draws `count` outcomes from `probs` and applies readout noise.
fn draw_outcomes(n: usize, probs: &[f64], count: u64, gamma_r: f64, rng: &mut ChaCha8Rng) -> BitstringCounts {
    let cdf = cumulative(probs);
    let mut out = BitstringCounts::new(n);
    for _ in 0..count {
        let mut z = Bitstring::from_index(n, draw_index(&cdf, rng) as u64);
        flip_bits(&mut z, gamma_r, rng);
        out.add(z, 1.0);
    }
    out
}

/// Samples `shots` shots of `c`: jump pattern per shot, trajectory evolution, Born-rule outcome,
/// then independent readout flips. The result depends only on `seed`.
pub fn sample_shots(c: &Circuit, shots: u64, gamma_r: f64, seed: u64) -> Result<BitstringCounts> {
    check_readout(gamma_r)?;
    if shots == 0 {
        return Err(Error::Input("shot count must be at least 1".into()));
    }
    let chans = c.channels();
    let active = c.active_channels();
    let gammas: Vec<f64> = active.iter().map(|&k| chans[k].1).collect();

    let nblocks = shots.div_ceil(BLOCK);
    let per_block: Vec<BTreeMap<Vec<u32>, u64>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b);
            let len = BLOCK.min(shots - b * BLOCK);
            let mut tally = BTreeMap::new();
            let mut fired = Vec::new();
            for _ in 0..len {
                fired.clear();
                for (k, g) in gammas.iter().enumerate() {
                    if rng.random::<f64>() < *g {
                        fired.push(k as u32);
                    }
                }
                *tally.entry(fired.clone()).or_insert(0u64) += 1;
            }
            tally
        })
        .collect();
    let mut patterns: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for t in per_block {
        for (k, v) in t {
            *patterns.entry(k).or_insert(0) += v;
        }
    }

    let codewords = stabilizer_codewords(c);
    let parts: Vec<Result<BitstringCounts>> = patterns
        .into_iter()
        .enumerate()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(pos, (fired, count))| {
            let mut rng = stream(seed, OUTCOME_STREAM_BASE + pos as u64);
            if let Some(words) = &codewords {
                let mut z0 = Bitstring::zeros(c.n);
                for &k in &fired {
                    z0 = z0.xor(&words[active[k as usize]]);
                }
                let mut out = BitstringCounts::new(c.n);
                for _ in 0..count {
                    let mut z = z0;
                    flip_bits(&mut z, gamma_r, &mut rng);
                    out.add(z, 1.0);
                }
                return Ok(out);
            }
            let mut jumps = vec![false; chans.len()];
            for &k in &fired {
                jumps[active[k as usize]] = true;
            }
            let psi = run_pure(c, &jumps)?;
            Ok(draw_outcomes(c.n, &psi.probabilities(), count, gamma_r, &mut rng))
        })
        .collect();
    let mut out = BitstringCounts::new(c.n);
    for p in parts {
        out.merge(&p?);
    }
    Ok(out)
}

/// Samples `shots` outcomes directly from a known distribution, with readout noise.
pub fn sample_distribution(n: usize, probs: &[f64], shots: u64, gamma_r: f64, seed: u64) -> Result<BitstringCounts> {
    check_readout(gamma_r)?;
    if probs.len() != 1usize << n {
        return Err(Error::Input(format!("distribution length {} != 2^{n}", probs.len())));
    }
    let cdf = cumulative(probs);
    let nblocks = shots.div_ceil(BLOCK);
    let parts: Vec<BitstringCounts> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b);
            let mut out = BitstringCounts::new(n);
            for _ in 0..BLOCK.min(shots - b * BLOCK) {
                let mut z = Bitstring::from_index(n, draw_index(&cdf, &mut rng) as u64);
                flip_bits(&mut z, gamma_r, &mut rng);
                out.add(z, 1.0);
            }
            out
        })
        .collect();
    let mut out = BitstringCounts::new(n);
    for p in parts {
        out.merge(&p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::make_pauli;
    use crate::sim::circuit::Element;
    use crate::sim::state::InitialState;

    #[test]
    fn readout_range_checked() {
        let c = Circuit::new(2, InitialState::Zero);
        assert!(sample_shots(&c, 10, 0.5, 1).is_err());
        assert!(sample_shots(&c, 10, -0.1, 1).is_err());
    }

    #[test]
    fn noiseless_zero_circuit() {
        let c = Circuit::new(4, InitialState::Zero);
        let counts = sample_shots(&c, 1000, 0.0, 3).unwrap();
        assert_eq!(counts.count(&Bitstring::zeros(4)), 1000.0);
    }

    #[test]
    fn deterministic_in_seed() {
        let mut c = Circuit::new(3, InitialState::Plus);
        c.push(Element::PauliChannel { pauli: make_pauli("ZIZ").unwrap(), gamma: 0.3, signal: None }).unwrap();
        c.push(Element::HadamardAll).unwrap();
        let a = sample_shots(&c, 20_000, 0.1, 9).unwrap();
        let b = sample_shots(&c, 20_000, 0.1, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.shots, 20_000.0);
    }
}
