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

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;
use scramble_sense::rng::stream;
use scramble_sense::{make_pauli, overlap_parity, Bitstring, Pauli, PauliString};

fn quarter(k: u8) -> C64 {
    [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][k as usize % 4]
}

/// Dense matrix of `p` built letter by letter, qubit k on bit k of the index.
fn dense(p: &PauliString) -> Vec<Vec<C64>> {
    let n = p.n();
    let dim = 1usize << n;
    let mut m = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut amp = quarter(p.phase());
        let mut row = col;
        for k in 0..n {
            let bit = (col >> k) & 1;
            match p.get(k) {
                Pauli::I => {}
                Pauli::X => row ^= 1 << k,
                Pauli::Z => amp *= if bit == 1 { -1.0 } else { 1.0 },
                Pauli::Y => {
                    row ^= 1 << k;
                    amp *= if bit == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
                }
            }
        }
        m[row][col] = amp;
    }
    m
}

fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
    let mask = (1u64 << n) - 1;
    (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, ph)| PauliString::from_u64(n, x & mask, z & mask, ph))
}

#[test]
fn basis_action_matches_dense_matrices() {
    for n in 1..=4usize {
        let dim = 1u64 << n;
        for x in 0..dim {
            for z in 0..dim {
                for ph in 0..4 {
                    let p = PauliString::from_u64(n, x, z, ph);
                    let m = dense(&p);
                    for idx in 0..dim {
                        let (phase, out) = p.apply_to_basis(&Bitstring::from_index(n, idx)).unwrap();
                        assert_eq!(m[out.index()][idx as usize], quarter(phase), "{p} on {idx}");
                    }
                }
            }
        }
    }
}

#[test]
fn multiplication_matches_dense_product() {
    let n = 3;
    let mut rng = stream(3, 0);
    for _ in 0..200 {
        let p = PauliString::from_u64(n, rng.random_range(0..8), rng.random_range(0..8), rng.random_range(0..4));
        let q = PauliString::from_u64(n, rng.random_range(0..8), rng.random_range(0..8), rng.random_range(0..4));
        let (a, b, pq) = (dense(&p), dense(&q), dense(&p.multiply(&q).unwrap()));
        for i in 0..8 {
            for j in 0..8 {
                let want: C64 = (0..8).map(|k| a[i][k] * b[k][j]).sum();
                assert!((want - pq[i][j]).norm() < 1e-15);
            }
        }
    }
}

#[test]
fn multiplication_is_associative_with_phase() {
    let mut rng = stream(4, 0);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=64);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut draw = || PauliString::from_u64(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask, rng.random_range(0..4));
        let (p, q, r) = (draw(), draw(), draw());
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn overlap_parity_matches_bit_loop() {
    for n in [1usize, 5, 10] {
        for z in 0..1u64 << n {
            for a in 0..1u64 << n {
                let want = (0..n).filter(|k| (z >> k) & 1 == 1 && (a >> k) & 1 == 1).count() % 2;
                let got = overlap_parity(&Bitstring::from_index(n, z), &Bitstring::from_index(n, a));
                assert_eq!(usize::from(got), want);
            }
        }
    }
}

#[test]
fn wide_strings_use_every_word() {
    let mut p = PauliString::identity(256);
    p.set(0, Pauli::X);
    p.set(130, Pauli::Y);
    p.set(255, Pauli::Z);
    let q = PauliString::single(256, 130, Pauli::Z);
    assert_eq!(p.weight(), 3);
    assert!(!p.commutes(&q).unwrap());
    let pq = p.multiply(&q).unwrap();
    assert_eq!(pq.get(130), Pauli::X);
    assert_eq!(pq.label().len(), 256);
    assert_eq!(make_pauli(&p.label()).unwrap(), p);
}

proptest! {
    #[test]
    fn weight_is_subadditive(p in arb_pauli(12), q in arb_pauli(12)) {
        prop_assert!(p.multiply(&q).unwrap().weight() <= p.weight() + q.weight());
    }

    #[test]
    fn commutation_matches_product_order(p in arb_pauli(10), q in arb_pauli(10)) {
        let pq = p.multiply(&q).unwrap();
        let qp = q.multiply(&p).unwrap();
        let flip = if p.commutes(&q).unwrap() { 0 } else { 2 };
        prop_assert_eq!(pq.phase(), (qp.phase() + flip) % 4);
        prop_assert_eq!(pq.unsigned(), qp.unsigned());
    }

    #[test]
    fn labels_round_trip_and_are_hermitian(letters in proptest::collection::vec(0usize..4, 1..80)) {
        let label: String = letters.iter().map(|&i| ['I', 'X', 'Y', 'Z'][i]).collect();
        let p = make_pauli(&label).unwrap();
        prop_assert_eq!(p.phase(), 0);
        prop_assert!(p.is_hermitian());
        prop_assert_eq!(p.label(), label);
        prop_assert!(p.multiply(&p).unwrap().is_identity());
    }

    #[test]
    fn basis_action_flips_x_support(p in arb_pauli(20), z in 0u64..1 << 20) {
        let z = Bitstring::from_index(20, z);
        let (_, out) = p.apply_to_basis(&z).unwrap();
        prop_assert_eq!(out, z.xor(&p.x_support()));
    }
}
