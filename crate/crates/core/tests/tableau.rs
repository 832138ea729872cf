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

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;
use scramble_sense::rng::stream;
use scramble_sense::sim::StateVector;
use scramble_sense::tableau::{
    gate_tableau, sample_brickwork_gates, sample_brickwork_layer, sample_uniform_clifford, two_qubit_cliffords,
};
use scramble_sense::{compose, conjugate, inverse, CircuitFamily, CliffordTableau, FamilyKind, Pauli, PauliString};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn pauli_matrix(p: &PauliString) -> DMatrix<C64> {
    let n = p.n();
    let dim = 1usize << n;
    let mut m = DMatrix::from_element(dim, dim, zero());
    for col in 0..dim {
        let mut s = StateVector::from_amplitudes(n, (0..dim).map(|i| C64::new(f64::from(u8::from(i == col)), 0.0)).collect());
        s.apply_pauli(p);
        for (row, a) in s.amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    m
}

fn single_qubit(n: usize, k: usize, g: [[C64; 2]; 2]) -> DMatrix<C64> {
    let dim = 1usize << n;
    DMatrix::from_fn(dim, dim, |r, c| {
        if (r ^ c) & !(1 << k) != 0 {
            return zero();
        }
        g[(r >> k) & 1][(c >> k) & 1]
    })
}

fn cnot_matrix(n: usize, control: usize, target: usize) -> DMatrix<C64> {
    let dim = 1usize << n;
    DMatrix::from_fn(dim, dim, |r, c| {
        let image = if (c >> control) & 1 == 1 { c ^ (1 << target) } else { c };
        C64::new(f64::from(u8::from(r == image)), 0.0)
    })
}

fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliString {
    let mask = (1u64 << n) - 1;
    loop {
        let p = PauliString::from_u64(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask, 0);
        if !p.is_identity() {
            return p;
        }
    }
}

/// `U†PU` must equal `sign · P'` for the pair returned by `conjugate`.
fn assert_dense_conjugation(u: &DMatrix<C64>, tab: &CliffordTableau, p: &PauliString) {
    let (q, sign) = conjugate(tab, p).unwrap();
    let lhs = u.adjoint() * pauli_matrix(p) * u;
    let rhs = pauli_matrix(&q) * C64::new(f64::from(sign), 0.0);
    let err = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{p} -> {sign} {q}: error {err}");
}

#[test]
fn gate_circuits_match_dense_unitaries() {
    let n = 6;
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let h = [[C64::new(s2, 0.0), C64::new(s2, 0.0)], [C64::new(s2, 0.0), C64::new(-s2, 0.0)]];
    let s = [[C64::new(1.0, 0.0), zero()], [zero(), C64::new(0.0, 1.0)]];
    let mut rng = stream(21, 0);
    for _ in 0..10 {
        let mut tab = CliffordTableau::identity(n);
        let mut u = DMatrix::<C64>::identity(1 << n, 1 << n);
        for _ in 0..60 {
            let (g, m) = match rng.random_range(0..3) {
                0 => {
                    let k = rng.random_range(0..n);
                    (CliffordTableau::hadamard(n, k), single_qubit(n, k, h))
                }
                1 => {
                    let k = rng.random_range(0..n);
                    (CliffordTableau::phase_gate(n, k), single_qubit(n, k, s))
                }
                _ => {
                    let c = rng.random_range(0..n);
                    let t = (c + rng.random_range(1..n)) % n;
                    (CliffordTableau::cnot(n, c, t), cnot_matrix(n, c, t))
                }
            };
            tab = compose(&g, &tab).unwrap();
            u = m * u;
        }
        for _ in 0..20 {
            assert_dense_conjugation(&u, &tab, &random_pauli(n, &mut rng));
        }
    }
}

#[test]
fn uniform_cliffords_match_dense_unitaries() {
    let n = 6;
    let dim = 1usize << n;
    let mut rng = stream(22, 0);
    for _ in 0..5 {
        let tab = sample_uniform_clifford(n, &mut rng);
        let mut u = DMatrix::from_element(dim, dim, zero());
        for col in 0..dim {
            let mut amps = vec![zero(); dim];
            amps[col] = C64::new(1.0, 0.0);
            let mut s = StateVector::from_amplitudes(n, amps);
            s.apply_clifford(&tab);
            for (row, a) in s.amplitudes().iter().enumerate() {
                u[(row, col)] = *a;
            }
        }
        for _ in 0..20 {
            assert_dense_conjugation(&u, &tab, &random_pauli(n, &mut rng));
        }
    }
}

#[test]
fn textbook_gate_images() {
    let (z, sign) = conjugate(&CliffordTableau::hadamard(1, 0), &PauliString::from_label("Z").unwrap()).unwrap();
    assert_eq!((z.label(), sign), ("X".to_string(), 1));
    let (xx, sign) = conjugate(&CliffordTableau::cnot(2, 0, 1), &PauliString::from_label("XI").unwrap()).unwrap();
    assert_eq!((xx.label(), sign), ("XX".to_string(), 1));
}

#[test]
fn single_qubit_group_is_sampled_uniformly() {
    let draws = 24_000;
    let mut rng = stream(23, 0);
    let mut freq: HashMap<String, u32> = HashMap::new();
    for _ in 0..draws {
        *freq.entry(sample_uniform_clifford(1, &mut rng).to_text()).or_default() += 1;
    }
    assert_eq!(freq.len(), 24);
    let p = 1.0 / 24.0;
    let sigma = (f64::from(draws) * p * (1.0 - p)).sqrt();
    for (k, c) in &freq {
        assert!((f64::from(*c) - f64::from(draws) * p).abs() <= 5.0 * sigma, "{k}: {c}");
    }
}

#[test]
fn conjugated_z_is_diagonal_with_small_probability() {
    let n = 10;
    let draws = 10_000;
    let mut rng = stream(24, 0);
    let z = PauliString::single(n, 0, Pauli::Z);
    let hits = (0..draws)
        .filter(|_| conjugate(&sample_uniform_clifford(n, &mut rng), &z).unwrap().0.x_support().is_zero())
        .count();
    let p = 1.0 / f64::from((1u32 << n) + 1);
    let sigma = (f64::from(draws) * p * (1.0 - p)).sqrt();
    assert!((hits as f64 - f64::from(draws) * p).abs() <= 5.0 * sigma, "{hits}");
}

#[test]
fn images_of_a_fixed_pauli_are_uniform() {
    let n = 3;
    let draws = 100_000;
    let mut rng = stream(25, 0);
    let p = PauliString::from_label("XIZ").unwrap();
    let mut bins = vec![0u32; 2 * 64];
    for _ in 0..draws {
        let (q, sign) = conjugate(&sample_uniform_clifford(n, &mut rng), &p).unwrap();
        let idx = (q.x_words()[0] | q.z_words()[0] << 3) as usize;
        bins[2 * idx + usize::from(sign < 0)] += 1;
    }
    assert_eq!(bins[0] + bins[1], 0, "identity is never an image");
    let expected = f64::from(draws) / 126.0;
    let chi2: f64 = bins[2..].iter().map(|&c| (f64::from(c) - expected).powi(2) / expected).sum();
    let crit = ChiSquared::new(125.0).unwrap().inverse_cdf(1.0 - 1e-6);
    assert!(chi2 < crit, "chi-square {chi2} above {crit}");
}

#[test]
fn degenerate_brickwork_is_a_uniform_two_qubit_clifford() {
    let draws = 115_200;
    let mut rng = stream(26, 0);
    let mut seen: HashMap<String, u32> = HashMap::new();
    for _ in 0..draws {
        *seen.entry(sample_brickwork_layer(2, 1, &mut rng).unwrap().to_text()).or_default() += 1;
    }
    assert_eq!(two_qubit_cliffords().len(), 11520);
    assert!(seen.len() > 11_400, "{} distinct of 11520", seen.len());
    assert!(sample_brickwork_layer(1, 2, &mut rng).is_err());
}

#[test]
fn brickwork_lightcone_matches_gate_by_gate_conjugation() {
    let n = 6;
    let mut rng = stream(27, 0);
    for _ in 0..200 {
        let rows = sample_brickwork_gates(n, 2, &mut rng).unwrap();
        let layer = scramble_sense::tableau::brickwork_tableau(n, &rows);
        assert!(layer.is_valid());
        let p = PauliString::single(n, 0, Pauli::Z);
        // Heisenberg order: the last row acts on the operator first.
        let mut q = p;
        let mut sign = 1i8;
        let mut cone = vec![false; n];
        cone[0] = true;
        for gate in rows.iter().rev().flat_map(|row| row.iter()) {
            let (next, s) = conjugate(&gate_tableau(n, gate), &q).unwrap();
            q = next;
            sign *= s;
        }
        for row in rows.iter().rev() {
            let hit: Vec<(usize, usize)> = row.iter().map(|g| (g.a, g.b)).filter(|&(a, b)| cone[a] || cone[b]).collect();
            for (a, b) in hit {
                cone[a] = true;
                cone[b] = true;
            }
        }
        let (got, s) = conjugate(&layer, &p).unwrap();
        assert_eq!((got, s), (q, sign));
        for k in 0..n {
            assert!(cone[k] || got.get(k) == Pauli::I, "support leaked to qubit {k}");
        }
    }
}

#[test]
fn composition_laws() {
    let n = 5;
    let mut rng = stream(28, 0);
    let id = CliffordTableau::identity(n);
    for _ in 0..100 {
        let a = sample_uniform_clifford(n, &mut rng);
        let b = sample_uniform_clifford(n, &mut rng);
        assert_eq!(compose(&a, &id).unwrap(), a);
        assert_eq!(inverse(&inverse(&a)), a);
        let x1 = PauliString::single(n, 0, Pauli::X);
        assert_eq!(conjugate(&compose(&inverse(&a), &a).unwrap(), &x1).unwrap(), (x1, 1));
        let p = random_pauli(n, &mut rng);
        let (mid, s1) = conjugate(&a, &p).unwrap();
        let (seq, s2) = conjugate(&b, &mid).unwrap();
        assert_eq!(conjugate(&compose(&a, &b).unwrap(), &p).unwrap(), (seq, s1 * s2));
    }
    assert!(compose(&id, &CliffordTableau::identity(4)).is_err());
}

#[test]
fn family_prefixes_and_terminal() {
    for kind in [FamilyKind::GlobalUniform, FamilyKind::BrickworkLocal] {
        let fam = CircuitFamily::sample(kind, 6, 4, 9).unwrap();
        let mut acc = CliffordTableau::identity(6);
        for t in 1..=4 {
            acc = compose(fam.layer(t), &acc).unwrap();
            assert_eq!(fam.prefix(t), &acc);
        }
        assert!(compose(fam.terminal(), fam.prefix(4)).unwrap().is_identity());
        let again = CircuitFamily::sample(kind, 6, 4, 9).unwrap();
        assert_eq!(again.prefix(4), fam.prefix(4));
    }
}

#[test]
fn text_form_round_trips() {
    let mut rng = stream(29, 0);
    let c = sample_uniform_clifford(7, &mut rng);
    let text = c.to_text();
    assert_eq!(text.lines().count(), 15);
    assert_eq!(CliffordTableau::from_text(&text).unwrap(), c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sampled_tableaux_preserve_commutation(n in 1usize..=8, seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let c = sample_uniform_clifford(n, &mut rng);
        prop_assert!(c.is_valid());
        if n >= 2 {
            prop_assert!(sample_brickwork_layer(n, 2, &mut rng).unwrap().is_valid());
        }
    }

    #[test]
    fn conjugation_keeps_hermitian_paulis_hermitian(seed in any::<u64>()) {
        let mut rng = stream(seed, 1);
        let c = sample_uniform_clifford(6, &mut rng);
        let p = random_pauli(6, &mut rng);
        let (q, sign) = conjugate(&c, &p).unwrap();
        prop_assert!(q.is_hermitian() && !q.is_identity());
        prop_assert!(sign == 1 || sign == -1);
        let (back, s) = conjugate(&inverse(&c), &q).unwrap();
        prop_assert_eq!((back, s * sign), (p, 1));
    }
}
