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

//! End-to-end experiments: configuration, trials, sweeps and infinite-shot bias.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counts::BitstringCounts;
use crate::error::{Error, Result};
use crate::estimator::{
    estimate_clifford_coherent, estimate_clifford_incoherent, estimate_dense, estimate_quadratic, estimate_tilted,
    hard_threshold, overlap_correct, second_order_correct, CircuitRun, DenseRun, EstimateReport, RamseyKind,
    DEFAULT_PHI,
};
use crate::pauli::{Bitstring, PauliString};
use crate::patterns::{dense_patterns, family_patterns, DensePatterns, Pattern};
use crate::readout::{
    apply_bitflip_noise, convolve_bitflip, corrected_frequency, decode_counts, CodewordSet, DecodeStats,
};
use crate::rng::{derive_seed, stream};
use crate::signal::{pools, random_sparse_instance, signal_fidelity_a, Ranges, SignalKind, SignalSet, SignalSpec, Sparsity};
use crate::sim::{
    build_protocol_circuit, exact_distribution, kim_huse_hamiltonian, sample_distribution, sample_shots,
    stabilizer_codewords, Circuit, Protocol, Randomness, RucGates,
};
use crate::tableau::{sample_uniform_clifford, CircuitFamily, FamilyKind};
use crate::theory::{self, predict_variance, CircuitKind, PredictionInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentProtocol {
    QuadRamsey,
    TiltedRamsey,
    GlobalClifford,
    LocalClifford,
    Ruc,
    Hamiltonian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pool {
    LocalXyz,
    RamseyZ,
    RamseyZSingle,
    RamseyZTwoBody,
    /// Random strings of 1 to `max_body` copies of one letter.
    RandomLetters { max_body: usize, count: usize },
    /// Uniformly random non-identity strings.
    RandomPaulis { count: usize },
}

impl Pool {
    pub fn generate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<PauliString>> {
        Ok(match self {
            Pool::LocalXyz => pools::local_xyz(n),
            Pool::RamseyZ => pools::ramsey_z(n),
            Pool::RamseyZSingle => pools::ramsey_z_single(n),
            Pool::RamseyZTwoBody => pools::ramsey_z_two_body(n),
            Pool::RandomLetters { max_body, count } => pools::random_uniform_letter_strings(n, *max_body, *count, rng)?,
            Pool::RandomPaulis { count } => pools::random_paulis(n, *count, rng)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalEntry {
    pub kind: SignalKind,
    pub pauli: String,
    pub t: usize,
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    pub pool: Pool,
    pub sparsity: Sparsity,
    pub ranges: Ranges,
    /// Candidate kinds; both when omitted.
    #[serde(default)]
    pub kinds: Option<Vec<SignalKind>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalSource {
    Explicit(Vec<SignalEntry>),
    Recipe(Recipe),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shots {
    Single(u64),
    Sweep(Vec<u64>),
}

impl Shots {
    pub fn values(&self) -> Vec<u64> {
        match self {
            Shots::Single(m) => vec![*m],
            Shots::Sweep(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMode {
    #[default]
    None,
    /// Subtract the coherent share using the coherent estimates.
    Estimated,
    /// Subtract the coherent share using the true coherent amplitudes.
    Oracle,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Threshold {
    #[serde(default)]
    pub theta_min: Option<f64>,
    #[serde(default)]
    pub gamma_min: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corrections {
    #[serde(default)]
    pub confusion: bool,
    #[serde(default)]
    pub decode: bool,
    #[serde(default)]
    pub threshold: Option<Threshold>,
    #[serde(default)]
    pub second_order: bool,
    #[serde(default)]
    pub overlap: OverlapMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitCounts {
    #[serde(default = "one")]
    pub coherent: usize,
    #[serde(default = "one")]
    pub incoherent: usize,
    /// Circuits for random-unitary and Hamiltonian protocols.
    #[serde(default = "one")]
    pub dense: usize,
}

impl Default for CircuitCounts {
    fn default() -> Self {
        Self { coherent: 1, incoherent: 1, dense: 1 }
    }
}

fn one() -> usize {
    1
}

fn default_phi() -> f64 {
    DEFAULT_PHI
}

fn default_tau() -> f64 {
    5.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: ExperimentProtocol,
    pub n: usize,
    pub t_steps: usize,
    pub signals: SignalSource,
    #[serde(default)]
    pub n_circuits: CircuitCounts,
    #[serde(default = "default_phi")]
    pub phi: f64,
    #[serde(default)]
    pub gamma_readout: f64,
    pub shots: Shots,
    pub seed: u64,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub corrections: Corrections,
    /// Evolution time between signal layers (Hamiltonian protocol).
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Accept circuit counts below the theoretical requirement.
    #[serde(default)]
    pub override_circuits: bool,
    /// Calibrated `(β_coherent, β_incoherent)` for random-unitary and Hamiltonian overlays.
    #[serde(default)]
    pub beta: Option<(f64, f64)>,
    #[serde(default)]
    pub output: Option<String>,
}

/// Failure target used for circuit-count warnings.
pub const CIRCUIT_DELTA: f64 = 0.05;

impl ExperimentConfig {
    /// Checks ranges and returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.n == 0 || self.t_steps == 0 {
            return Err(Error::Input("n and t_steps must be positive".into()));
        }
        if self.shots.values().is_empty() || self.shots.values().contains(&0) {
            return Err(Error::Input("shot counts must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.gamma_readout) {
            return Err(Error::Input("gamma_readout must lie in [0, 0.5)".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Input("repetitions must be positive".into()));
        }
        let c = self.n_circuits;
        if c.coherent == 0 || c.incoherent == 0 || c.dense == 0 {
            return Err(Error::Input("circuit counts must be positive".into()));
        }
        let mut warnings = Vec::new();
        if matches!(self.protocol, ExperimentProtocol::GlobalClifford | ExperimentProtocol::LocalClifford) {
            let signals = self.build_signals()?;
            let k_ic = signals.of_kind(SignalKind::Incoherent).count();
            let k_c = signals.of_kind(SignalKind::Coherent).count();
            let need_ic = if k_ic >= 2 { theory::required_circuits(CircuitKind::Incoherent, k_ic, self.n, CIRCUIT_DELTA)? } else { 1 };
            let need_c = if k_c >= 1 { theory::required_circuits(CircuitKind::Coherent, k_c, self.n, CIRCUIT_DELTA)? } else { 1 };
            for (have, need, what) in [(c.incoherent, need_ic, "incoherent"), (c.coherent, need_c, "coherent")] {
                if have < need {
                    let msg = format!("{have} {what} circuits is below the {need} required for δ = {CIRCUIT_DELTA}");
                    if !self.override_circuits {
                        return Err(Error::Input(format!("{msg}; set override_circuits to proceed")));
                    }
                    warnings.push(msg);
                }
            }
        }
        Ok(warnings)
    }

    pub fn build_signals(&self) -> Result<SignalSet> {
        match &self.signals {
            SignalSource::Explicit(list) => {
                let specs = list
                    .iter()
                    .map(|e| {
                        let generator = PauliString::from_label(&e.pauli)?;
                        if generator.n() != self.n {
                            return Err(Error::QubitMismatch(generator.n(), self.n));
                        }
                        Ok(SignalSpec { id: 0, kind: e.kind, generator, t: e.t, amplitude: e.amplitude })
                    })
                    .collect::<Result<Vec<_>>>()?;
                SignalSet::new(self.n, self.t_steps, specs)
            }
            SignalSource::Recipe(r) => {
                let mut rng = stream(self.seed, 0);
                let pool = r.pool.generate(self.n, &mut rng)?;
                let kinds = r.kinds.clone().unwrap_or_else(|| match self.protocol {
                    ExperimentProtocol::QuadRamsey | ExperimentProtocol::TiltedRamsey => vec![SignalKind::Coherent],
                    _ => vec![SignalKind::Coherent, SignalKind::Incoherent],
                });
                random_sparse_instance(&pool, self.t_steps, &kinds, r.sparsity, r.ranges, &mut rng)
            }
        }
    }
}

/// A circuit with an optional cached output distribution.
#[derive(Clone, Debug)]
struct Prepared {
    circuit: Circuit,
    exact: Option<Vec<f64>>,
}

/// Largest active-channel count for which distributions are cached.
const CACHE_CHANNELS: usize = 6;

impl Prepared {
    fn new(circuit: Circuit) -> Result<Self> {
        let cheap = circuit.n <= 12 && circuit.active_channels().len() <= CACHE_CHANNELS;
        let exact = if stabilizer_codewords(&circuit).is_none() && cheap { Some(exact_distribution(&circuit)?) } else { None };
        Ok(Self { circuit, exact })
    }

    fn clean_counts(&self, shots: u64, seed: u64) -> Result<BitstringCounts> {
        match &self.exact {
            Some(p) => sample_distribution(self.circuit.n, p, shots, 0.0, seed),
            None => sample_shots(&self.circuit, shots, 0.0, seed),
        }
    }

    fn exact(&self) -> Result<Vec<f64>> {
        match &self.exact {
            Some(p) => Ok(p.clone()),
            None => exact_distribution(&self.circuit),
        }
    }
}

#[derive(Clone, Debug)]
enum Setup {
    Ramsey(Prepared),
    Clifford {
        inc_ids: Vec<usize>,
        coh_ids: Vec<usize>,
        z: Vec<(Prepared, Vec<Pattern>)>,
        x: Vec<(Prepared, Vec<Pattern>)>,
        codes: Vec<CodewordSet>,
    },
    Dense(Vec<(Prepared, DensePatterns)>),
}

/// Instance, circuits and patterns built once from a configuration.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub signals: SignalSet,
    setup: Setup,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrialMetrics {
    pub rms_coherent: f64,
    pub rms_incoherent: f64,
    pub rms_coherent_nonzero: f64,
    pub rms_incoherent_nonzero: f64,
    pub max_abs_error: f64,
    pub a_true: f64,
    pub a_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialResult {
    pub shots: u64,
    pub report: EstimateReport,
    pub metrics: TrialMetrics,
    pub decode: Option<DecodeStats>,
}

/// Confusion-corrected tallies on the codewords only, which is all the point-mass estimator reads.
fn codeword_corrected(counts: &BitstringCounts, code: &CodewordSet, gamma_r: f64) -> Result<BitstringCounts> {
    let mut out = BitstringCounts::new(counts.n);
    out.shots = counts.shots;
    for w in &code.codewords {
        let f = corrected_frequency(counts, w, gamma_r)?;
        out.tallies.insert(*w, f * counts.shots);
    }
    Ok(out)
}

fn split_shots(total: u64, parts: usize) -> Vec<u64> {
    let base = total / parts as u64;
    let extra = (total % parts as u64) as usize;
    (0..parts).map(|i| base + u64::from(i < extra)).collect()
}

fn shot_seed(seed: u64, rep: usize, m: u64, label: u64) -> u64 {
    derive_seed(derive_seed(derive_seed(seed, 0x5107), rep as u64), m ^ (label << 40))
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        f64::NAN
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

impl Experiment {
    pub fn prepare(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let signals = config.build_signals()?;
        let n = config.n;
        let setup = match config.protocol {
            ExperimentProtocol::QuadRamsey | ExperimentProtocol::TiltedRamsey => {
                let p = if config.protocol == ExperimentProtocol::QuadRamsey {
                    Protocol::QuadRamsey
                } else {
                    Protocol::TiltedRamsey
                };
                Setup::Ramsey(Prepared::new(build_protocol_circuit(p, &signals, &Randomness::None, config.phi)?)?)
            }
            ExperimentProtocol::GlobalClifford | ExperimentProtocol::LocalClifford => {
                let kind = if config.protocol == ExperimentProtocol::GlobalClifford {
                    FamilyKind::GlobalUniform
                } else {
                    FamilyKind::BrickworkLocal
                };
                let inc_ids: Vec<usize> = signals.of_kind(SignalKind::Incoherent).map(|s| s.id).collect();
                let coh_ids: Vec<usize> = signals.of_kind(SignalKind::Coherent).map(|s| s.id).collect();
                let build = |count: usize, label: u64, proto: Protocol, sk: SignalKind| -> Result<Vec<(Prepared, Vec<Pattern>)>> {
                    (0..count)
                        .into_par_iter()
                        .map(|i| {
                            let fam = CircuitFamily::sample(kind, n, config.t_steps, derive_seed(config.seed, label + i as u64))?;
                            let c = build_protocol_circuit(proto, &signals, &Randomness::Family(&fam), 0.0)?;
                            let pats = family_patterns(&fam, &signals, sk)?.into_iter().map(|p| p.1).collect();
                            Ok((Prepared::new(c)?, pats))
                        })
                        .collect()
                };
                let z = build(config.n_circuits.incoherent, 1 << 20, Protocol::CliffordZ, SignalKind::Incoherent)?;
                let x = if coh_ids.is_empty() {
                    Vec::new()
                } else {
                    build(config.n_circuits.coherent, 2 << 20, Protocol::CliffordX, SignalKind::Coherent)?
                };
                let codes = z
                    .iter()
                    .map(|(_, pats)| {
                        let mut words: Vec<Bitstring> = pats
                            .iter()
                            .map(|p| match p {
                                Pattern::PointMass { z } => *z,
                                _ => unreachable!("incoherent Clifford patterns are point masses"),
                            })
                            .collect();
                        words.sort();
                        words.dedup();
                        CodewordSet::new(n, &words)
                    })
                    .collect::<Result<_>>()?;
                Setup::Clifford { inc_ids, coh_ids, z, x, codes }
            }
            ExperimentProtocol::Ruc | ExperimentProtocol::Hamiltonian => {
                let h = if config.protocol == ExperimentProtocol::Hamiltonian {
                    Some(Arc::new(kim_huse_hamiltonian(n)?))
                } else {
                    None
                };
                let runs = (0..config.n_circuits.dense)
                    .into_par_iter()
                    .map(|i| {
                        let c = match &h {
                            Some(h) => build_protocol_circuit(
                                Protocol::Hamiltonian,
                                &signals,
                                &Randomness::Hamiltonian { h: h.clone(), tau: config.tau },
                                0.0,
                            )?,
                            None => {
                                let g = RucGates::sample(n, config.t_steps, derive_seed(config.seed, (3 << 20) + i as u64))?;
                                build_protocol_circuit(Protocol::Ruc, &signals, &Randomness::Ruc(&g), 0.0)?
                            }
                        };
                        let pats = dense_patterns(&c, &signals)?;
                        Ok((Prepared::new(c)?, pats))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Setup::Dense(runs)
            }
        };
        Ok(Self { config: config.clone(), signals, setup })
    }

    /// Codeword sets of the z-basis circuits (Clifford protocols only).
    pub fn codeword_sets(&self) -> &[CodewordSet] {
        match &self.setup {
            Setup::Clifford { codes, .. } => codes,
            _ => &[],
        }
    }

    /// Clean (readout-free) counts for every circuit group: `[z circuits, x circuits]` for
    /// Clifford protocols and a single group otherwise.
    pub fn sample_clean(&self, m: u64, rep: usize) -> Result<Vec<Vec<BitstringCounts>>> {
        let seed = self.config.seed;
        let group = |preps: Vec<&Prepared>, label: u64| -> Result<Vec<BitstringCounts>> {
            if preps.is_empty() {
                return Ok(Vec::new());
            }
            let shots = split_shots(m, preps.len());
            preps
                .par_iter()
                .zip(shots)
                .enumerate()
                .map(|(i, (p, s))| p.clean_counts(s, shot_seed(seed, rep, m, label + i as u64)))
                .collect()
        };
        match &self.setup {
            Setup::Ramsey(p) => Ok(vec![group(vec![p], 0)?]),
            Setup::Clifford { z, x, .. } => Ok(vec![
                group(z.iter().map(|r| &r.0).collect(), 1 << 16)?,
                group(x.iter().map(|r| &r.0).collect(), 2 << 16)?,
            ]),
            Setup::Dense(runs) => Ok(vec![group(runs.iter().map(|r| &r.0).collect(), 3 << 16)?]),
        }
    }

    /// Exact output distributions arranged like [`Experiment::sample_clean`], as unit-weight
    /// records, with readout noise convolved in.
    pub fn exact_counts(&self, gamma_r: f64) -> Result<Vec<Vec<BitstringCounts>>> {
        let n = self.config.n;
        let conv = |p: &Prepared| -> Result<BitstringCounts> {
            Ok(BitstringCounts::from_distribution(n, &convolve_bitflip(&p.exact()?, n, gamma_r)))
        };
        match &self.setup {
            Setup::Ramsey(p) => Ok(vec![vec![conv(p)?]]),
            Setup::Clifford { z, x, .. } => Ok(vec![
                z.par_iter().map(|r| conv(&r.0)).collect::<Result<_>>()?,
                x.par_iter().map(|r| conv(&r.0)).collect::<Result<_>>()?,
            ]),
            Setup::Dense(runs) => Ok(vec![runs.par_iter().map(|r| conv(&r.0)).collect::<Result<_>>()?]),
        }
    }

    /// Applies readout noise to clean counts with a seed independent of the clean sample.
    pub fn add_readout(&self, clean: &[Vec<BitstringCounts>], m: u64, rep: usize) -> Result<Vec<Vec<BitstringCounts>>> {
        let g = self.config.gamma_readout;
        clean
            .iter()
            .enumerate()
            .map(|(gi, grp)| {
                grp.iter()
                    .enumerate()
                    .map(|(i, c)| {
                        apply_bitflip_noise(c, g, shot_seed(self.config.seed, rep, m, (9 << 20) + ((gi as u64) << 12) + i as u64))
                    })
                    .collect()
            })
            .collect()
    }

    /// Runs the configured estimator chain on per-circuit counts.
    pub fn estimate(&self, data: &[Vec<BitstringCounts>], threshold: bool) -> Result<(EstimateReport, Option<DecodeStats>)> {
        let cfg = &self.config;
        let corr = cfg.corrections;
        let gamma_c = if corr.confusion { cfg.gamma_readout } else { 0.0 };
        let mut decode = None;
        let report = match &self.setup {
            Setup::Ramsey(_) => {
                let counts = &data[0][0];
                if cfg.protocol == ExperimentProtocol::QuadRamsey {
                    let r = estimate_quadratic(counts, &self.signals, gamma_c)?;
                    if corr.second_order {
                        second_order_correct(&r, &self.signals, RamseyKind::Quadratic, cfg.phi)?
                    } else {
                        r
                    }
                } else {
                    let r = estimate_tilted(counts, &self.signals, cfg.phi, gamma_c)?;
                    if corr.second_order {
                        second_order_correct(&r, &self.signals, RamseyKind::Tilted, cfg.phi)?
                    } else {
                        r
                    }
                }
            }
            Setup::Clifford { inc_ids, coh_ids, z, codes, .. } => {
                let mut stats = DecodeStats::default();
                let mut zruns = Vec::with_capacity(z.len());
                for ((c, (_, pats)), code) in data[0].iter().zip(z).zip(codes) {
                    let counts = if corr.decode {
                        let (d, s) = decode_counts(c, code);
                        stats.shots += s.shots;
                        stats.ties += s.ties;
                        stats.out_of_radius += s.out_of_radius;
                        d
                    } else if gamma_c > 0.0 {
                        codeword_corrected(c, code, gamma_c)?
                    } else {
                        c.clone()
                    };
                    zruns.push(CircuitRun { counts, patterns: pats.clone() });
                }
                if corr.decode {
                    decode = Some(stats);
                }
                let inc = estimate_clifford_incoherent(inc_ids, &zruns)?;
                let mut report = inc.clone();
                if !coh_ids.is_empty() {
                    let Setup::Clifford { x, .. } = &self.setup else { unreachable!() };
                    let xruns: Vec<CircuitRun> = data[1]
                        .iter()
                        .zip(x)
                        .map(|(c, (_, pats))| CircuitRun { counts: c.clone(), patterns: pats.clone() })
                        .collect();
                    let coh = estimate_clifford_coherent(coh_ids, &xruns, inc.a_hat, gamma_c)?;
                    let thetas: Option<BTreeMap<usize, f64>> = match corr.overlap {
                        OverlapMode::None => None,
                        OverlapMode::Estimated => Some(coh.entries.iter().map(|e| (e.id, e.estimate)).collect()),
                        OverlapMode::Oracle => {
                            Some(coh_ids.iter().map(|&id| (id, self.signals.signals[id].amplitude)).collect())
                        }
                    };
                    if let Some(th) = thetas {
                        report = overlap_correct(&inc, &self.signals, &th);
                    }
                    report = report.merged(&coh);
                }
                report
            }
            Setup::Dense(runs) => {
                let dr: Vec<DenseRun> = data[0]
                    .iter()
                    .zip(runs)
                    .map(|(c, (_, p))| DenseRun { counts: c.clone(), patterns: p.clone() })
                    .collect();
                estimate_dense(&dr, gamma_c)?
            }
        };
        let report = match (corr.threshold, threshold) {
            (Some(t), true) => hard_threshold(&report, t.theta_min, t.gamma_min),
            _ => report,
        };
        Ok((report, decode))
    }

    /// True value each estimate is compared with (`|θ|` for quadratic Ramsey).
    pub fn target(&self, id: usize) -> f64 {
        let a = self.signals.signals[id].amplitude;
        if self.config.protocol == ExperimentProtocol::QuadRamsey {
            a.abs()
        } else {
            a
        }
    }

    pub fn metrics(&self, report: &EstimateReport) -> TrialMetrics {
        let mut sq: BTreeMap<(SignalKind, bool), Vec<f64>> = BTreeMap::new();
        let mut worst = 0.0f64;
        for e in &report.entries {
            let truth = self.target(e.id);
            let err = e.estimate - truth;
            worst = worst.max(err.abs());
            sq.entry((e.kind, false)).or_default().push(err * err);
            if truth != 0.0 {
                sq.entry((e.kind, true)).or_default().push(err * err);
            }
        }
        let rms = |k: SignalKind, nz: bool| sq.get(&(k, nz)).map_or(f64::NAN, |v| mean(v).sqrt());
        TrialMetrics {
            rms_coherent: rms(SignalKind::Coherent, false),
            rms_incoherent: rms(SignalKind::Incoherent, false),
            rms_coherent_nonzero: rms(SignalKind::Coherent, true),
            rms_incoherent_nonzero: rms(SignalKind::Incoherent, true),
            max_abs_error: worst,
            a_true: signal_fidelity_a(&self.signals),
            a_hat: report.a_hat,
        }
    }

    /// One full execution at `m` shots (per experiment kind for Clifford protocols).
    pub fn trial(&self, m: u64, rep: usize) -> Result<TrialResult> {
        let clean = self.sample_clean(m, rep)?;
        let noisy = self.add_readout(&clean, m, rep)?;
        let (report, decode) = self.estimate(&noisy, true)?;
        let metrics = self.metrics(&report);
        Ok(TrialResult { shots: m, report, metrics, decode })
    }

    /// Theory RMS overlays `(coherent, incoherent)` at `m` shots: root of the mean predicted
    /// variance over each kind.
    pub fn theory_rms(&self, m: u64) -> (f64, f64) {
        let cfg = &self.config;
        let a = signal_fidelity_a(&self.signals);
        let coh: Vec<&SignalSpec> = self.signals.of_kind(SignalKind::Coherent).collect();
        let gammas: Vec<f64> = self.signals.of_kind(SignalKind::Incoherent).map(|s| s.amplitude).collect();
        let rms = |est: theory::Estimator, count: usize, f: &dyn Fn(&mut PredictionInput)| -> f64 {
            if count == 0 {
                return f64::NAN;
            }
            let mut input = PredictionInput::new(est, m as f64, a);
            input.weights = vec![0; count];
            f(&mut input);
            predict_variance(&input).map_or(f64::NAN, |v| mean(&v).sqrt())
        };
        use theory::Estimator as E;
        match cfg.protocol {
            ExperimentProtocol::QuadRamsey => (rms(E::Quadratic, coh.len(), &|_| {}), f64::NAN),
            ExperimentProtocol::TiltedRamsey => {
                let set = |i: &mut PredictionInput| {
                    i.phi = cfg.phi;
                    i.gamma_r = if cfg.corrections.confusion { cfg.gamma_readout } else { 0.0 };
                    i.weights = coh.iter().map(|s| s.generator.weight()).collect();
                };
                (rms(E::Tilted, coh.len(), &set), f64::NAN)
            }
            ExperimentProtocol::GlobalClifford | ExperimentProtocol::LocalClifford => (
                rms(E::CliffordCoherent, coh.len(), &|_| {}),
                rms(E::CliffordIncoherent, gammas.len(), &|i| {
                    i.weights.clear();
                    i.gammas = gammas.clone();
                }),
            ),
            ExperimentProtocol::Ruc | ExperimentProtocol::Hamiltonian => match cfg.beta {
                Some((b1, b2)) => (
                    rms(E::Ruc, coh.len(), &|i| i.beta = Some(b1)),
                    rms(E::Ruc, gammas.len(), &|i| i.beta = Some(b2)),
                ),
                None => (f64::NAN, f64::NAN),
            },
        }
    }
}

/// Prepares `config` and runs a single trial.
pub fn run_trial(config: &ExperimentConfig, m: u64) -> Result<TrialResult> {
    Experiment::prepare(config)?.trial(m, 0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRecord {
    pub m: u64,
    pub rms_coherent: f64,
    pub rms_incoherent: f64,
    pub theory_coherent: f64,
    pub theory_incoherent: f64,
    /// Log-log slope of the RMS error over this and all smaller `M`.
    pub slope_running: f64,
}

/// Median of group means; plain mean for fewer than three values.
pub fn median_of_means(values: &[f64]) -> f64 {
    let v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.len() < 3 {
        return mean(&v);
    }
    let groups = v.len().min(5);
    let mut means: Vec<f64> = (0..groups)
        .map(|g| mean(&v.iter().skip(g).step_by(groups).copied().collect::<Vec<_>>()))
        .collect();
    means.sort_by(f64::total_cmp);
    if groups % 2 == 1 {
        means[groups / 2]
    } else {
        0.5 * (means[groups / 2 - 1] + means[groups / 2])
    }
}

/// Trials at every `m`, `config.repetitions` times each.
pub fn sweep_trials(exp: &Experiment, ms: &[u64]) -> Result<Vec<Vec<TrialResult>>> {
    ms.iter()
        .map(|&m| (0..exp.config.repetitions).into_par_iter().map(|r| exp.trial(m, r)).collect())
        .collect()
}

pub fn scaling_from_trials(exp: &Experiment, ms: &[u64], trials: &[Vec<TrialResult>]) -> Vec<ScalingRecord> {
    let mut out: Vec<ScalingRecord> = Vec::with_capacity(ms.len());
    for (&m, reps) in ms.iter().zip(trials) {
        let agg = |f: fn(&TrialMetrics) -> f64| {
            median_of_means(&reps.iter().map(|t| f(&t.metrics).powi(2)).collect::<Vec<_>>()).sqrt()
        };
        let (tc, ti) = exp.theory_rms(m);
        let rc = agg(|x| x.rms_coherent);
        let ri = agg(|x| x.rms_incoherent);
        let xs: Vec<f64> = out.iter().map(|r| r.m as f64).chain([m as f64]).collect();
        let pick = |r: &ScalingRecord| if r.rms_coherent.is_finite() { r.rms_coherent } else { r.rms_incoherent };
        let ys: Vec<f64> = out.iter().map(pick).chain([if rc.is_finite() { rc } else { ri }]).collect();
        let slope = if xs.len() >= 2 { theory::loglog_slope(&xs, &ys) } else { f64::NAN };
        out.push(ScalingRecord { m, rms_coherent: rc, rms_incoherent: ri, theory_coherent: tc, theory_incoherent: ti, slope_running: slope });
    }
    out
}

/// RMS error against `M` with theory overlays; needs at least three `M` values.
pub fn scaling_sweep(config: &ExperimentConfig, ms: &[u64]) -> Result<Vec<ScalingRecord>> {
    if ms.len() < 3 {
        return Err(Error::Input("a scaling sweep needs at least three shot counts".into()));
    }
    let exp = Experiment::prepare(config)?;
    let trials = sweep_trials(&exp, ms)?;
    Ok(scaling_from_trials(&exp, ms, &trials))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaFit {
    pub beta_c: f64,
    pub beta_ic: f64,
    /// `(M, β_c, β_ic)` per shot count.
    pub per_m: Vec<(u64, f64, f64)>,
}

/// `β_c = M A² E[(θ̂-θ)²]` over all coherent candidates and `β_ic = M A E[(γ̂-γ)²]` over nonzero
/// incoherent signals, averaged over `M`. Random-unitary and Hamiltonian protocols use
/// `β_ic = M A² E[(γ̂-γ)²]` over all candidates.
pub fn beta_from_trials(exp: &Experiment, ms: &[u64], trials: &[Vec<TrialResult>]) -> BetaFit {
    let a = signal_fidelity_a(&exp.signals);
    let dense = matches!(exp.config.protocol, ExperimentProtocol::Ruc | ExperimentProtocol::Hamiltonian);
    let mut per_m = Vec::new();
    for (&m, reps) in ms.iter().zip(trials) {
        let mut ec = Vec::new();
        let mut ei = Vec::new();
        for t in reps {
            for e in &t.report.entries {
                let truth = exp.target(e.id);
                let d = (e.estimate - truth).powi(2);
                match e.kind {
                    SignalKind::Coherent => ec.push(d),
                    SignalKind::Incoherent if truth != 0.0 || dense => ei.push(d),
                    SignalKind::Incoherent => {}
                }
            }
        }
        let a_ic = if dense { a * a } else { a };
        per_m.push((m, m as f64 * a * a * mean(&ec), m as f64 * a_ic * mean(&ei)));
    }
    let bc: Vec<f64> = per_m.iter().map(|p| p.1).collect();
    let bi: Vec<f64> = per_m.iter().map(|p| p.2).collect();
    BetaFit { beta_c: mean(&bc), beta_ic: mean(&bi), per_m }
}

pub fn sample_complexity_beta(config: &ExperimentConfig, ms: &[u64]) -> Result<BetaFit> {
    let exp = Experiment::prepare(config)?;
    let trials = sweep_trials(&exp, ms)?;
    Ok(beta_from_trials(&exp, ms, &trials))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasReport {
    /// `(id, kind, estimate - truth)` for every signal.
    pub bias: Vec<(usize, SignalKind, f64)>,
    pub mean_squared: f64,
    pub worst_case: f64,
}

/// Estimators applied to exact output distributions, without thresholding.
pub fn bias_infinite_m(config: &ExperimentConfig) -> Result<BiasReport> {
    let exp = Experiment::prepare(config)?;
    let data = exp.exact_counts(config.gamma_readout)?;
    let (report, _) = exp.estimate(&data, false)?;
    let bias: Vec<(usize, SignalKind, f64)> =
        report.entries.iter().map(|e| (e.id, e.kind, e.estimate - exp.target(e.id))).collect();
    let sq: Vec<f64> = bias.iter().map(|b| b.2 * b.2).collect();
    Ok(BiasReport { mean_squared: mean(&sq), worst_case: sq.iter().copied().fold(0.0, f64::max), bias })
}

/// Fraction of draws in which two of `k` random incoherent signals share a codeword in all `n_c`
/// uniformly random circuits.
pub fn collision_empirical(n: usize, k: usize, n_c: usize, draws: usize, seed: u64) -> f64 {
    let hits: usize = (0..draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = stream(seed, d as u64);
            let ps = pools::random_paulis(n, k, &mut rng).expect("enough distinct strings");
            let codes: Vec<Vec<Bitstring>> = (0..n_c)
                .map(|_| {
                    let c = sample_uniform_clifford(n, &mut rng);
                    ps.iter().map(|p| c.conjugate(p).expect("hermitian").0.x_support()).collect()
                })
                .collect();
            let mut keys: Vec<Vec<Bitstring>> = (0..k).map(|i| codes.iter().map(|c| c[i]).collect()).collect();
            keys.sort();
            usize::from(keys.windows(2).any(|w| w[0] == w[1]))
        })
        .sum();
    hits as f64 / draws as f64
}

/// Per-signal frequency with which a uniformly random Clifford hides a fixed coherent signal.
pub fn insensitivity_empirical(p: &PauliString, draws: usize, seed: u64) -> f64 {
    let hidden: usize = (0..draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = stream(seed, d as u64);
            let c = sample_uniform_clifford(p.n(), &mut rng);
            let pat = crate::patterns::clifford_coherent_pattern(&c, p).expect("hermitian");
            usize::from(!pat.is_sensitive())
        })
        .sum();
    hidden as f64 / draws as f64
}
