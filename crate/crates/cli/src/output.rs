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

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use scramble_sense::harness::{Experiment, ExperimentConfig, ScalingRecord, TrialResult};
use scramble_sense::SignalKind;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Bumped whenever a column is added, removed or reordered.
pub const FORMAT_VERSION: u32 = 1;

/// First 16 hex digits of the SHA-256 of the canonical config JSON.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let bytes = serde_json::to_vec(cfg).expect("config serializes");
    Sha256::digest(&bytes).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn csv_writer(path: &Path, what: &str, cfg: &ExperimentConfig) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let mut file = BufWriter::new(File::create(path)?);
    writeln!(
        file,
        "# scramble-sense {what} v{FORMAT_VERSION} seed={} config={}",
        cfg.seed,
        config_hash(cfg)
    )?;
    Ok(csv::Writer::from_writer(file))
}

#[derive(Serialize)]
struct EstimateRow {
    id: usize,
    kind: SignalKind,
    t: usize,
    pauli: String,
    #[serde(rename = "true")]
    truth: f64,
    estimate: f64,
    predicted_std: f64,
    thresholded: bool,
    corrected: bool,
}

pub fn write_estimates(path: &Path, exp: &Experiment, trial: &TrialResult) -> Result<(), CliError> {
    let mut w = csv_writer(path, "estimates", &exp.config)?;
    for e in &trial.report.entries {
        let s = &exp.signals.signals[e.id];
        w.serialize(EstimateRow {
            id: e.id,
            kind: e.kind,
            t: s.t,
            pauli: s.generator.to_string(),
            truth: exp.target(e.id),
            estimate: e.estimate,
            predicted_std: e.predicted_std,
            thresholded: e.thresholded,
            corrected: e.corrected,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary(path: &Path, exp: &Experiment, trial: &TrialResult) -> Result<(), CliError> {
    let m = &trial.metrics;
    let finite = |x: f64| if x.is_finite() { json!(x) } else { json!(null) };
    let summary = json!({
        "format_version": FORMAT_VERSION,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": exp.config.seed,
        "config_hash": config_hash(&exp.config),
        "protocol": exp.config.protocol,
        "n": exp.config.n,
        "shots": trial.shots,
        "signals": exp.signals.len(),
        "A": m.a_true,
        "A_hat": m.a_hat,
        "rms_coherent": finite(m.rms_coherent),
        "rms_incoherent": finite(m.rms_incoherent),
        "rms_coherent_nonzero": finite(m.rms_coherent_nonzero),
        "rms_incoherent_nonzero": finite(m.rms_incoherent_nonzero),
        "max_abs_error": m.max_abs_error,
        "decode": trial.decode,
    });
    let mut file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut file, &summary).map_err(|e| CliError::Config(e.to_string()))?;
    writeln!(file)?;
    Ok(())
}

#[derive(Serialize)]
struct ScalingRow {
    #[serde(rename = "M")]
    m: u64,
    rms_coherent: f64,
    rms_incoherent: f64,
    theory_coherent: f64,
    theory_incoherent: f64,
    slope_running: f64,
}

pub fn write_scaling(path: &Path, cfg: &ExperimentConfig, records: &[ScalingRecord]) -> Result<(), CliError> {
    let mut w = csv_writer(path, "scaling", cfg)?;
    for r in records {
        w.serialize(ScalingRow {
            m: r.m,
            rms_coherent: r.rms_coherent,
            rms_incoherent: r.rms_incoherent,
            theory_coherent: r.theory_coherent,
            theory_incoherent: r.theory_incoherent,
            slope_running: r.slope_running,
        })?;
    }
    w.flush()?;
    Ok(())
}
