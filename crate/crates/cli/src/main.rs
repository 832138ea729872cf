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

//! Command-line driver: runs experiments from JSON configs and writes CSV/JSON artifacts.

mod output;
mod theory_cmd;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::Rng;
use scramble_sense::harness::{scaling_sweep, Experiment, ExperimentConfig};
use scramble_sense::readout::{apply_bitflip_noise, correctability_check, decode_counts, CodewordSet};
use scramble_sense::rng::stream;
use scramble_sense::{Bitstring, BitstringCounts};
use serde_json::json;

const PRESETS: [(&str, &str); 4] = [
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("ruc", include_str!("../presets/ruc.json")),
    ("hamiltonian", include_str!("../presets/hamiltonian.json")),
];

#[derive(Parser)]
#[command(name = "scramble-sense", version, about = "Multiparameter sensing with scrambling circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment at the first shot count and write estimates.csv and summary.json.
    Run {
        config: PathBuf,
        /// Output directory; defaults to the config's `output` or the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the configured shot counts and write scaling.csv.
    Scaling {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print closed-form predictions as JSON.
    Theory(theory_cmd::TheoryArgs),
    /// Perturb random codewords with readout noise and decode them.
    DecodeDemo {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        gamma_r: f64,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print a bundled configuration.
    Preset {
        /// One of fig2, fig3, ruc, hamiltonian.
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl From<scramble_sense::Error> for CliError {
    fn from(e: scramble_sense::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn out_dir(cfg: &ExperimentConfig, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
    let dir = flag.or_else(|| cfg.output.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn prepare(cfg: &ExperimentConfig) -> Result<Experiment, CliError> {
    for w in cfg.validate()? {
        eprintln!("warning: {w}");
    }
    Ok(Experiment::prepare(cfg)?)
}

fn cmd_run(path: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = load_config(path)?;
    let exp = prepare(&cfg)?;
    let m = cfg.shots.values()[0];
    let trial = exp.trial(m, 0)?;
    let dir = out_dir(&cfg, out)?;
    output::write_estimates(&dir.join("estimates.csv"), &exp, &trial)?;
    output::write_summary(&dir.join("summary.json"), &exp, &trial)?;
    eprintln!("wrote {} and {}", dir.join("estimates.csv").display(), dir.join("summary.json").display());
    Ok(())
}

fn cmd_scaling(path: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = load_config(path)?;
    prepare(&cfg)?;
    let records = scaling_sweep(&cfg, &cfg.shots.values())?;
    let dir = out_dir(&cfg, out)?;
    output::write_scaling(&dir.join("scaling.csv"), &cfg, &records)?;
    eprintln!("wrote {}", dir.join("scaling.csv").display());
    Ok(())
}

fn cmd_decode_demo(n: usize, k: usize, gamma_r: f64, shots: u64, seed: u64) -> Result<(), CliError> {
    if n == 0 || n > 64 {
        return Err(CliError::Config("decode-demo supports 1 to 64 qubits".into()));
    }
    if k as f64 >= 2f64.powi(n as i32) {
        return Err(CliError::Config(format!("{k} nonzero codewords do not fit in {n} bits")));
    }
    let mut rng = stream(seed, 0);
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut words: Vec<Bitstring> = Vec::with_capacity(k);
    while words.len() < k {
        let w = Bitstring::from_index(n, rng.random::<u64>() & mask);
        if !w.is_zero() && !words.contains(&w) {
            words.push(w);
        }
    }
    let set = CodewordSet::new(n, &words)?;
    let check = correctability_check(&set, gamma_r);
    let per_word = (shots / set.codewords.len() as u64).max(1);
    let (mut correct, mut total, mut out_of_radius, mut ties) = (0.0, 0.0, 0.0, 0.0);
    for (i, w) in set.codewords.iter().enumerate() {
        let mut clean = BitstringCounts::new(n);
        clean.add(*w, per_word as f64);
        let noisy = apply_bitflip_noise(&clean, gamma_r, seed.wrapping_add(1 + i as u64))?;
        let (decoded, stats) = decode_counts(&noisy, &set);
        correct += decoded.count(w);
        total += stats.shots;
        out_of_radius += stats.out_of_radius;
        ties += stats.ties;
    }
    let report = json!({
        "n": n,
        "codewords": set.codewords.len(),
        "d_min": set.d_min,
        "radius": set.radius(),
        "threshold": check.threshold,
        "gamma_r": gamma_r,
        "correctable": check.correctable,
        "probability_bound": check.probability_bound,
        "probability_approx": check.probability_approx,
        "shots": total,
        "decoded_correctly": correct / total,
        "out_of_radius": out_of_radius / total,
        "ties": ties / total,
        "seed": seed,
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}

fn cmd_preset(name: Option<String>, list: bool) -> Result<(), CliError> {
    if list {
        for (n, _) in PRESETS {
            println!("{n}");
        }
        return Ok(());
    }
    let name = name.ok_or_else(|| CliError::Config("preset name required (or --list)".into()))?;
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CliError::Config(format!("unknown preset {name}")))?;
    print!("{text}");
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SCRAMBLE_SENSE_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("SCRAMBLE_SENSE_THREADS={value} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run { config, out } => cmd_run(&config, out),
        Command::Scaling { config, out } => cmd_scaling(&config, out),
        Command::Theory(args) => theory_cmd::run(&args),
        Command::DecodeDemo { n, k, gamma_r, shots, seed } => cmd_decode_demo(n, k, gamma_r, shots, seed),
        Command::Preset { name, list } => cmd_preset(name, list),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
