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

use clap::{ArgGroup, Args, ValueEnum};
use scramble_sense::estimator::DEFAULT_PHI;
use scramble_sense::theory::{
    collision_bound, insensitivity_failure, predict_variance, readout_transition_m_star, required_circuits,
    weingarten_d, CircuitKind, Estimator, PredictionInput,
};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, ValueEnum)]
pub enum ProtocolArg {
    Quadratic,
    Tilted,
    CliffordIncoherent,
    CliffordCoherent,
    Ruc,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    Coherent,
    Incoherent,
}

#[derive(Args)]
#[command(group(
    ArgGroup::new("mode")
        .required(true)
        .args(["protocol", "required_circuits", "collision", "m_star", "weingarten"])
))]
pub struct TheoryArgs {
    /// Predicted per-signal variance of an estimator.
    #[arg(long, value_enum, requires = "m")]
    protocol: Option<ProtocolArg>,
    /// Circuits needed for a failure probability of at most `--delta`.
    #[arg(long, value_enum, requires_all = ["k", "delta"])]
    required_circuits: Option<KindArg>,
    /// Collision bound for `--K` signals, `--N` qubits and `--n-c` circuits.
    #[arg(long, requires_all = ["k", "n", "n_c"])]
    collision: bool,
    /// Readout transition shot count for `--gamma-r`, `--N` and `--theta`.
    #[arg(long, requires_all = ["gamma_r", "n", "theta"])]
    m_star: bool,
    /// Lightcone correlation for separations `--lu`, `--lv`.
    #[arg(long, requires_all = ["lu", "lv"])]
    weingarten: bool,

    #[arg(long = "M")]
    m: Option<f64>,
    #[arg(long = "A", default_value_t = 1.0)]
    a: f64,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Incoherent rates, comma separated.
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,
    /// Pauli weights for the tilted estimator, comma separated.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_PHI)]
    phi: f64,
    #[arg(long)]
    gamma_r: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    n_c: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    lu: Option<usize>,
    #[arg(long)]
    lv: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("missing --{flag}")))
}

fn evaluate(args: &TheoryArgs) -> Result<Value, CliError> {
    if let Some(p) = args.protocol {
        let estimator = match p {
            ProtocolArg::Quadratic => Estimator::Quadratic,
            ProtocolArg::Tilted => Estimator::Tilted,
            ProtocolArg::CliffordIncoherent => Estimator::CliffordIncoherent,
            ProtocolArg::CliffordCoherent => Estimator::CliffordCoherent,
            ProtocolArg::Ruc => Estimator::Ruc,
        };
        let mut input = PredictionInput::new(estimator, need(args.m, "M")?, args.a);
        input.gamma_r = args.gamma_r.unwrap_or(0.0);
        input.phi = args.phi;
        input.weights.clone_from(&args.weights);
        input.gammas.clone_from(&args.gamma);
        input.beta = args.beta;
        if matches!(p, ProtocolArg::Tilted) && input.weights.is_empty() {
            return Err(CliError::Config("the tilted estimator needs --weights".into()));
        }
        if matches!(p, ProtocolArg::CliffordIncoherent) && input.gammas.is_empty() {
            return Err(CliError::Config("the incoherent estimator needs --gamma".into()));
        }
        let variance = predict_variance(&input)?;
        let std: Vec<f64> = variance.iter().map(|v| v.sqrt()).collect();
        return Ok(json!({ "input": input, "variance": variance, "std": std }));
    }
    if let Some(kind) = args.required_circuits {
        let (k, delta) = (need(args.k, "K")?, need(args.delta, "delta")?);
        let (kind, name) = match kind {
            KindArg::Coherent => (CircuitKind::Coherent, "coherent"),
            KindArg::Incoherent => (CircuitKind::Incoherent, "incoherent"),
        };
        let n = match kind {
            CircuitKind::Incoherent => need(args.n, "N")?,
            CircuitKind::Coherent => args.n.unwrap_or(0),
        };
        let n_c = required_circuits(kind, k, n, delta)?;
        let failure = match kind {
            CircuitKind::Coherent => insensitivity_failure(k, n_c),
            CircuitKind::Incoherent => collision_bound(k, n, n_c),
        };
        return Ok(json!({ "kind": name, "K": k, "N": args.n, "delta": delta, "n_c": n_c, "failure_bound": failure }));
    }
    if args.collision {
        let (k, n, n_c) = (need(args.k, "K")?, need(args.n, "N")?, need(args.n_c, "n-c")?);
        return Ok(json!({ "K": k, "N": n, "n_c": n_c, "collision_bound": collision_bound(k, n, n_c) }));
    }
    if args.m_star {
        let (g, n, th) = (need(args.gamma_r, "gamma-r")?, need(args.n, "N")?, need(args.theta, "theta")?);
        return Ok(json!({ "gamma_r": g, "N": n, "theta": th, "m_star": readout_transition_m_star(g, n, th)? }));
    }
    let (lu, lv) = (need(args.lu, "lu")?, need(args.lv, "lv")?);
    Ok(json!({ "l_u": lu, "l_v": lv, "q": args.q, "D": weingarten_d(lu, lv, args.q) }))
}

pub fn run(args: &TheoryArgs) -> Result<(), CliError> {
    let value = evaluate(args)?;
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    Ok(())
}
