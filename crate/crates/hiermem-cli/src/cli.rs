// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Argument parsing and the process-level flow: config file, overrides,
//! validation, run, write. Environment variables are never consulted.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::commands::{run, write_artifacts, CliError};
use crate::config::{apply_override, parse_document, resolve, CommandName};

const ENVELOPE_HELP: &str = "\
CONFIG
  A JSON object {\"command\", \"seed\", \"output_dir\", \"params\"}; unknown keys are
  rejected. seed defaults to 0, output_dir to \"out\", and every params key has
  a default. Precedence: --set / --seed / --output-dir > config file > default.
  Exit status: 0 success, 1 domain error or failed check, 2 usage error.";

const ROUTE_HELP: &str = "\
Route a permutation by parallel swaps and write schedule.txt plus route.json.

PARAMS
  router       path | complete | lattice | expander            [path]
  size         path length, K_m order, lattice side, or expander order [8]
  r            lattice swap range                              [1]
  mode         lattice mode: unit | dense | sparse             [unit]
  strategy     expander router: greedy | tree                  [greedy]
  degree       expander degree                                 [4]
  permutation  one-line notation; random from the seed if absent
  one_based    read permutation as 1-based                     [false]";

const CODEGEN_HELP: &str = "\
Build a CSS code and write code.json plus alist check matrices.

PARAMS
  code                 {\"family\": \"surface\", \"d\"}
                       {\"family\": \"hgp\", \"n\", \"col_weight\", \"row_weight\",
                        \"full_rank\" [true], \"square\" [true], \"max_tries\" [1000]}
                       {\"family\": \"alist\", \"hx\", \"hz\"}   [surface, d = 3]
  distance_max_weight  brute-force the distance up to this weight
  matrices             write alist files                [true]";

const CIRCUIT_HELP: &str = "\
Compile a syndrome-extraction circuit, verify it, write circuit.txt and
circuit.json.

PARAMS
  code           as for codegen                       [surface, d = 3]
  compiler       ideal | local                        [local]
  r              swap range of the local compiler     [1]
  mode           unit | dense | sparse                [unit]
  partner_limit  cap on distinct partners per position";

const TILES_HELP: &str = "\
Simulate tile permutations on the bilayer grid and write tiles.json.

PARAMS
  l            tiles per side (at most 6)                 [2]
  d_l          odd inner distance (at most 5)             [3]
  permutation  permutation of the 2 l^2 tile slots (layer * l^2 + a l + b);
               random from the seed if absent
  one_based    read permutation as 1-based                [false]
  samples      random permutations when none is given     [1]
  trace        include per-step tile positions            [false]";

const BOUNDS_HELP: &str = "\
Evaluate routing-depth, footprint and rate bounds; write bounds.json.

PARAMS
  d_l       inner distance                                [3]
  l         tiles per side                                [900]
  ranges    swap ranges for the tile-routing depth        [1,2,...,128]
  c_sparse  constant of the sparse block term             [4]
  preset    expander58 | expander48 | expander48:<m>      [expander58]
  outer     explicit {n, k, d, delta_q, delta_g, m0}; overrides preset
  delta     circuit degree for the per-round rate         [4]
  depth     circuit depth for the per-round rate          [12]
  p_phys    physical rate                                 [1e-3]
  eta       noise bias for the tile dimensions";

const MODEL_HELP: &str = "\
  model     {surface_threshold [1e-2], ldpc_threshold [1e-3],
             surface_prefactor [0.1], tiles_side, cycle_rounds, eta, d_x}";

const ESTIMATE_HELP: &str = "\
Sweep word error rates of the hierarchical and basic memories. Writes one
estimate_r<r_swap>.csv (and .svg) per r_swap, plus estimate_biased_*.csv when
model.eta or model.d_x is set.

PARAMS
  preset, outer   outer code, as for bounds             [expander58]
  d_l             inner distances                       [9,15,21,27]
  r_swap          swap/gate error ratios                [1,0.1,0.01]
  p_min, p_max    grid range                            [1e-4, 1e-2]
  points          log-spaced grid points                [41]
  plot            write SVG plots                       [true]";

const CROSSOVER_HELP: &str = "\
Locate the crossover rate per (d_l, r_swap) and write crossover.csv; with a
resource block, also compare footprints at fixed target WERs (resource.csv).

PARAMS
  preset, outer   outer code, as for bounds             [expander58]
  d_l             inner distances                       [21,27]
  r_swap          swap/gate error ratios                [1,0.1,0.01]
  p_lo, p_hi      search bracket                        [1e-4, 1e-2]
  resource        {p [3e-3], r_swap [0.1], members [1],
                   targets [1e-10,...,1e-20], d_l_max [99]}";

const VERIFY_HELP: &str = "\
Check a schedule against its route manifest, or a circuit for exclusivity and
locality. Writes verify.json; exits 1 when the check fails.

PARAMS
  schedule       schedule.txt from route
  manifest       route.json (default: next to the schedule)
  circuit        circuit.txt from circuit (instead of schedule)
  r              swap range for circuits                [1]
  partner_limit  cap on distinct partners per position";

#[derive(Parser, Debug)]
#[command(name = "hiermem", version, about = "Routing, code construction and error-rate estimates for hierarchical memories")]
#[command(after_long_help = ENVELOPE_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    #[command(about = "Route a permutation by parallel swaps", long_about = ROUTE_HELP, after_long_help = ENVELOPE_HELP)]
    Route(Common),
    #[command(about = "Build a CSS code", long_about = CODEGEN_HELP, after_long_help = ENVELOPE_HELP)]
    Codegen(Common),
    #[command(about = "Compile and verify a syndrome-extraction circuit", long_about = CIRCUIT_HELP, after_long_help = ENVELOPE_HELP)]
    Circuit(Common),
    #[command(about = "Simulate bilayer tile permutations", long_about = TILES_HELP, after_long_help = ENVELOPE_HELP)]
    SimulateTiles(Common),
    #[command(about = "Evaluate closed-form bounds", long_about = BOUNDS_HELP, after_long_help = ENVELOPE_HELP)]
    Bounds(Common),
    #[command(about = "Sweep word error rates", long_about = format!("{ESTIMATE_HELP}\n{MODEL_HELP}"), after_long_help = ENVELOPE_HELP)]
    Estimate(Common),
    #[command(about = "Find crossover rates and resource ratios", long_about = format!("{CROSSOVER_HELP}\n{MODEL_HELP}"), after_long_help = ENVELOPE_HELP)]
    Crossover(Common),
    #[command(about = "Verify a schedule or circuit file", long_about = VERIFY_HELP, after_long_help = ENVELOPE_HELP)]
    Verify(Common),
    /// Run the command named in the config file.
    #[command(after_long_help = ENVELOPE_HELP)]
    Run(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config file.
    #[arg(short, long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override a config key by dot-path, e.g. `params.size=16`. Repeatable;
    /// the value is parsed as JSON, falling back to a plain string.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// RNG seed; overrides the config's `seed`
    #[arg(long)]
    seed: Option<u64>,
    /// Artifact directory; overrides the config's `output_dir` [default: out]
    #[arg(short, long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
}

impl Cmd {
    fn split(self) -> (Option<CommandName>, Common) {
        use CommandName as C;
        match self {
            Cmd::Route(c) => (Some(C::Route), c),
            Cmd::Codegen(c) => (Some(C::Codegen), c),
            Cmd::Circuit(c) => (Some(C::Circuit), c),
            Cmd::SimulateTiles(c) => (Some(C::SimulateTiles), c),
            Cmd::Bounds(c) => (Some(C::Bounds), c),
            Cmd::Estimate(c) => (Some(C::Estimate), c),
            Cmd::Crossover(c) => (Some(C::Crossover), c),
            Cmd::Verify(c) => (Some(C::Verify), c),
            Cmd::Run(c) => (None, c),
        }
    }
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (cmd, common) = cli.command.split();
    let mut doc = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            parse_document(&text)?
        }
        None => Value::Object(Map::new()),
    };
    if let Some(cmd) = cmd {
        let Value::Object(map) = &mut doc else {
            return Err(CliError::Usage("config must be a JSON object".into()));
        };
        match map.get("command").and_then(Value::as_str) {
            Some(named) if named != cmd.as_str() => {
                return Err(CliError::Usage(format!("config names command {named:?} but {:?} was invoked", cmd.as_str())));
            }
            _ => {
                map.insert("command".into(), Value::String(cmd.as_str().into()));
            }
        }
    }
    for s in &common.set {
        apply_override(&mut doc, s).map_err(CliError::Usage)?;
    }
    if let Some(seed) = common.seed {
        apply_override(&mut doc, &format!("seed={seed}")).map_err(CliError::Usage)?;
    }
    if let (Some(dir), Value::Object(map)) = (&common.output_dir, &mut doc) {
        map.insert("output_dir".into(), Value::String(dir.to_string_lossy().into_owned()));
    }
    let cfg = resolve(doc)?;
    let output = run(&cfg)?;
    write_artifacts(&cfg.output_dir, &output.artifacts)?;
    let mut stdout = std::io::stdout().lock();
    for line in &output.summary {
        let _ = writeln!(stdout, "{}: {line}", cfg.command.as_str());
    }
    for a in &output.artifacts {
        let _ = writeln!(stdout, "wrote {}", cfg.output_dir.join(&a.name).display());
    }
    match output.failure {
        Some(msg) => Err(CliError::Domain(msg)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
