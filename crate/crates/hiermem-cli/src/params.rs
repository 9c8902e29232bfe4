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

//! Per-command parameter blocks. Every key has a default, so `params` may be
//! omitted entirely; unknown keys are rejected.

use std::path::PathBuf;

use hiermem::estimator::{EstimatorConfig, OuterCode};
use hiermem::routing::{ExpanderStrategy, RoutingMode};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{typed, CommandName, ConfigError};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    Route(RouteParams),
    Codegen(CodegenParams),
    Circuit(CircuitParams),
    SimulateTiles(TilesParams),
    Bounds(BoundsParams),
    Estimate(EstimateParams),
    Crossover(CrossoverParams),
    Verify(VerifyParams),
}

impl Params {
    pub fn from_value(cmd: CommandName, v: &Value) -> Result<Self, ConfigError> {
        const AT: &str = "/params";
        Ok(match cmd {
            CommandName::Route => Params::Route(typed(v, AT)?),
            CommandName::Codegen => Params::Codegen(typed(v, AT)?),
            CommandName::Circuit => Params::Circuit(typed(v, AT)?),
            CommandName::SimulateTiles => Params::SimulateTiles(typed(v, AT)?),
            CommandName::Bounds => Params::Bounds(typed(v, AT)?),
            CommandName::Estimate => Params::Estimate(typed(v, AT)?),
            CommandName::Crossover => Params::Crossover(typed(v, AT)?),
            CommandName::Verify => Params::Verify(typed(v, AT)?),
        })
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("parameter blocks serialize")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            Params::Route(p) => p.validate(),
            Params::Codegen(p) => p.code.validate("/params/code"),
            Params::Circuit(p) => {
                p.code.validate("/params/code")?;
                positive(p.r, "/params/r")
            }
            Params::SimulateTiles(p) => p.validate(),
            Params::Bounds(p) => p.validate(),
            Params::Estimate(p) => p.validate(),
            Params::Crossover(p) => p.validate(),
            Params::Verify(p) => p.validate(),
        }
    }
}

fn positive(v: usize, at: &str) -> Result<(), ConfigError> {
    if v == 0 {
        Err(ConfigError::invalid(at, "must be positive"))
    } else {
        Ok(())
    }
}

fn probability(v: f64, at: &str) -> Result<(), ConfigError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(ConfigError::invalid(at, format!("must lie in (0, 1), got {v}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouterKind {
    Path,
    Complete,
    Lattice,
    Expander,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RouteParams {
    pub router: RouterKind,
    /// Path length, complete-graph order, lattice side, or expander order.
    pub size: usize,
    /// Swap range for the lattice router.
    pub r: usize,
    pub mode: RoutingMode,
    pub strategy: ExpanderStrategy,
    pub degree: usize,
    /// One-line notation; random from the seed when absent.
    pub permutation: Option<Vec<usize>>,
    pub one_based: bool,
}

impl Default for RouteParams {
    fn default() -> Self {
        RouteParams {
            router: RouterKind::Path,
            size: 8,
            r: 1,
            mode: RoutingMode::Unit,
            strategy: ExpanderStrategy::Greedy,
            degree: 4,
            permutation: None,
            one_based: false,
        }
    }
}

impl RouteParams {
    pub fn vertex_count(&self) -> usize {
        match self.router {
            RouterKind::Lattice => self.size * self.size,
            _ => self.size,
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        positive(self.size, "/params/size")?;
        positive(self.r, "/params/r")?;
        if self.router == RouterKind::Lattice && self.mode != RoutingMode::Unit && (self.r % 2 == 1 || !self.size.is_multiple_of(self.r)) {
            return Err(ConfigError::invalid("/params/r", format!("{:?} mode needs even r dividing size", self.mode)));
        }
        if self.router == RouterKind::Expander
            && (self.degree < 3 || self.degree >= self.size || (self.size * self.degree) % 2 == 1) {
                return Err(ConfigError::invalid("/params/degree", "need 3 <= degree < size and size*degree even"));
            }
        if let Some(p) = &self.permutation {
            if p.len() != self.vertex_count() {
                return Err(ConfigError::invalid(
                    "/params/permutation",
                    format!("has {} entries, the graph has {} vertices", p.len(), self.vertex_count()),
                ));
            }
            let perm = if self.one_based {
                hiermem::routing::Permutation::from_one_based(p)
            } else {
                hiermem::routing::Permutation::new(p.clone())
            };
            perm.map_err(|e| ConfigError::invalid("/params/permutation", e.to_string()))?;
        }
        Ok(())
    }
}

fn yes() -> bool {
    true
}
fn default_tries() -> usize {
    1000
}

/// Which CSS code to build.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSpec {
    Surface {
        d: usize,
    },
    /// Hypergraph product of a seeded `(col_weight, row_weight)`-regular
    /// classical code of length `n`, with itself unless `square` is false.
    Hgp {
        n: usize,
        col_weight: usize,
        row_weight: usize,
        #[serde(default = "yes")]
        full_rank: bool,
        #[serde(default = "yes")]
        square: bool,
        #[serde(default = "default_tries")]
        max_tries: usize,
    },
    /// Check matrices read from alist files.
    Alist {
        hx: PathBuf,
        hz: PathBuf,
    },
}

impl Default for CodeSpec {
    fn default() -> Self {
        CodeSpec::Surface { d: 3 }
    }
}

impl CodeSpec {
    fn validate(&self, at: &str) -> Result<(), ConfigError> {
        match self {
            CodeSpec::Surface { d } => positive(*d, &format!("{at}/d")),
            CodeSpec::Hgp { n, col_weight, row_weight, .. } => {
                positive(*n, &format!("{at}/n"))?;
                positive(*col_weight, &format!("{at}/col_weight"))?;
                positive(*row_weight, &format!("{at}/row_weight"))?;
                if (n * col_weight) % row_weight != 0 || row_weight > n {
                    return Err(ConfigError::invalid(at, "n*col_weight must be a multiple of row_weight <= n"));
                }
                Ok(())
            }
            CodeSpec::Alist { .. } => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodegenParams {
    pub code: CodeSpec,
    /// Brute-force the distance over errors up to this weight.
    pub distance_max_weight: Option<usize>,
    /// Skip writing the alist files when false.
    pub matrices: bool,
}

impl Default for CodegenParams {
    fn default() -> Self {
        CodegenParams { code: CodeSpec::default(), distance_max_weight: None, matrices: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Compiler {
    Ideal,
    Local,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CircuitParams {
    pub code: CodeSpec,
    pub compiler: Compiler,
    pub r: usize,
    pub mode: RoutingMode,
    pub partner_limit: Option<usize>,
}

impl Default for CircuitParams {
    fn default() -> Self {
        CircuitParams { code: CodeSpec::default(), compiler: Compiler::Local, r: 1, mode: RoutingMode::Unit, partner_limit: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TilesParams {
    /// Tiles per side.
    pub l: usize,
    pub d_l: usize,
    /// Permutation of the `2 l^2` tile slots (slot `layer * l^2 + a l + b`);
    /// random from the seed when absent.
    pub permutation: Option<Vec<usize>>,
    pub one_based: bool,
    /// Random permutations to simulate when `permutation` is absent.
    pub samples: usize,
    /// Include per-step tile positions in the report.
    pub trace: bool,
}

impl Default for TilesParams {
    fn default() -> Self {
        TilesParams { l: 2, d_l: 3, permutation: None, one_based: false, samples: 1, trace: false }
    }
}

impl TilesParams {
    fn validate(&self) -> Result<(), ConfigError> {
        positive(self.l, "/params/l")?;
        positive(self.samples, "/params/samples")?;
        if self.d_l.is_multiple_of(2) {
            return Err(ConfigError::invalid("/params/d_l", "must be odd"));
        }
        if let Some(p) = &self.permutation {
            if p.len() != 2 * self.l * self.l {
                return Err(ConfigError::invalid("/params/permutation", format!("needs {} entries", 2 * self.l * self.l)));
            }
        }
        Ok(())
    }
}

/// Outer code: `outer` when given, otherwise the named preset
/// (`expander58`, or `expander48` / `expander48:<m>`).
pub fn resolve_outer(preset: &str, outer: &Option<OuterCode>, at: &str) -> Result<OuterCode, ConfigError> {
    if let Some(o) = outer {
        return Ok(o.clone());
    }
    match preset {
        "expander58" => Ok(OuterCode::expander_58()),
        "expander48" => Ok(OuterCode::expander_48(0)),
        s => match s.strip_prefix("expander48:").and_then(|m| m.parse::<u32>().ok()) {
            Some(m) if m <= 8 => Ok(OuterCode::expander_48(m)),
            _ => Err(ConfigError::invalid(format!("{at}/preset"), format!("unknown outer code preset {s:?}"))),
        },
    }
}

fn default_preset() -> String {
    "expander58".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsParams {
    pub d_l: usize,
    /// Tiles per side.
    pub l: usize,
    pub ranges: Vec<usize>,
    pub c_sparse: f64,
    pub preset: String,
    pub outer: Option<OuterCode>,
    /// Degree and depth of the circuit fed to the per-round rate bound.
    pub delta: usize,
    pub depth: usize,
    pub p_phys: f64,
    pub eta: Option<f64>,
}

impl Default for BoundsParams {
    fn default() -> Self {
        BoundsParams {
            d_l: 3,
            l: 900,
            ranges: vec![1, 2, 4, 8, 16, 32, 64, 128],
            c_sparse: hiermem::bilayer::C_SPARSE,
            preset: default_preset(),
            outer: None,
            delta: 4,
            depth: 12,
            p_phys: 1e-3,
            eta: None,
        }
    }
}

impl BoundsParams {
    fn validate(&self) -> Result<(), ConfigError> {
        positive(self.d_l, "/params/d_l")?;
        positive(self.l, "/params/l")?;
        for (i, &r) in self.ranges.iter().enumerate() {
            positive(r, &format!("/params/ranges/{i}"))?;
        }
        if self.c_sparse.is_nan() || self.c_sparse < 0.0 {
            return Err(ConfigError::invalid("/params/c_sparse", "must be non-negative"));
        }
        probability(self.p_phys, "/params/p_phys")?;
        if let Some(eta) = self.eta {
            if eta.is_nan() || eta < 1.0 {
                return Err(ConfigError::invalid("/params/eta", "must be at least 1"));
            }
        }
        resolve_outer(&self.preset, &self.outer, "/params").map(|_| ())
    }
}

/// Knobs of the error model shared by `estimate` and `crossover`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub surface_threshold: f64,
    pub ldpc_threshold: f64,
    pub surface_prefactor: f64,
    pub tiles_side: Option<usize>,
    pub cycle_rounds: Option<f64>,
    pub eta: Option<f64>,
    pub d_x: Option<usize>,
}

impl Default for ModelParams {
    fn default() -> Self {
        let base = EstimatorConfig::new(OuterCode::expander_58(), 1, 1.0);
        ModelParams {
            surface_threshold: base.surface_threshold,
            ldpc_threshold: base.ldpc_threshold,
            surface_prefactor: base.surface_prefactor,
            tiles_side: None,
            cycle_rounds: None,
            eta: None,
            d_x: None,
        }
    }
}

impl ModelParams {
    pub fn config(&self, outer: &OuterCode, d_l: usize, r_swap: f64) -> EstimatorConfig {
        EstimatorConfig {
            surface_threshold: self.surface_threshold,
            ldpc_threshold: self.ldpc_threshold,
            surface_prefactor: self.surface_prefactor,
            tiles_side: self.tiles_side,
            cycle_rounds: self.cycle_rounds,
            eta: self.eta,
            d_x: self.d_x,
            ..EstimatorConfig::new(outer.clone(), d_l, r_swap)
        }
    }

    fn check(&self, outer: &OuterCode, d_ls: &[usize], r_swaps: &[f64]) -> Result<(), ConfigError> {
        if d_ls.is_empty() {
            return Err(ConfigError::invalid("/params/d_l", "needs at least one inner distance"));
        }
        if r_swaps.is_empty() {
            return Err(ConfigError::invalid("/params/r_swap", "needs at least one value"));
        }
        for (i, &d) in d_ls.iter().enumerate() {
            positive(d, &format!("/params/d_l/{i}"))?;
        }
        for (i, &r) in r_swaps.iter().enumerate() {
            if !(r > 0.0 && r.is_finite()) {
                return Err(ConfigError::invalid(format!("/params/r_swap/{i}"), "must be positive"));
            }
        }
        if let Some(c) = self.cycle_rounds {
            if !(c > 0.0 && c.is_finite()) {
                return Err(ConfigError::invalid("/params/model/cycle_rounds", "must be positive"));
            }
        }
        for &d in d_ls {
            self.config(outer, d, r_swaps[0])
                .validate()
                .map_err(|e| ConfigError::invalid("/params/model", e.to_string()))?;
        }
        Ok(())
    }

    pub fn biased(&self) -> bool {
        self.eta.is_some() || self.d_x.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimateParams {
    pub preset: String,
    pub outer: Option<OuterCode>,
    pub d_l: Vec<usize>,
    /// One CSV (and plot) per value.
    pub r_swap: Vec<f64>,
    pub p_min: f64,
    pub p_max: f64,
    /// Log-spaced grid points.
    pub points: usize,
    pub model: ModelParams,
    pub plot: bool,
}

impl Default for EstimateParams {
    fn default() -> Self {
        EstimateParams {
            preset: default_preset(),
            outer: None,
            d_l: vec![9, 15, 21, 27],
            r_swap: vec![1.0, 0.1, 0.01],
            p_min: 1e-4,
            p_max: 1e-2,
            points: 41,
            model: ModelParams::default(),
            plot: true,
        }
    }
}

impl EstimateParams {
    fn validate(&self) -> Result<(), ConfigError> {
        let outer = resolve_outer(&self.preset, &self.outer, "/params")?;
        probability(self.p_min, "/params/p_min")?;
        probability(self.p_max, "/params/p_max")?;
        if self.p_min >= self.p_max {
            return Err(ConfigError::invalid("/params/p_max", "must exceed p_min"));
        }
        if self.points < 2 {
            return Err(ConfigError::invalid("/params/points", "needs at least 2"));
        }
        self.model.check(&outer, &self.d_l, &self.r_swap)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResourceParams {
    pub p: f64,
    pub r_swap: f64,
    /// Members of the `(4, 8)` family, smallest first.
    pub members: u32,
    pub targets: Vec<f64>,
    pub d_l_max: usize,
}

impl Default for ResourceParams {
    fn default() -> Self {
        ResourceParams {
            p: 3e-3,
            r_swap: 0.1,
            members: 1,
            targets: (10..=20).step_by(2).map(|e| 10f64.powi(-e)).collect(),
            d_l_max: 99,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CrossoverParams {
    pub preset: String,
    pub outer: Option<OuterCode>,
    pub d_l: Vec<usize>,
    pub r_swap: Vec<f64>,
    pub p_lo: f64,
    pub p_hi: f64,
    pub model: ModelParams,
    /// Also compare footprints at fixed target WERs.
    pub resource: Option<ResourceParams>,
}

impl Default for CrossoverParams {
    fn default() -> Self {
        CrossoverParams {
            preset: default_preset(),
            outer: None,
            d_l: vec![21, 27],
            r_swap: vec![1.0, 0.1, 0.01],
            p_lo: 1e-4,
            p_hi: 1e-2,
            model: ModelParams::default(),
            resource: None,
        }
    }
}

impl CrossoverParams {
    fn validate(&self) -> Result<(), ConfigError> {
        let outer = resolve_outer(&self.preset, &self.outer, "/params")?;
        probability(self.p_lo, "/params/p_lo")?;
        probability(self.p_hi, "/params/p_hi")?;
        if self.p_lo >= self.p_hi {
            return Err(ConfigError::invalid("/params/p_hi", "must exceed p_lo"));
        }
        self.model.check(&outer, &self.d_l, &self.r_swap)?;
        if let Some(r) = &self.resource {
            probability(r.p, "/params/resource/p")?;
            if !(r.r_swap > 0.0 && r.r_swap.is_finite()) {
                return Err(ConfigError::invalid("/params/resource/r_swap", "must be positive"));
            }
            if r.members == 0 {
                return Err(ConfigError::invalid("/params/resource/members", "must be positive"));
            }
            if r.d_l_max < 3 {
                return Err(ConfigError::invalid("/params/resource/d_l_max", "must be at least 3"));
            }
            for (i, &t) in r.targets.iter().enumerate() {
                probability(t, &format!("/params/resource/targets/{i}"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyParams {
    /// Schedule written by `route`; checked against its manifest.
    pub schedule: Option<PathBuf>,
    /// Defaults to `route.json` next to the schedule.
    pub manifest: Option<PathBuf>,
    /// Circuit written by `circuit`.
    pub circuit: Option<PathBuf>,
    pub r: usize,
    pub partner_limit: Option<usize>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { schedule: None, manifest: None, circuit: None, r: 1, partner_limit: None }
    }
}

impl VerifyParams {
    fn validate(&self) -> Result<(), ConfigError> {
        positive(self.r, "/params/r")?;
        match (&self.schedule, &self.circuit) {
            (Some(_), None) | (None, Some(_)) => Ok(()),
            _ => Err(ConfigError::invalid("/params", "set exactly one of schedule or circuit")),
        }
    }
}
