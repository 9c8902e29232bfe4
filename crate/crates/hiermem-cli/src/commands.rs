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

//! Command dispatch. Each command returns its artifacts in memory; the
//! caller writes them once at the end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hiermem::bilayer::{
    biased_tile_dims, hierarchical_params, logical_route_depth_with, physical_qubit_count, swap_primitive_depths, t_route,
    tile_permutation_trace, tile_side,
};
use hiermem::circuits::{build_ideal_sec, build_local_sec, local_depth_bound, place_bilayer, verify_schedule, Circuit};
use hiermem::codes::{
    code_params, distance_bruteforce, from_alist, hgp_params, hypergraph_product, rotated_surface_code,
    sample_full_rank_parity_check, sample_regular_parity_check, to_alist, BinaryMatrix, CodeParams, CssCode,
};
use hiermem::estimator::{
    biased_dx, find_crossover, hook_exponent, log_grid, log_wer_hier_biased_terms, resource_comparison, rows_to_csv,
    sweep, sweep_svg, FamilyConfig, OuterCode,
};
use hiermem::graphs::{make_complete, make_path, sample_expander, Graph, DEFAULT_EPSILON, DEFAULT_EXPANDER_TRIES};
use hiermem::par::{self, split_seed};
use hiermem::pauli::{pround_bound, DecayRate};
use hiermem::routing::{
    lattice_depth_bound, lattice_graph, route_complete, route_expander, route_lattice, route_path, verify_routing,
    verify_steps, Permutation, RoutingSchedule,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::params::{
    resolve_outer, BoundsParams, CircuitParams, CodeSpec, CodegenParams, Compiler, CrossoverParams, EstimateParams, Params,
    RouteParams, RouterKind, TilesParams, VerifyParams,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Domain(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub summary: Vec<String>,
    /// Set when the command ran but its check failed; artifacts are still
    /// written and the process exits with status 1.
    pub failure: Option<String>,
}

impl RunOutput {
    fn text(&mut self, cfg: &RunConfig, name: &str, body: &str) {
        let contents = format!("# {}\n{body}", cfg.provenance_line());
        self.artifacts.push(Artifact { name: name.into(), contents });
    }

    fn json(&mut self, cfg: &RunConfig, name: &str, mut v: Value) {
        if let Value::Object(m) = &mut v {
            m.insert("provenance".into(), cfg.provenance());
        }
        let mut contents = serde_json::to_string_pretty(&v).expect("json values serialize");
        contents.push('\n');
        self.artifacts.push(Artifact { name: name.into(), contents });
    }

    fn svg(&mut self, cfg: &RunConfig, name: &str, body: &str) {
        let contents = format!("<!-- {} -->\n{body}", cfg.provenance_line());
        self.artifacts.push(Artifact { name: name.into(), contents });
    }
}

/// Input text with provenance lines (`#` in the first column) removed.
pub fn read_input(path: &Path) -> Result<String, CliError> {
    let raw = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(strip_comments(&raw))
}

pub fn strip_comments(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for line in raw.lines().filter(|l| !l.starts_with('#')) {
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let mut out = RunOutput::default();
    match &cfg.params {
        Params::Route(p) => route(cfg, p, &mut out)?,
        Params::Codegen(p) => codegen(cfg, p, &mut out)?,
        Params::Circuit(p) => circuit(cfg, p, &mut out)?,
        Params::SimulateTiles(p) => tiles(cfg, p, &mut out)?,
        Params::Bounds(p) => bounds(cfg, p, &mut out)?,
        Params::Estimate(p) => estimate(cfg, p, &mut out)?,
        Params::Crossover(p) => crossover(cfg, p, &mut out)?,
        Params::Verify(p) => verify(cfg, p, &mut out)?,
    }
    Ok(out)
}

/// Write every artifact into `dir`, creating it if needed.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            std::fs::write(&path, &a.contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(path)
        })
        .collect()
}

// ---- route / verify ----

/// Everything needed to rebuild the graph and target of a routed schedule.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RouteManifest {
    pub params: RouteParams,
    pub seed: u64,
    pub graph_hash: String,
    pub depth: usize,
    pub swaps: usize,
    pub depth_bound: Option<usize>,
    pub verified: bool,
    pub complete_fallback: bool,
    pub greedy_fallbacks: usize,
}

pub fn route_graph(p: &RouteParams, seed: u64) -> Result<Graph, CliError> {
    Ok(match p.router {
        RouterKind::Path => make_path(p.size),
        RouterKind::Complete => make_complete(p.size),
        RouterKind::Lattice => lattice_graph(p.size, p.r, p.mode, seed).map_err(domain)?,
        RouterKind::Expander => {
            sample_expander(p.size, p.degree, DEFAULT_EPSILON, seed, DEFAULT_EXPANDER_TRIES).map_err(domain)?.0
        }
    })
}

fn route_target(p: &RouteParams, seed: u64) -> Result<Permutation, CliError> {
    match &p.permutation {
        Some(v) if p.one_based => Permutation::from_one_based(v).map_err(domain),
        Some(v) => Permutation::new(v.clone()).map_err(domain),
        None => Ok(Permutation::seeded(p.vertex_count(), split_seed(seed, 1))),
    }
}

fn route(cfg: &RunConfig, p: &RouteParams, out: &mut RunOutput) -> Result<(), CliError> {
    let alpha = route_target(p, cfg.seed)?;
    let (schedule, complete_fallback, greedy_fallbacks, depth_bound): (RoutingSchedule, bool, usize, Option<usize>) =
        match p.router {
            RouterKind::Path => (route_path(&alpha, p.size).map_err(domain)?, false, 0, Some(p.size)),
            RouterKind::Complete => (route_complete(&alpha, p.size).map_err(domain)?, false, 0, Some(2)),
            RouterKind::Lattice => {
                let lr = route_lattice(&alpha, p.size, p.r, p.mode, cfg.seed).map_err(domain)?;
                (lr.schedule, lr.complete_fallback, lr.greedy_fallbacks, lattice_depth_bound(p.size, p.r, p.mode))
            }
            RouterKind::Expander => {
                let g = route_graph(p, cfg.seed)?;
                (route_expander(&alpha, &g, p.strategy, cfg.seed).map_err(domain)?, false, 0, None)
            }
        };
    let verdict = verify_routing(&alpha, &schedule);
    let resolved = RouteParams { permutation: Some(alpha.as_slice().to_vec()), one_based: false, ..p.clone() };
    let manifest = RouteManifest {
        params: resolved,
        seed: cfg.seed,
        graph_hash: schedule.graph.content_hash(),
        depth: schedule.depth(),
        swaps: schedule.swap_count(),
        depth_bound,
        verified: verdict.ok,
        complete_fallback,
        greedy_fallbacks,
    };
    out.text(cfg, "schedule.txt", &schedule.to_text());
    out.json(cfg, "route.json", serde_json::to_value(&manifest).expect("manifest serializes"));
    out.summary.push(format!("depth {}", schedule.depth()));
    out.summary.push(format!("swaps {}", schedule.swap_count()));
    if let Some(v) = verdict.violation {
        out.failure = Some(format!("routed schedule failed verification: {v}"));
    }
    Ok(())
}

fn verify(cfg: &RunConfig, p: &VerifyParams, out: &mut RunOutput) -> Result<(), CliError> {
    let mut problems: Vec<String> = Vec::new();
    let report = if let Some(sched_path) = &p.schedule {
        let manifest_path = p.manifest.clone().unwrap_or_else(|| sched_path.with_file_name("route.json"));
        let manifest: RouteManifest = serde_json::from_str(&read_input(&manifest_path)?)
            .map_err(|e| CliError::Domain(format!("{}: bad manifest: {e}", manifest_path.display())))?;
        let g = route_graph(&manifest.params, manifest.seed)?;
        let alpha = route_target(&manifest.params, manifest.seed)?;
        let (hash, declared, steps) = match RoutingSchedule::parse_text(&read_input(sched_path)?) {
            Ok(parsed) => parsed,
            Err(e) => {
                problems.push(e.to_string());
                (String::new(), 0, Vec::new())
            }
        };
        let mut depth = None;
        if problems.is_empty() {
            if hash != g.content_hash() {
                problems.push(format!("graph hash {hash} does not match the manifest graph {}", g.content_hash()));
            }
            if declared != steps.len() {
                problems.push(format!("header declares depth {declared}, found {} steps", steps.len()));
            }
            let verdict = verify_steps(&alpha, &g, &steps);
            depth = Some(verdict.depth);
            problems.extend(verdict.violation.map(|v| v.to_string()));
        }
        json!({ "kind": "schedule", "input": sched_path, "ok": problems.is_empty(), "depth": depth, "violations": problems })
    } else {
        let path = p.circuit.as_ref().expect("validated: schedule or circuit");
        let circ = Circuit::from_text(&read_input(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
        let r = verify_schedule(&circ, p.r, p.partner_limit);
        problems.extend(r.violations.iter().map(ToString::to_string));
        json!({
            "kind": "circuit",
            "input": path,
            "ok": r.ok,
            "depth": circ.depth(),
            "max_partners": r.max_partners,
            "violations": problems,
        })
    };
    let ok = report["ok"].as_bool().unwrap_or(false);
    out.json(cfg, "verify.json", report);
    if ok {
        out.summary.push("ok".into());
    } else {
        out.failure = Some(format!("verification failed: {}", problems.first().map(String::as_str).unwrap_or("unknown")));
    }
    Ok(())
}

// ---- codes and circuits ----

struct BuiltCode {
    code: CssCode,
    params: CodeParams,
    classical: Vec<(&'static str, BinaryMatrix)>,
}

fn build_code(spec: &CodeSpec, seed: u64) -> Result<BuiltCode, CliError> {
    match spec {
        CodeSpec::Surface { d } => {
            let code = rotated_surface_code(*d).map_err(domain)?;
            Ok(BuiltCode { params: code_params(&code), code, classical: Vec::new() })
        }
        &CodeSpec::Hgp { n, col_weight, row_weight, full_rank, square, max_tries } => {
            let sample = |s| {
                if full_rank {
                    sample_full_rank_parity_check(n, col_weight, row_weight, s, max_tries)
                } else {
                    sample_regular_parity_check(n, col_weight, row_weight, s, max_tries)
                }
                .map_err(domain)
            };
            let h1 = sample(split_seed(seed, 0))?;
            let h2 = if square { h1.clone() } else { sample(split_seed(seed, 1))? };
            let code = hypergraph_product(&h1, &h2).map_err(domain)?;
            let params = hgp_params(&h1, &h2, &code);
            let classical = if square { vec![("h.alist", h1)] } else { vec![("h1.alist", h1), ("h2.alist", h2)] };
            Ok(BuiltCode { code, params, classical })
        }
        CodeSpec::Alist { hx, hz } => {
            let read = |p: &PathBuf| -> Result<_, CliError> {
                from_alist(&read_input(p)?).map_err(|e| CliError::Domain(format!("{}: {e}", p.display())))
            };
            let code = CssCode::new(read(hx)?, read(hz)?).map_err(domain)?;
            Ok(BuiltCode { params: code_params(&code), code, classical: Vec::new() })
        }
    }
}

fn codegen(cfg: &RunConfig, p: &CodegenParams, out: &mut RunOutput) -> Result<(), CliError> {
    let mut built = build_code(&p.code, cfg.seed)?;
    if let Some(w) = p.distance_max_weight {
        built.params.d = distance_bruteforce(&built.code, w).map_err(domain)?;
    }
    let c = &built.code;
    out.json(
        cfg,
        "code.json",
        json!({
            "code": p.code,
            "n": built.params.n,
            "k": built.params.k,
            "d": built.params.d,
            "delta_q": built.params.delta_q,
            "delta_g": built.params.delta_g,
            "mx": c.mx(),
            "mz": c.mz(),
            "m0": c.m0(),
        }),
    );
    if p.matrices {
        out.text(cfg, "hx.alist", &to_alist(c.hx()));
        out.text(cfg, "hz.alist", &to_alist(c.hz()));
        for (name, h) in &built.classical {
            out.text(cfg, name, &to_alist(&h.to_sparse()));
        }
    }
    let d = built.params.d.map_or_else(|| "?".to_string(), |d| d.to_string());
    out.summary.push(format!("[[{}, {}, {d}]] delta_q={} delta_g={}", c.n(), built.params.k, c.delta_q(), c.delta_g()));
    Ok(())
}

fn circuit(cfg: &RunConfig, p: &CircuitParams, out: &mut RunOutput) -> Result<(), CliError> {
    let built = build_code(&p.code, cfg.seed)?;
    let c = &built.code;
    let circ = match p.compiler {
        Compiler::Ideal => build_ideal_sec(c),
        Compiler::Local => build_local_sec(c, p.r, p.mode, cfg.seed).map_err(domain)?,
    };
    let report = verify_schedule(&circ, p.r, p.partner_limit);
    let delta = c.delta_q().max(c.delta_g());
    let depth_bound = match p.compiler {
        Compiler::Ideal => Some(2 * (delta + 2)),
        Compiler::Local => local_depth_bound(delta, place_bilayer(c).side, p.r, p.mode),
    };
    out.text(cfg, "circuit.txt", &circ.to_text());
    let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    out.json(
        cfg,
        "circuit.json",
        json!({
            "compiler": p.compiler,
            "n": c.n(),
            "mx": c.mx(),
            "mz": c.mz(),
            "width": circ.width,
            "depth": circ.depth(),
            "depth_bound": depth_bound,
            "locations": circ.location_count(),
            "measurements": circ.measurement_count(),
            "verify": { "ok": report.ok, "max_partners": report.max_partners, "violations": violations },
        }),
    );
    out.summary.push(format!("width {} depth {}", circ.width, circ.depth()));
    if !report.ok {
        out.failure = Some(format!("circuit failed verification: {}", violations[0]));
    }
    Ok(())
}

// ---- bilayer ----

fn tiles(cfg: &RunConfig, p: &TilesParams, out: &mut RunOutput) -> Result<(), CliError> {
    let n = 2 * p.l * p.l;
    let perms: Vec<Permutation> = match &p.permutation {
        Some(v) if p.one_based => vec![Permutation::from_one_based(v).map_err(domain)?],
        Some(v) => vec![Permutation::new(v.clone()).map_err(domain)?],
        None => (0..p.samples).map(|i| Permutation::seeded(n, split_seed(cfg.seed, i as u64))).collect(),
    };
    let reports = par::map_slice(&perms, |a| tile_permutation_trace(p.l, p.d_l, a));
    let mut rows = Vec::with_capacity(reports.len());
    let mut failed = None;
    for (alpha, r) in perms.iter().zip(reports) {
        let mut r = r.map_err(domain)?;
        if failed.is_none() {
            failed = r.violations.first().cloned();
        }
        if !p.trace {
            r.tile_positions.clear();
        }
        rows.push(json!({ "permutation": alpha.as_slice(), "report": r }));
    }
    let max_depth = rows.iter().filter_map(|r| r["report"]["depth"].as_u64()).max().unwrap_or(0);
    out.json(cfg, "tiles.json", json!({ "l": p.l, "d_l": p.d_l, "runs": rows }));
    out.summary.push(format!("{} permutations, max depth {max_depth}", perms.len()));
    out.failure = failed.map(|v| format!("tile simulation violation: {v}"));
    Ok(())
}

fn bounds(cfg: &RunConfig, p: &BoundsParams, out: &mut RunOutput) -> Result<(), CliError> {
    let outer = resolve_outer(&p.preset, &p.outer, "/params")?;
    let rate = DecayRate::new(p.p_phys).map_err(domain)?;
    let pround = pround_bound(p.delta, p.depth, rate);
    let routes: Vec<Value> = p
        .ranges
        .iter()
        .map(|&r| json!({ "r": r, "depth": logical_route_depth_with(p.l, p.d_l, r, p.c_sparse) }))
        .collect();
    let biased = match p.eta {
        Some(eta) => {
            let (d_x, d_z) = biased_tile_dims(p.d_l, eta, p.p_phys).map_err(domain)?;
            json!({ "eta": eta, "d_x": d_x, "d_z": d_z })
        }
        None => Value::Null,
    };
    let t = t_route(p.d_l, p.l);
    out.json(
        cfg,
        "bounds.json",
        json!({
            "d_l": p.d_l,
            "l": p.l,
            "tile_side": tile_side(p.d_l),
            "t_route": t,
            "swap_primitives": swap_primitive_depths(p.d_l),
            "logical_route_depth": routes,
            "physical_qubits": physical_qubit_count(p.l, p.d_l),
            "outer": outer,
            "outer_tiles_side": outer.tiles_side(),
            "hierarchical": hierarchical_params(outer.n, outer.k, outer.d, p.d_l as u64).map_err(domain)?,
            "hook_exponent": hook_exponent(outer.d, outer.delta_g),
            "pround": { "delta": p.delta, "depth": p.depth, "p_phys": p.p_phys, "rate": pround.value(), "vacuous": pround.is_vacuous() },
            "biased": biased,
        }),
    );
    out.summary.push(format!("t_route({}, {}) = {t}", p.d_l, p.l));
    Ok(())
}

// ---- estimator ----

fn r_label(r: f64) -> String {
    format!("{r}")
}

fn estimate(cfg: &RunConfig, p: &EstimateParams, out: &mut RunOutput) -> Result<(), CliError> {
    let outer = resolve_outer(&p.preset, &p.outer, "/params")?;
    let grid = log_grid(p.p_min, p.p_max, p.points);
    for &r in &p.r_swap {
        let base = p.model.config(&outer, p.d_l[0], r);
        let rows = sweep(&base, &grid, &p.d_l, &[r]);
        let label = r_label(r);
        out.text(cfg, &format!("estimate_r{label}.csv"), &rows_to_csv(&rows));
        if p.plot {
            out.svg(cfg, &format!("estimate_r{label}.svg"), &sweep_svg(&rows, &format!("r_swap = {label}")));
        }
        if p.model.biased() {
            let mut csv = String::from("p,d_l,r_swap,d_x,wer_z,wer_x,wer_biased\n");
            for &d_l in &p.d_l {
                let c = p.model.config(&outer, d_l, r);
                for &pp in &grid {
                    let d_x = biased_dx(pp, &c).map_err(domain)?;
                    let (z, x) = log_wer_hier_biased_terms(pp, &c).map_err(domain)?;
                    let (wz, wx) = (z.min(0.0).exp(), x.min(0.0).exp());
                    let _ = writeln!(csv, "{pp:e},{d_l},{r},{d_x},{wz:e},{wx:e},{:e}", (wz + wx).min(1.0));
                }
            }
            out.text(cfg, &format!("estimate_biased_r{label}.csv"), &csv);
        }
        out.summary.push(format!("r_swap {label}: {} rows", rows.len()));
    }
    Ok(())
}

fn crossover(cfg: &RunConfig, p: &CrossoverParams, out: &mut RunOutput) -> Result<(), CliError> {
    let outer = resolve_outer(&p.preset, &p.outer, "/params")?;
    let jobs: Vec<(usize, f64)> = p.d_l.iter().flat_map(|&d| p.r_swap.iter().map(move |&r| (d, r))).collect();
    let found = par::map_slice(&jobs, |&(d, r)| find_crossover(&p.model.config(&outer, d, r), p.p_lo, p.p_hi));
    let mut csv = String::from("d_l,r_swap,p_star\n");
    for (&(d, r), ps) in jobs.iter().zip(&found) {
        let cell = ps.map_or_else(String::new, |v| format!("{v:e}"));
        let _ = writeln!(csv, "{d},{r},{cell}");
        out.summary.push(format!("d_l {d} r_swap {r}: p* = {}", if cell.is_empty() { "none" } else { &cell }));
    }
    out.text(cfg, "crossover.csv", &csv);
    if let Some(res) = &p.resource {
        let family = FamilyConfig {
            members: (0..res.members).map(OuterCode::expander_48).collect(),
            r_swap: res.r_swap,
            d_l_candidates: (3..=res.d_l_max).step_by(2).collect(),
        };
        let mut csv = String::from("target_wer,member,d_l,qubits_hier,d_M,qubits_basic,ratio\n");
        let results = par::map_slice(&res.targets, |&t| resource_comparison(t, res.p, &family));
        for (&t, c) in res.targets.iter().zip(results) {
            match c {
                Ok(c) => {
                    let _ = writeln!(csv, "{t:e},{},{},{},{},{},{}", c.member, c.d_l, c.qubits_hier, c.d_m, c.qubits_basic, c.ratio);
                }
                Err(_) => {
                    let _ = writeln!(csv, "{t:e},,,,,,");
                }
            }
        }
        out.text(cfg, "resource.csv", &csv);
    }
    Ok(())
}
