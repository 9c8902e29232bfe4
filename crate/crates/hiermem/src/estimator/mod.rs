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

//! Closed-form word-error-rate models for a hierarchical memory and for a
//! qubit-matched basic encoding (one surface code per logical qubit).
//!
//! Rates are evaluated through logarithms so that values far below
//! `f64::MIN_POSITIVE` still compare correctly; the public `wer_*`
//! functions clamp to `[0, 1]`, the `log_*` variants do not.

mod output;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bilayer::{biased_tile_dims, physical_qubit_count, t_route};
use crate::par;

pub use output::{rows_to_csv, sweep_svg, CSV_HEADER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no family member reaches WER {target:e} at p = {p:e}")]
    NoMemberMeetsTarget { target: f64, p: f64 },
}

/// Outer LDPC code parameters needed by the estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterCode {
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub delta_q: u64,
    pub delta_g: u64,
    /// Ancillas of the syndrome-extraction circuit, `max(m_X, m_Z)`.
    pub m0: u64,
}

impl OuterCode {
    /// Hypergraph product of a `(4, 8)`-regular classical code of length
    /// `512 * 2^m` with itself. Distance grows linearly from 32 at `m = 0`.
    pub fn expander_48(m: u32) -> OuterCode {
        let nc = 512u64 << m;
        let mc = nc / 2;
        OuterCode { n: nc * nc + mc * mc, k: mc * mc, d: 32 << m, delta_q: 16, delta_g: 12, m0: nc * mc }
    }

    /// Hypergraph product of a full-rank `(5, 8)`-regular classical code of
    /// length 896 with itself.
    pub fn expander_58() -> OuterCode {
        OuterCode { n: 1_116_416, k: 112_896, d: 119, delta_q: 16, delta_g: 13, m0: 501_760 }
    }

    pub fn delta(&self) -> u64 {
        self.delta_q.max(self.delta_g)
    }

    /// Tiles per side of the bilayer placement.
    pub fn tiles_side(&self) -> usize {
        let v = self.n.max(self.m0).max(1);
        let mut r = (v as f64).sqrt() as u64;
        while r * r < v {
            r += 1;
        }
        while r > 1 && (r - 1) * (r - 1) >= v {
            r -= 1;
        }
        r as usize
    }
}

fn default_surface_threshold() -> f64 {
    1e-2
}
fn default_ldpc_threshold() -> f64 {
    1e-3
}
fn default_surface_prefactor() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub outer: OuterCode,
    pub d_l: usize,
    pub r_swap: f64,
    #[serde(default = "default_surface_threshold")]
    pub surface_threshold: f64,
    #[serde(default = "default_ldpc_threshold")]
    pub ldpc_threshold: f64,
    #[serde(default = "default_surface_prefactor")]
    pub surface_prefactor: f64,
    /// Noise bias; with `d_x` unset, the X distance follows from it.
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub d_x: Option<usize>,
    /// Overrides the tiles-per-side derived from the outer code.
    #[serde(default)]
    pub tiles_side: Option<usize>,
    /// Overrides [`hier_cycle_rounds`] as the comparison time base.
    #[serde(default)]
    pub cycle_rounds: Option<f64>,
}

impl EstimatorConfig {
    pub fn new(outer: OuterCode, d_l: usize, r_swap: f64) -> Self {
        EstimatorConfig {
            outer,
            d_l,
            r_swap,
            surface_threshold: default_surface_threshold(),
            ldpc_threshold: default_ldpc_threshold(),
            surface_prefactor: default_surface_prefactor(),
            eta: None,
            d_x: None,
            tiles_side: None,
            cycle_rounds: None,
        }
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        let bad = |m: String| Err(EstimatorError::InvalidConfig(m));
        for (name, v) in [("surface_threshold", self.surface_threshold), ("ldpc_threshold", self.ldpc_threshold)] {
            if !(v > 0.0 && v < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {v}"));
            }
        }
        if !(self.r_swap > 0.0 && self.r_swap.is_finite()) {
            return bad(format!("r_swap must be positive, got {}", self.r_swap));
        }
        if self.surface_prefactor.is_nan() || self.surface_prefactor <= 0.0 {
            return bad("surface_prefactor must be positive".into());
        }
        if self.d_l == 0 || self.outer.d == 0 || self.outer.k == 0 || self.outer.n == 0 {
            return bad("d_l and the outer n, k, d must be positive".into());
        }
        if self.outer.delta_g < 2 {
            return bad("outer delta_g must be at least 2".into());
        }
        if let Some(dx) = self.d_x {
            if dx < self.d_l {
                return bad(format!("d_x = {dx} is below d_z = {}", self.d_l));
            }
        }
        if let Some(eta) = self.eta {
            if eta.is_nan() || eta < 1.0 {
                return bad(format!("eta must be at least 1, got {eta}"));
            }
        }
        if self.tiles_side == Some(0) {
            return bad("tiles_side must be positive".into());
        }
        Ok(())
    }

    pub fn tiles_side(&self) -> usize {
        self.tiles_side.unwrap_or_else(|| self.outer.tiles_side())
    }

    pub fn t_route(&self) -> usize {
        t_route(self.d_l, self.tiles_side())
    }

    pub fn qubits_hier(&self) -> u64 {
        physical_qubit_count(self.tiles_side(), self.d_l)
    }
}

/// `ln(1 - (1 - q)^e)` for `q` in `[0, 1]`. When `q` underflows the
/// linearization `e q` is exact to working precision.
fn log_fail_any(log_q: f64, e: f64) -> f64 {
    if log_q >= 0.0 {
        return 0.0;
    }
    let x = e * (-log_q.exp()).ln_1p();
    let v = (-x.exp_m1()).ln();
    if v.is_finite() {
        v
    } else {
        e.ln() + log_q
    }
}

/// `ln` of the unclamped surface-code failure rate per round.
pub fn log_p_surf(p: f64, d: usize, cfg: &EstimatorConfig) -> f64 {
    cfg.surface_prefactor.ln() + d.div_ceil(2) as f64 * (p / cfg.surface_threshold).ln()
}

/// `prefactor (p / threshold)^ceil(d/2)`, clamped to 1.
pub fn p_surf(p: f64, d: usize, cfg: &EstimatorConfig) -> f64 {
    log_p_surf(p, d, cfg).min(0.0).exp()
}

fn level1_exponent(d: usize, cfg: &EstimatorConfig) -> f64 {
    cfg.r_swap * t_route(d, cfg.tiles_side()) as f64 / d as f64 + 1.0
}

/// `ln` of the Level-1 gate failure rate for tiles of distance `d`.
pub fn log_p_level1_at(p: f64, d: usize, cfg: &EstimatorConfig) -> f64 {
    log_fail_any(log_p_surf(p, d, cfg).min(0.0), level1_exponent(d, cfg))
}

/// Failure rate of one Level-1 gate: the tile must survive the routing
/// window of `r_swap t_route / d_l` surface-code cycles plus the gate.
pub fn p_level1(p: f64, cfg: &EstimatorConfig) -> f64 {
    log_p_level1_at(p, cfg.d_l, cfg).exp()
}

/// Smallest number of hook-error faults that reach half the distance.
pub fn hook_exponent(d: u64, delta_g: u64) -> u64 {
    assert!(delta_g >= 2, "delta_g must be at least 2");
    d.div_ceil(2).div_ceil(delta_g / 2)
}

/// `ln` of the unclamped hierarchical WER per syndrome-extraction cycle.
pub fn log_wer_hier(p: f64, cfg: &EstimatorConfig) -> f64 {
    let h = hook_exponent(cfg.outer.d, cfg.outer.delta_g) as f64;
    h * (log_p_level1_at(p, cfg.d_l, cfg) - cfg.ldpc_threshold.ln())
}

pub fn wer_hier(p: f64, cfg: &EstimatorConfig) -> f64 {
    log_wer_hier(p, cfg).min(0.0).exp()
}

/// X distance used by the biased model: `cfg.d_x`, else derived from
/// `cfg.eta`, else `d_l`.
pub fn biased_dx(p: f64, cfg: &EstimatorConfig) -> Result<usize, EstimatorError> {
    match (cfg.d_x, cfg.eta) {
        (Some(dx), _) => Ok(dx),
        (None, Some(eta)) => biased_tile_dims(cfg.d_l, eta, p)
            .map(|(dx, _)| dx)
            .map_err(|e| EstimatorError::InvalidConfig(e.to_string())),
        (None, None) => Ok(cfg.d_l),
    }
}

/// The two terms of the biased hierarchical WER: Z-type failures through
/// `d_z = d_l` tiles at full outer distance, and X-type failures through
/// `d_x` tiles with hook errors. Returned as natural logs, unclamped.
pub fn log_wer_hier_biased_terms(p: f64, cfg: &EstimatorConfig) -> Result<(f64, f64), EstimatorError> {
    let dx = biased_dx(p, cfg)?;
    let thr = cfg.ldpc_threshold.ln();
    let z = cfg.outer.d.div_ceil(2) as f64 * (log_p_level1_at(p, cfg.d_l, cfg) - thr);
    let x = hook_exponent(cfg.outer.d, cfg.outer.delta_g) as f64 * (log_p_level1_at(p, dx, cfg) - thr);
    Ok((z, x))
}

pub fn wer_hier_biased(p: f64, cfg: &EstimatorConfig) -> Result<f64, EstimatorError> {
    let (z, x) = log_wer_hier_biased_terms(p, cfg)?;
    Ok((z.min(0.0).exp() + x.min(0.0).exp()).min(1.0))
}

/// Physical rounds in one hierarchical syndrome-extraction cycle:
/// `2 Delta (r_swap t_route + 1) + 4`, unless overridden.
pub fn hier_cycle_rounds(cfg: &EstimatorConfig) -> f64 {
    cfg.cycle_rounds
        .unwrap_or_else(|| 2.0 * cfg.outer.delta() as f64 * (cfg.r_swap * cfg.t_route() as f64 + 1.0) + 4.0)
}

/// `ln` of the basic encoding's WER: `k` surface codes of distance `d_m`
/// over `t_rounds` rounds, decoded every `d_m` rounds.
pub fn log_wer_basic(p: f64, k: u64, d_m: usize, t_rounds: f64, cfg: &EstimatorConfig) -> f64 {
    log_fail_any(log_p_surf(p, d_m, cfg).min(0.0), k as f64 * t_rounds / d_m as f64)
}

pub fn wer_basic(p: f64, k: u64, d_m: usize, t_rounds: f64, cfg: &EstimatorConfig) -> f64 {
    log_wer_basic(p, k, d_m, t_rounds, cfg).min(0.0).exp()
}

/// Footprint of one rotated surface code: data plus ancillas.
pub fn surface_footprint(d: usize) -> u64 {
    2 * (d as u64) * (d as u64) - 1
}

/// Smallest odd `d_M` with `k (2 d_M^2 - 1) >= qubits_hier`.
pub fn match_surface_distance(qubits_hier: u64, k: u64) -> usize {
    assert!(k > 0, "k must be positive");
    let mut d = 1usize;
    while (k as u128) * (surface_footprint(d) as u128) < qubits_hier as u128 {
        d += 2;
    }
    d
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRow {
    pub p: f64,
    pub d_l: usize,
    pub r_swap: f64,
    pub wer_hier: f64,
    pub wer_basic: f64,
    pub d_m: usize,
    pub qubits_hier: u64,
    pub qubits_basic: u64,
}

pub fn estimate_row(p: f64, cfg: &EstimatorConfig) -> EstimateRow {
    let qubits_hier = cfg.qubits_hier();
    let d_m = match_surface_distance(qubits_hier, cfg.outer.k);
    EstimateRow {
        p,
        d_l: cfg.d_l,
        r_swap: cfg.r_swap,
        wer_hier: wer_hier(p, cfg),
        wer_basic: wer_basic(p, cfg.outer.k, d_m, hier_cycle_rounds(cfg), cfg),
        d_m,
        qubits_hier,
        qubits_basic: cfg.outer.k * surface_footprint(d_m),
    }
}

/// Rows for every `(d_l, r_swap, p)` combination, in that nesting order.
/// Empty `d_ls` or `r_swaps` fall back to the configured value.
pub fn sweep(cfg: &EstimatorConfig, p_grid: &[f64], d_ls: &[usize], r_swaps: &[f64]) -> Vec<EstimateRow> {
    let d_ls = if d_ls.is_empty() { vec![cfg.d_l] } else { d_ls.to_vec() };
    let r_swaps = if r_swaps.is_empty() { vec![cfg.r_swap] } else { r_swaps.to_vec() };
    let mut jobs = Vec::new();
    for &d_l in &d_ls {
        for &r_swap in &r_swaps {
            for &p in p_grid {
                jobs.push((EstimatorConfig { d_l, r_swap, ..cfg.clone() }, p));
            }
        }
    }
    par::map_slice(&jobs, |(c, p)| estimate_row(*p, c))
}

/// `n` points spaced evenly in `log p` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()).collect(),
    }
}

/// `ln wer_hier - ln wer_basic` before clamping the hierarchical rate.
pub fn crossover_gap(p: f64, cfg: &EstimatorConfig) -> f64 {
    let d_m = match_surface_distance(cfg.qubits_hier(), cfg.outer.k);
    log_wer_hier(p, cfg) - log_wer_basic(p, cfg.outer.k, d_m, hier_cycle_rounds(cfg), cfg)
}

/// Gate error rate where the hierarchical WER meets the qubit-matched
/// basic WER, by bisection in `log p` to relative tolerance `1e-3`.
/// `None` without a sign change on `[p_lo, p_hi]`.
pub fn find_crossover(cfg: &EstimatorConfig, p_lo: f64, p_hi: f64) -> Option<f64> {
    assert!(p_lo > 0.0 && p_lo < p_hi, "need 0 < p_lo < p_hi");
    let (mut lo, mut hi) = (p_lo.ln(), p_hi.ln());
    let (glo, ghi) = (crossover_gap(p_lo, cfg), crossover_gap(p_hi, cfg));
    if !(glo.is_finite() && ghi.is_finite()) || glo.signum() == ghi.signum() || glo == 0.0 || ghi == 0.0 {
        return match (glo == 0.0, ghi == 0.0) {
            (true, _) => Some(p_lo),
            (_, true) => Some(p_hi),
            _ => None,
        };
    }
    let slo = glo.signum();
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if crossover_gap(mid.exp(), cfg).signum() == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((0.5 * (lo + hi)).exp())
}

/// Candidate inner distances and outer codes for [`resource_ratio`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    /// Ordered from smallest to largest.
    pub members: Vec<OuterCode>,
    pub r_swap: f64,
    /// Odd inner distances to try, ascending.
    pub d_l_candidates: Vec<usize>,
}

impl FamilyConfig {
    pub fn expander_48(members: u32, r_swap: f64) -> Self {
        FamilyConfig {
            members: (0..members).map(OuterCode::expander_48).collect(),
            r_swap,
            d_l_candidates: (3..=99).step_by(2).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceComparison {
    pub member: usize,
    pub d_l: usize,
    pub qubits_hier: u64,
    pub d_m: usize,
    pub qubits_basic: u64,
    pub ratio: f64,
}

/// Footprint of the smallest hierarchical memory reaching `target_wer`
/// (first member, then smallest `d_l`) against the basic encoding with the
/// smallest odd distance reaching the same WER over one hierarchical cycle.
pub fn resource_comparison(target_wer: f64, p: f64, family: &FamilyConfig) -> Result<ResourceComparison, EstimatorError> {
    let log_target = target_wer.ln();
    for (mi, outer) in family.members.iter().enumerate() {
        for &d_l in &family.d_l_candidates {
            let cfg = EstimatorConfig::new(outer.clone(), d_l, family.r_swap);
            if log_wer_hier(p, &cfg) > log_target {
                continue;
            }
            let t = hier_cycle_rounds(&cfg);
            let mut d_m = 1;
            while log_wer_basic(p, outer.k, d_m, t, &cfg) > log_target {
                d_m += 2;
                if d_m > 100_001 {
                    return Err(EstimatorError::NoMemberMeetsTarget { target: target_wer, p });
                }
            }
            let qubits_hier = cfg.qubits_hier();
            let qubits_basic = outer.k * surface_footprint(d_m);
            return Ok(ResourceComparison {
                member: mi,
                d_l,
                qubits_hier,
                d_m,
                qubits_basic,
                ratio: qubits_basic as f64 / qubits_hier as f64,
            });
        }
    }
    Err(EstimatorError::NoMemberMeetsTarget { target: target_wer, p })
}

pub fn resource_ratio(target_wer: f64, p: f64, family: &FamilyConfig) -> Result<f64, EstimatorError> {
    resource_comparison(target_wer, p, family).map(|c| c.ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg58(d_l: usize, r: f64) -> EstimatorConfig {
        EstimatorConfig::new(OuterCode::expander_58(), d_l, r)
    }

    #[test]
    fn outer_codes() {
        let c = OuterCode::expander_58();
        assert_eq!(c.tiles_side(), 1057);
        let c = OuterCode::expander_48(0);
        assert_eq!((c.n, c.k, c.d), (327_680, 65_536, 32));
        assert_eq!(c.tiles_side(), 573);
        assert_eq!(t_route(3, 573), 7 * 1716 + 8);
    }

    #[test]
    fn surface_rates() {
        let c = cfg58(3, 1.0);
        for d in 3..=27 {
            assert_relative_eq!(p_surf(1e-2, d, &c), 0.1, max_relative = 1e-12);
        }
        assert_relative_eq!(p_surf(1e-3, 3, &c), 1e-3, max_relative = 1e-12);
        assert_relative_eq!(p_surf(1e-3, 5, &c), 1e-4, max_relative = 1e-12);
        assert_eq!(p_surf(0.5, 9, &c), 1.0);
    }

    #[test]
    fn level1() {
        let c = EstimatorConfig { tiles_side: Some(900), ..cfg58(3, 1.0) };
        let e = 18_887.0 / 3.0 + 1.0;
        assert_relative_eq!(p_level1(1e-3, &c), 1.0 - (1.0 - 1e-3f64).powf(e), max_relative = 1e-10);
        let c = cfg58(21, 1.0);
        let ps = p_surf(1e-4, 21, &c);
        let lin = ps * level1_exponent(21, &c);
        assert_relative_eq!(p_level1(1e-4, &c), lin, max_relative = 1e-2);
    }

    #[test]
    fn hooks() {
        assert_eq!(hook_exponent(119, 13), 10);
        assert_eq!(hook_exponent(32, 12), 3);
        assert_eq!(hook_exponent(31, 2), 16);
        assert_eq!(119u64.div_ceil(2), 60);
    }

    #[test]
    fn basic_limits() {
        let c = cfg58(3, 1.0);
        assert_relative_eq!(wer_basic(1e-3, 1, 5, 5.0, &c), p_surf(1e-3, 5, &c), max_relative = 1e-12);
        let w = wer_basic(1e-5, 10, 9, 90.0, &c);
        assert_relative_eq!(w, 100.0 * p_surf(1e-5, 9, &c), max_relative = 1e-6);
        assert_eq!(match_surface_distance(10, 10), 1);
        assert_eq!(match_surface_distance(11, 10), 3);
    }

    #[test]
    fn cycle_rounds() {
        let c = EstimatorConfig { tiles_side: Some(900), ..cfg58(3, 1.0) };
        assert_eq!(hier_cycle_rounds(&c), 2.0 * 16.0 * 18_888.0 + 4.0);
    }

    #[test]
    fn sweep_shapes() {
        let c = cfg58(21, 1.0);
        assert!(sweep(&c, &[], &[], &[]).is_empty());
        let rows = sweep(&c, &[1e-3], &[], &[]);
        assert_eq!(rows, vec![estimate_row(1e-3, &c)]);
        let rows = sweep(&c, &log_grid(1e-4, 1e-2, 100), &[], &[]);
        for w in rows.windows(2) {
            assert!(w[1].wer_hier >= w[0].wer_hier && w[1].wer_basic >= w[0].wer_basic);
            assert!(w[1].qubits_basic >= w[1].qubits_hier);
        }
    }
}
