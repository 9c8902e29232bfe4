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

//! Bilayer placement and the geometry-constrained compiler.
//!
//! Data qubit `j` sits in bottom slot `j`, ancilla `i` starts in top slot
//! `i`; slot `s` has grid coordinates `(s / L', s % L')`, matching the
//! vertex numbering of the lattice routers. Only the top layer moves.

use super::ideal::{entangle, Stage};
use super::{tanner_stage_coloring, Circuit, CircuitError, Location, Phase, Readout, Role, Site};
use crate::codes::CssCode;
use crate::routing::{lattice_depth_bound, route_lattice, Permutation, RoutingMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilayerPlacement {
    /// Grid side `L' = ceil(sqrt(max(n, m0)))`.
    pub side: usize,
    pub n: usize,
    pub m0: usize,
    pub mx: usize,
}

impl BilayerPlacement {
    pub fn slots(&self) -> usize {
        self.side * self.side
    }

    pub fn width(&self) -> usize {
        2 * self.slots()
    }

    /// Qubit id of `slot` on `layer` (0 bottom, 1 top).
    pub fn qubit(&self, layer: usize, slot: usize) -> usize {
        layer * self.slots() + slot
    }

    pub fn site(&self, q: usize) -> Site {
        let (layer, s) = (q / self.slots(), q % self.slots());
        Site { layer: layer as u8, x: (s / self.side) as i64, y: (s % self.side) as i64 }
    }

    /// Roles at circuit start.
    pub fn roles(&self) -> Vec<Role> {
        (0..self.width())
            .map(|q| {
                let s = q % self.slots();
                match (q / self.slots(), s) {
                    (0, s) if s < self.n => Role::Data,
                    (1, s) if s < self.mx => Role::AncillaX,
                    (1, s) if s < self.m0 => Role::AncillaZ,
                    _ => Role::Buffer,
                }
            })
            .collect()
    }
}

fn ceil_sqrt(v: usize) -> usize {
    let mut r = (v as f64).sqrt() as usize;
    while r * r < v {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= v {
        r -= 1;
    }
    r
}

pub fn place_bilayer(c: &CssCode) -> BilayerPlacement {
    let side = ceil_sqrt(c.n().max(c.m0())).max(1);
    BilayerPlacement { side, n: c.n(), m0: c.m0(), mx: c.mx() }
}

/// Depth guaranteed by [`build_local_sec`] for a code with `delta =
/// max(delta_q, delta_g)`; `None` in sparse mode.
pub fn local_depth_bound(delta: usize, side: usize, r: usize, mode: RoutingMode) -> Option<usize> {
    lattice_depth_bound(side, r, mode).map(|route| 2 * delta * (route + 1) + 4)
}

/// Top-layer permutation for one stage. `pos[i]` is ancilla `i`'s slot;
/// `want` lists `(ancilla, target slot)`.
fn stage_permutation(side: usize, pos: &[usize], want: &[(usize, usize)]) -> Permutation {
    let slots = side * side;
    let mut tgt = vec![usize::MAX; slots];
    let mut claimed = vec![false; slots];
    for &(i, t) in want {
        tgt[pos[i]] = t;
        claimed[t] = true;
    }
    let mut used = claimed.clone();
    let mut displaced = Vec::new();
    for s in 0..slots {
        if tgt[s] != usize::MAX {
            continue;
        }
        if claimed[s] {
            displaced.push(s);
        } else {
            tgt[s] = s;
            used[s] = true;
        }
    }
    let mut free: Vec<usize> = (0..slots).filter(|&s| !used[s]).collect();
    let xy = |s: usize| ((s / side) as i64, (s % side) as i64);
    for s in displaced {
        let (x, y) = xy(s);
        let (k, _) = free
            .iter()
            .enumerate()
            .min_by_key(|&(_, &f)| {
                let (fx, fy) = xy(f);
                ((fx - x).pow(2) + (fy - y).pow(2), f)
            })
            .expect("free slot count matches displaced count");
        tgt[s] = free.swap_remove(k);
    }
    Permutation::new(tgt).expect("stage targets form a bijection")
}

/// Each entangling stage routes the top layer so every ancilla of the
/// stage sits above its data partner, then applies one step of vertical
/// gates. Sparse mode uses the same router graph (from `seed`) for every
/// stage.
pub fn build_local_sec(c: &CssCode, r: usize, mode: RoutingMode, seed: u64) -> Result<Circuit, CircuitError> {
    let pl = place_bilayer(c);
    let side = pl.side;
    let mut circ = Circuit::new(pl.width());
    circ.roles = pl.roles();
    circ.placement = Some((0..pl.width()).map(|q| pl.site(q)).collect());
    circ.data_qubits = (0..pl.n).map(|j| pl.qubit(0, j)).collect();
    let mut pos: Vec<usize> = (0..pl.m0).collect();
    let checks = |ph: Phase| if ph == Phase::X { c.mx() } else { c.mz() };
    for stage in tanner_stage_coloring(c).stages {
        match stage {
            Stage::Prep(ph) => {
                circ.push_step((0..checks(ph)).map(|i| Location::PrepPlus(pl.qubit(1, pos[i]))).collect());
            }
            Stage::Measure(ph) => {
                circ.readouts.extend((0..checks(ph)).map(|check| Readout { phase: ph, check }));
                circ.push_step((0..checks(ph)).map(|i| Location::MeasX(pl.qubit(1, pos[i]))).collect());
            }
            Stage::Entangle { gate, pairs, .. } => {
                let alpha = stage_permutation(side, &pos, &pairs);
                if !alpha.is_identity() {
                    let route = route_lattice(&alpha, side, r, mode, seed)?;
                    for step in &route.schedule.steps {
                        circ.push_step(
                            step.iter().map(|&(u, v)| Location::Swap(pl.qubit(1, u), pl.qubit(1, v))).collect(),
                        );
                    }
                    for p in pos.iter_mut() {
                        *p = alpha.apply(*p);
                    }
                }
                circ.push_step(pairs.iter().map(|&(i, j)| entangle(gate, pl.qubit(1, pos[i]), pl.qubit(0, j))).collect());
            }
        }
    }
    Ok(circ)
}
