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

//! Stage plans and the nonlocal circuit.

use super::{Circuit, Location, Phase, Readout, Role};
use crate::codes::{CssCode, SparseBinMatrix};
use crate::routing::edge_color_bipartite;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    Cnot,
    Cz,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    Prep(Phase),
    /// `(check, data)` pairs, disjoint on both sides.
    Entangle { phase: Phase, gate: GateKind, pairs: Vec<(usize, usize)> },
    Measure(Phase),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StagePlan {
    pub stages: Vec<Stage>,
}

impl StagePlan {
    pub fn entangle_count(&self, phase: Phase) -> usize {
        self.stages.iter().filter(|s| matches!(s, Stage::Entangle { phase: p, .. } if *p == phase)).count()
    }
}

fn color_phase(h: &SparseBinMatrix, n: usize, phase: Phase, gate: GateKind, out: &mut Vec<Stage>) {
    if h.rows() == 0 || h.nnz() == 0 {
        return;
    }
    let edges: Vec<(usize, usize)> =
        (0..h.rows()).flat_map(|i| h.row(i).iter().map(move |&j| (i, j as usize))).collect();
    let colors = h.max_row_weight().max(h.col_weights().into_iter().max().unwrap_or(0));
    // A simple bipartite graph always has a coloring with max-degree colors.
    let col = edge_color_bipartite(h.rows(), n, &edges, colors).expect("bipartite coloring with max-degree colors");
    let mut classes = vec![Vec::new(); colors];
    for (e, c) in edges.into_iter().zip(col) {
        classes[c].push(e);
    }
    out.push(Stage::Prep(phase));
    for pairs in classes.into_iter().filter(|c| !c.is_empty()) {
        out.push(Stage::Entangle { phase, gate, pairs });
    }
    out.push(Stage::Measure(phase));
}

/// X phase (CNOT stages) then Z phase (CZ stages), one color class per
/// entangling stage. Phases without checks are omitted.
pub fn tanner_stage_coloring(c: &CssCode) -> StagePlan {
    let mut stages = Vec::new();
    color_phase(c.hx(), c.n(), Phase::X, GateKind::Cnot, &mut stages);
    color_phase(c.hz(), c.n(), Phase::Z, GateKind::Cz, &mut stages);
    StagePlan { stages }
}

fn checks(c: &CssCode, phase: Phase) -> usize {
    match phase {
        Phase::X => c.mx(),
        Phase::Z => c.mz(),
    }
}

pub(super) fn entangle(gate: GateKind, anc: usize, data: usize) -> Location {
    match gate {
        GateKind::Cnot => Location::Cnot(anc, data),
        GateKind::Cz => Location::Cz(anc, data),
    }
}

/// Data on `0..n`, ancilla `i` on `n + i`, shared by both phases. Each
/// stage is one step.
pub fn build_ideal_sec(c: &CssCode) -> Circuit {
    let n = c.n();
    let m0 = c.m0();
    let mut circ = Circuit::new(n + m0);
    circ.data_qubits = (0..n).collect();
    for i in 0..m0 {
        circ.roles[n + i] = if i < c.mx() { Role::AncillaX } else { Role::AncillaZ };
    }
    for stage in tanner_stage_coloring(c).stages {
        let step = match stage {
            Stage::Prep(ph) => (0..checks(c, ph)).map(|i| Location::PrepPlus(n + i)).collect(),
            Stage::Entangle { gate, pairs, .. } => pairs.iter().map(|&(i, j)| entangle(gate, n + i, j)).collect(),
            Stage::Measure(ph) => {
                circ.readouts.extend((0..checks(c, ph)).map(|check| Readout { phase: ph, check }));
                (0..checks(c, ph)).map(|i| Location::MeasX(n + i)).collect()
            }
        };
        circ.push_step(step);
    }
    circ
}
