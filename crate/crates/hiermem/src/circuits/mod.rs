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

//! Circuit IR and the two syndrome-extraction compilers.
//!
//! Qubit ids are physical positions. A `SWAP a b` exchanges the states held
//! at `a` and `b`, so later gates always name positions, never logical
//! qubits. Measurement outcomes are labeled in `readouts`, one entry per
//! measurement location in step order.

mod ideal;
mod local;
mod text;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::CodeError;
use crate::routing::RoutingError;

pub use ideal::{build_ideal_sec, tanner_stage_coloring, GateKind, Stage, StagePlan};
pub use local::{build_local_sec, local_depth_bound, place_bilayer, BilayerPlacement};
pub use verify::{noiseless_syndrome, verify_schedule, ScheduleReport, ScheduleViolation, Syndrome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid circuit: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SinglePauli {
    X,
    Y,
    Z,
}

/// One fault location. For `Cnot`/`Cz` the first id is the control
/// (ancilla) and the second the target (data).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Location {
    PrepPlus(usize),
    PrepZero(usize),
    MeasX(usize),
    MeasZ(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
    Idle(usize),
    Pauli(usize, SinglePauli),
}

impl Location {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        use Location::*;
        match *self {
            PrepPlus(q) | PrepZero(q) | MeasX(q) | MeasZ(q) | Idle(q) | Pauli(q, _) => (q, None),
            Cnot(a, b) | Cz(a, b) | Swap(a, b) => (a, Some(b)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Location::MeasX(_) | Location::MeasZ(_))
    }

    pub fn max_qubit(&self) -> usize {
        let (a, b) = self.qubits();
        b.map_or(a, |b| a.max(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Data,
    AncillaX,
    AncillaZ,
    Buffer,
}

/// Physical site: layer 0 is the bottom (data) layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub layer: u8,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    X,
    Z,
}

/// Which check a measurement location reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Readout {
    pub phase: Phase,
    pub check: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub width: usize,
    pub steps: Vec<Vec<Location>>,
    /// Present for geometry-constrained circuits.
    pub placement: Option<Vec<Site>>,
    pub roles: Vec<Role>,
    /// Position of data qubit `j` (data never moves).
    pub data_qubits: Vec<usize>,
    pub readouts: Vec<Readout>,
}

impl Circuit {
    /// Unplaced circuit with every qubit marked as data.
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            steps: Vec::new(),
            placement: None,
            roles: vec![Role::Data; width],
            data_qubits: (0..width).collect(),
            readouts: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn push_step(&mut self, step: Vec<Location>) {
        self.steps.push(step);
    }

    pub fn location_count(&self) -> usize {
        self.steps.iter().map(Vec::len).sum()
    }

    pub fn locations(&self) -> impl Iterator<Item = (usize, usize, &Location)> {
        self.steps.iter().enumerate().flat_map(|(t, s)| s.iter().enumerate().map(move |(i, l)| (t, i, l)))
    }

    pub fn measurement_count(&self) -> usize {
        self.locations().filter(|(_, _, l)| l.is_measurement()).count()
    }

    pub fn to_text(&self) -> String {
        text::to_text(self)
    }

    pub fn from_text(s: &str) -> Result<Self, CircuitError> {
        text::from_text(s)
    }
}
