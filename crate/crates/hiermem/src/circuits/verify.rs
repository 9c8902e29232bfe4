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

//! Schedule validation and noiseless syndrome readout.

use std::collections::HashSet;
use std::fmt;

use super::{Circuit, Location, Phase};
use crate::bits::BitVec;
use crate::codes::CssCode;
use crate::pauli::{simulate_faulty, FaultAssignment, PauliVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleViolation {
    QubitOutOfRange { step: usize, qubit: usize },
    SelfInteraction { step: usize, qubit: usize },
    Collision { step: usize, qubit: usize },
    CrossLayerSwap { step: usize, a: usize, b: usize },
    Range { step: usize, a: usize, b: usize, length_sq: i64 },
    NonLocalGate { step: usize, a: usize, b: usize },
    PartnerLimit { qubit: usize, partners: usize, limit: usize },
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ScheduleViolation::*;
        match *self {
            QubitOutOfRange { step, qubit } => write!(f, "qubit {qubit} out of range at step {step}"),
            SelfInteraction { step, qubit } => write!(f, "two-qubit location on {qubit} alone at step {step}"),
            Collision { step, qubit } => write!(f, "collision: qubit {qubit} used twice at step {step}"),
            CrossLayerSwap { step, a, b } => write!(f, "cross-layer swap {a}-{b} at step {step}"),
            Range { step, a, b, length_sq } => {
                write!(f, "range violation: swap {a}-{b} has squared length {length_sq} at step {step}")
            }
            NonLocalGate { step, a, b } => write!(f, "non-local gate {a}-{b} at step {step}"),
            PartnerLimit { qubit, partners, limit } => {
                write!(f, "qubit {qubit} interacts with {partners} positions, limit {limit}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleReport {
    pub ok: bool,
    pub violations: Vec<ScheduleViolation>,
    /// Largest number of distinct positions any position interacts with.
    pub max_partners: usize,
}

const MAX_REPORTED: usize = 64;

/// Checks exclusivity always; swap range, gate locality and the partner
/// limit only for placed circuits.
pub fn verify_schedule(circ: &Circuit, r: usize, partner_limit: Option<usize>) -> ScheduleReport {
    let mut v = Vec::new();
    let mut seen = vec![usize::MAX; circ.width];
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    let r2 = (r * r) as i64;
    for (t, step) in circ.steps.iter().enumerate() {
        for loc in step {
            let (a, b) = loc.qubits();
            for q in std::iter::once(a).chain(b) {
                if q >= circ.width {
                    v.push(ScheduleViolation::QubitOutOfRange { step: t, qubit: q });
                } else if seen[q] == t {
                    v.push(ScheduleViolation::Collision { step: t, qubit: q });
                } else {
                    seen[q] = t;
                }
            }
            let Some(b) = b else { continue };
            if a == b {
                v.push(ScheduleViolation::SelfInteraction { step: t, qubit: a });
                continue;
            }
            pairs.insert((a.min(b), a.max(b)));
            let Some(place) = &circ.placement else { continue };
            let (Some(pa), Some(pb)) = (place.get(a), place.get(b)) else { continue };
            let len = (pa.x - pb.x).pow(2) + (pa.y - pb.y).pow(2);
            match loc {
                Location::Swap(..) => {
                    if pa.layer != pb.layer {
                        v.push(ScheduleViolation::CrossLayerSwap { step: t, a, b });
                    } else if len > r2 {
                        v.push(ScheduleViolation::Range { step: t, a, b, length_sq: len });
                    }
                }
                _ => {
                    let vertical = pa.layer != pb.layer && len == 0;
                    let adjacent = pa.layer == pb.layer && len == 1;
                    if !vertical && !adjacent {
                        v.push(ScheduleViolation::NonLocalGate { step: t, a, b });
                    }
                }
            }
        }
        if v.len() > MAX_REPORTED {
            break;
        }
    }
    let mut partners = vec![0usize; circ.width];
    for &(a, b) in &pairs {
        partners[a] += 1;
        partners[b] += 1;
    }
    let max_partners = partners.iter().copied().max().unwrap_or(0);
    if let (Some(limit), Some(_)) = (partner_limit, &circ.placement) {
        if let Some(q) = partners.iter().position(|&p| p > limit) {
            v.push(ScheduleViolation::PartnerLimit { qubit: q, partners: partners[q], limit });
        }
    }
    v.truncate(MAX_REPORTED);
    ScheduleReport { ok: v.is_empty(), violations: v, max_partners }
}

/// Syndrome bits: `x` has one bit per X check (sees Z errors), `z` one per
/// Z check (sees X errors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndrome {
    pub x: BitVec,
    pub z: BitVec,
}

/// Runs `circ` with `error` (a Pauli on the `n` data qubits) present at
/// the start and reads the labeled measurement record.
pub fn noiseless_syndrome(circ: &Circuit, c: &CssCode, error: &PauliVec) -> Syndrome {
    let mut input = PauliVec::new(circ.width);
    for (j, &q) in circ.data_qubits.iter().enumerate() {
        let (x, z) = error.get(j);
        input.set(q, x, z);
    }
    let out = simulate_faulty(circ, &FaultAssignment::default(), &input);
    let mut s = Syndrome { x: BitVec::new(c.mx()), z: BitVec::new(c.mz()) };
    for (r, &flip) in circ.readouts.iter().zip(&out.flips) {
        match r.phase {
            Phase::X => s.x.set(r.check, flip),
            Phase::Z => s.z.set(r.check, flip),
        }
    }
    s
}
