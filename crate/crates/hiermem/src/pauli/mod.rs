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

//! Pauli-frame propagation, fault models and the decay-rate calculus.
//!
//! Errors are tracked as X and Z masks up to phase. Within a step, faults
//! on measurement locations act just before readout; every other fault
//! acts after its location's ideal action.

mod enumerate;
mod rates;
mod sample;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bits::BitVec;
use crate::circuits::{Circuit, Location};

pub use enumerate::{enumerate_fault_distribution, fault_choices, FaultDistribution, ENUMERATION_MAX_LOCATIONS};
pub use rates::{
    compose_rates, covering_probability, depth1_rate, map_rate, pround_bound, pround_bound_with, DecayRate,
};
pub use sample::sample_circuit_faults;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("width mismatch: pauli has {pauli} qubits, step references qubit {qubit}")]
    WidthMismatch { pauli: usize, qubit: usize },
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("invalid fault: {0}")]
    InvalidFault(String),
    #[error("invalid rate: {0}")]
    InvalidRate(f64),
}

/// Pauli operator `X(x) Z(z)` up to phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliVec {
    x: BitVec,
    z: BitVec,
}

impl PauliVec {
    pub fn new(width: usize) -> Self {
        PauliVec { x: BitVec::new(width), z: BitVec::new(width) }
    }

    pub fn from_masks(x: BitVec, z: BitVec) -> Self {
        assert_eq!(x.len(), z.len(), "mask lengths differ");
        PauliVec { x, z }
    }

    pub fn width(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn get(&self, q: usize) -> (bool, bool) {
        (self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, x: bool, z: bool) {
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Qubits with a non-identity component.
    pub fn support(&self) -> Vec<usize> {
        (0..self.width()).filter(|&q| self.x.get(q) || self.z.get(q)).collect()
    }

    fn clear(&mut self, q: usize) {
        self.set(q, false, false);
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (pa, pb) = (self.get(a), self.get(b));
        self.set(a, pb.0, pb.1);
        self.set(b, pa.0, pa.1);
    }
}

/// Pauli on the qubits of one location: bit 0 is the first qubit, bit 1
/// the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalPauli {
    pub x: u8,
    pub z: u8,
}

impl LocalPauli {
    pub const X: LocalPauli = LocalPauli { x: 1, z: 0 };
    pub const Y: LocalPauli = LocalPauli { x: 1, z: 1 };
    pub const Z: LocalPauli = LocalPauli { x: 0, z: 1 };

    /// The `index`-th of the `4^k - 1` non-identity Paulis on `k` qubits,
    /// `index` in `0..4^k-1`.
    pub fn nontrivial(k: usize, index: usize) -> LocalPauli {
        let v = index + 1;
        let bits = k as u32;
        LocalPauli { x: (v & ((1 << bits) - 1)) as u8, z: (v >> bits) as u8 }
    }

    fn apply(self, loc: &Location, p: &mut PauliVec) {
        let (a, b) = loc.qubits();
        for (bit, q) in [(0, Some(a)), (1, b)] {
            let Some(q) = q else { continue };
            if self.x >> bit & 1 == 1 {
                p.x.flip(q);
            }
            if self.z >> bit & 1 == 1 {
                p.z.flip(q);
            }
        }
    }
}

/// Faults keyed by step: `(location index within step, Pauli)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaultAssignment {
    faults: BTreeMap<usize, Vec<(usize, LocalPauli)>>,
}

impl FaultAssignment {
    pub fn insert(&mut self, step: usize, location: usize, pauli: LocalPauli) {
        self.faults.entry(step).or_default().push((location, pauli));
    }

    pub fn is_empty(&self) -> bool {
        self.faults.values().all(Vec::is_empty)
    }

    pub fn len(&self) -> usize {
        self.faults.values().map(Vec::len).sum()
    }

    pub fn at_step(&self, step: usize) -> &[(usize, LocalPauli)] {
        self.faults.get(&step).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, LocalPauli)> + '_ {
        self.faults.iter().flat_map(|(&t, v)| v.iter().map(move |&(i, p)| (t, i, p)))
    }

    /// Every fault names an existing location and stays on its qubits.
    pub fn validate(&self, circ: &Circuit) -> Result<(), PauliError> {
        for (t, i, p) in self.iter() {
            let loc = circ
                .steps
                .get(t)
                .and_then(|s| s.get(i))
                .ok_or_else(|| PauliError::InvalidFault(format!("no location {i} at step {t}")))?;
            let mask = if loc.is_two_qubit() { 3 } else { 1 };
            if (p.x | p.z) & !mask != 0 {
                return Err(PauliError::InvalidFault(format!("fault at ({t}, {i}) leaves its location")));
            }
        }
        Ok(())
    }
}

/// Ideal action of one location. Returns the readout flip for measurements.
fn act(loc: &Location, p: &mut PauliVec) -> Option<bool> {
    match *loc {
        Location::PrepPlus(q) | Location::PrepZero(q) => p.clear(q),
        Location::MeasX(q) => {
            let flip = p.z.get(q);
            p.clear(q);
            return Some(flip);
        }
        Location::MeasZ(q) => {
            let flip = p.x.get(q);
            p.clear(q);
            return Some(flip);
        }
        Location::Cnot(c, t) => {
            if p.x.get(c) {
                p.x.flip(t);
            }
            if p.z.get(t) {
                p.z.flip(c);
            }
        }
        Location::Cz(c, t) => {
            let (xc, xt) = (p.x.get(c), p.x.get(t));
            if xt {
                p.z.flip(c);
            }
            if xc {
                p.z.flip(t);
            }
        }
        Location::Swap(a, b) => p.swap(a, b),
        Location::Idle(_) | Location::Pauli(..) => {}
    }
    None
}

fn check_width(step: &[Location], width: usize) -> Result<(), PauliError> {
    match step.iter().map(Location::max_qubit).max() {
        Some(q) if q >= width => Err(PauliError::WidthMismatch { pauli: width, qubit: q }),
        _ => Ok(()),
    }
}

/// Conjugates `pauli` through one step of ideal gates.
pub fn propagate_step(step: &[Location], pauli: &PauliVec) -> Result<PauliVec, PauliError> {
    check_width(step, pauli.width())?;
    let mut out = pauli.clone();
    for loc in step {
        act(loc, &mut out);
    }
    Ok(out)
}

/// Final Pauli frame and one readout flip per measurement location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimOutcome {
    pub output: PauliVec,
    pub flips: Vec<bool>,
}

/// Runs `circ` from the error `input` with `faults` injected. The circuit
/// and faults are assumed valid for `input.width()`.
pub fn simulate_faulty(circ: &Circuit, faults: &FaultAssignment, input: &PauliVec) -> SimOutcome {
    let mut p = input.clone();
    let mut flips = Vec::new();
    for (t, step) in circ.steps.iter().enumerate() {
        let fs = faults.at_step(t);
        for &(i, f) in fs {
            if step[i].is_measurement() {
                f.apply(&step[i], &mut p);
            }
        }
        for loc in step {
            if let Some(flip) = act(loc, &mut p) {
                flips.push(flip);
            }
        }
        for &(i, f) in fs {
            if !step[i].is_measurement() {
                f.apply(&step[i], &mut p);
            }
        }
    }
    SimOutcome { output: p, flips }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(x: [bool; 2], z: [bool; 2]) -> PauliVec {
        let mut p = PauliVec::new(2);
        p.set(0, x[0], z[0]);
        p.set(1, x[1], z[1]);
        p
    }

    #[test]
    fn cnot_doubles() {
        let cx = [Location::Cnot(0, 1)];
        assert_eq!(propagate_step(&cx, &two([true, false], [false; 2])).unwrap(), two([true, true], [false; 2]));
        assert_eq!(propagate_step(&cx, &two([false; 2], [false, true])).unwrap(), two([false; 2], [true, true]));
        let cz = [Location::Cz(0, 1)];
        assert_eq!(propagate_step(&cz, &two([true, false], [false; 2])).unwrap(), two([true, false], [false, true]));
        assert_eq!(propagate_step(&cz, &two([false; 2], [true, true])).unwrap(), two([false; 2], [true, true]));
        assert!(propagate_step(&[Location::Swap(0, 2)], &PauliVec::new(2)).is_err());
    }

    #[test]
    fn nontrivial_enumeration() {
        let all: std::collections::HashSet<_> = (0..15).map(|i| LocalPauli::nontrivial(2, i)).collect();
        assert_eq!(all.len(), 15);
        assert!(!all.contains(&LocalPauli { x: 0, z: 0 }));
        let one: Vec<_> = (0..3).map(|i| LocalPauli::nontrivial(1, i)).collect();
        assert_eq!(one, vec![LocalPauli::X, LocalPauli::Z, LocalPauli::Y]);
    }

    #[test]
    fn hook_error() {
        // Ancilla 0 checks data 1..=3; an X fault after the first CNOT lands on 2 and 3.
        let mut c = Circuit::new(4);
        c.push_step(vec![Location::PrepPlus(0)]);
        for q in 1..4 {
            c.push_step(vec![Location::Cnot(0, q)]);
        }
        c.push_step(vec![Location::MeasX(0)]);
        let mut f = FaultAssignment::default();
        f.insert(1, 0, LocalPauli::X);
        f.validate(&c).unwrap();
        let out = simulate_faulty(&c, &f, &PauliVec::new(4));
        assert_eq!(out.output.x().ones().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(out.flips, vec![false]);
        let mut bad = FaultAssignment::default();
        bad.insert(1, 0, LocalPauli { x: 2, z: 0 });
        assert!(bad.validate(&c).is_ok());
        bad.insert(0, 0, LocalPauli { x: 2, z: 0 });
        assert!(bad.validate(&c).is_err());
    }
}
