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

//! Exact output distribution of small faulty circuits.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::{simulate_faulty, FaultAssignment, LocalPauli, PauliError, PauliVec};
use crate::circuits::{Circuit, Location};
use crate::par;

pub const ENUMERATION_MAX_LOCATIONS: usize = 14;
const MAX_CONFIGURATIONS: u64 = 1 << 30;

/// The Paulis a failing location can apply, each equally likely. Matches
/// the sampler's fault model.
pub fn fault_choices(loc: &Location) -> Vec<LocalPauli> {
    match loc {
        Location::PrepPlus(_) | Location::MeasX(_) => vec![LocalPauli::Z],
        Location::PrepZero(_) | Location::MeasZ(_) => vec![LocalPauli::X],
        l if l.is_two_qubit() => (0..15).map(|i| LocalPauli::nontrivial(2, i)).collect(),
        _ => (0..3).map(|i| LocalPauli::nontrivial(1, i)).collect(),
    }
}

/// Exact law of the residual error: X and Z supports (sorted qubit ids)
/// of the final frame, with each flipped readout folded onto its measured
/// qubit (an X-basis flip counts as Z, a Z-basis flip as X).
#[derive(Clone, Debug, PartialEq)]
pub struct FaultDistribution {
    pub width: usize,
    pub entries: Vec<(Vec<usize>, Vec<usize>, f64)>,
}

impl FaultDistribution {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum()
    }

    /// `Pr(E ⊆ supp)` where the support is the union of X and Z supports.
    pub fn covering(&self, e: &[usize]) -> f64 {
        self.entries
            .iter()
            .filter(|(x, z, _)| e.iter().all(|q| x.binary_search(q).is_ok() || z.binary_search(q).is_ok()))
            .map(|e| e.2)
            .sum()
    }

    /// Marginal over `(X support, Z support)` restricted to `qubits`.
    pub fn marginal(&self, qubits: &[usize]) -> Vec<(Vec<usize>, Vec<usize>, f64)> {
        let mut m: BTreeMap<(Vec<usize>, Vec<usize>), f64> = BTreeMap::new();
        for (x, z, p) in &self.entries {
            let keep = |s: &Vec<usize>| s.iter().copied().filter(|q| qubits.contains(q)).collect::<Vec<_>>();
            *m.entry((keep(x), keep(z))).or_default() += p;
        }
        m.into_iter().map(|((x, z), p)| (x, z, p)).collect()
    }

    /// CSV with columns `x_support,z_support,probability`; supports are
    /// space-separated qubit ids.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x_support,z_support,probability\n");
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        for (x, z, p) in &self.entries {
            let _ = writeln!(s, "{},{},{p:e}", join(x), join(z));
        }
        s
    }
}

/// Enumerates every fault pattern: each location stays clean with
/// probability `1 - p` or applies one of its [`fault_choices`] with
/// probability `p / choices`.
pub fn enumerate_fault_distribution(circ: &Circuit, p: f64) -> Result<FaultDistribution, PauliError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PauliError::InvalidRate(p));
    }
    let locs: Vec<(usize, usize, Location)> = circ.locations().map(|(t, i, l)| (t, i, *l)).collect();
    if locs.len() > ENUMERATION_MAX_LOCATIONS {
        return Err(PauliError::InstanceTooLarge(format!(
            "{} locations, limit {ENUMERATION_MAX_LOCATIONS}",
            locs.len()
        )));
    }
    let choices: Vec<Vec<LocalPauli>> = locs.iter().map(|l| fault_choices(&l.2)).collect();
    let radix: Vec<u64> = choices.iter().map(|c| c.len() as u64 + 1).collect();
    let total = radix.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r).filter(|&v| v <= MAX_CONFIGURATIONS));
    let total = total.ok_or_else(|| PauliError::InstanceTooLarge("too many fault configurations".into()))?;
    let meas: Vec<Location> = circ.locations().filter(|l| l.2.is_measurement()).map(|l| *l.2).collect();
    let input = PauliVec::new(circ.width);

    let chunks = total.min(256);
    let partial = par::map_range(chunks as usize, |ch| {
        let (lo, hi) = (total * ch as u64 / chunks, total * (ch as u64 + 1) / chunks);
        let mut digits = vec![0u64; radix.len()];
        let mut v = lo;
        for (d, r) in digits.iter_mut().zip(&radix) {
            *d = v % r;
            v /= r;
        }
        let mut acc: HashMap<(Vec<usize>, Vec<usize>), f64> = HashMap::new();
        for _ in lo..hi {
            let mut faults = FaultAssignment::default();
            let mut prob = 1.0;
            for (k, &d) in digits.iter().enumerate() {
                if d == 0 {
                    prob *= 1.0 - p;
                } else {
                    prob *= p / choices[k].len() as f64;
                    faults.insert(locs[k].0, locs[k].1, choices[k][d as usize - 1]);
                }
            }
            if prob > 0.0 {
                let out = simulate_faulty(circ, &faults, &input);
                let mut frame = out.output;
                for (loc, flip) in meas.iter().zip(out.flips) {
                    if flip {
                        match *loc {
                            Location::MeasX(q) => frame.set(q, frame.get(q).0, true),
                            Location::MeasZ(q) => frame.set(q, true, frame.get(q).1),
                            _ => unreachable!(),
                        }
                    }
                }
                *acc.entry((frame.x().ones().collect(), frame.z().ones().collect())).or_default() += prob;
            }
            for (d, r) in digits.iter_mut().zip(&radix) {
                *d += 1;
                if *d < *r {
                    break;
                }
                *d = 0;
            }
        }
        let mut v: Vec<_> = acc.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    });
    let mut merged: BTreeMap<(Vec<usize>, Vec<usize>), f64> = BTreeMap::new();
    for part in partial {
        for (k, p) in part {
            *merged.entry(k).or_default() += p;
        }
    }
    Ok(FaultDistribution { width: circ.width, entries: merged.into_iter().map(|((x, z), p)| (x, z, p)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn check_circuit() -> Circuit {
        let mut c = Circuit::new(3);
        c.push_step(vec![Location::PrepPlus(2)]);
        c.push_step(vec![Location::Cnot(2, 0), Location::Idle(1)]);
        c.push_step(vec![Location::Cnot(2, 1), Location::Idle(0)]);
        c.push_step(vec![Location::MeasX(2)]);
        c
    }

    #[test]
    fn zero_rate_is_point_mass() {
        let d = enumerate_fault_distribution(&check_circuit(), 0.0).unwrap();
        assert_eq!(d.entries, vec![(vec![], vec![], 1.0)]);
    }

    #[test]
    fn mass_sums_to_one() {
        let d = enumerate_fault_distribution(&check_circuit(), 0.05).unwrap();
        assert_relative_eq!(d.total(), 1.0, max_relative = 1e-12);
        // A lone readout flip (prep or measurement fault) shows up as Z on the ancilla.
        let lone: f64 = d.entries.iter().filter(|e| e.0.is_empty() && e.1 == vec![2]).map(|e| e.2).sum();
        assert!(lone > 0.09 * 0.95f64.powi(5));
        assert!(d.to_csv().starts_with("x_support,z_support,probability\n"));
        assert_relative_eq!(d.covering(&[]), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn too_many_locations() {
        let mut c = Circuit::new(1);
        for _ in 0..15 {
            c.push_step(vec![Location::Idle(0)]);
        }
        assert!(matches!(enumerate_fault_distribution(&c, 0.1), Err(PauliError::InstanceTooLarge(_))));
    }
}
