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

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FaultAssignment, LocalPauli};
use crate::circuits::{Circuit, Location};
use crate::par;

/// The fault a location suffers when it fails, drawn from `rng`.
/// Preparations and measurements flip their basis state or readout; other
/// locations get a uniform non-identity Pauli on their support.
fn draw(loc: &Location, rng: &mut impl Rng) -> LocalPauli {
    match loc {
        Location::PrepPlus(_) | Location::MeasX(_) => LocalPauli::Z,
        Location::PrepZero(_) | Location::MeasZ(_) => LocalPauli::X,
        l if l.is_two_qubit() => LocalPauli::nontrivial(2, rng.gen_range(0..15)),
        _ => LocalPauli::nontrivial(1, rng.gen_range(0..3)),
    }
}

/// Independent faults: probability `p` per location, `r_swap * p` for
/// SWAPs. Each step has its own RNG stream derived from `seed`.
pub fn sample_circuit_faults(circ: &Circuit, p: f64, r_swap: f64, seed: u64) -> FaultAssignment {
    let per_step = par::map_range(circ.depth(), |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::split_seed(seed, t as u64));
        let mut out = Vec::new();
        for (i, loc) in circ.steps[t].iter().enumerate() {
            let q = if matches!(loc, Location::Swap(..)) { r_swap * p } else { p };
            if rng.gen::<f64>() < q {
                out.push((i, draw(loc, &mut rng)));
            }
        }
        out
    });
    let mut f = FaultAssignment::default();
    for (t, v) in per_step.into_iter().enumerate() {
        for (i, pauli) in v {
            f.insert(t, i, pauli);
        }
    }
    f
}
