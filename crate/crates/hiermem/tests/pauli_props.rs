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

use hiermem::circuits::{Circuit, Location};
use hiermem::pauli::{
    enumerate_fault_distribution, pround_bound, propagate_step, sample_circuit_faults, DecayRate, PauliVec,
};
use proptest::prelude::*;

fn pauli(width: usize, bits: u64) -> PauliVec {
    let mut p = PauliVec::new(width);
    for q in 0..width {
        p.set(q, bits >> (2 * q) & 1 == 1, bits >> (2 * q + 1) & 1 == 1);
    }
    p
}

fn gate(kind: u8, a: usize, b: usize) -> Location {
    match kind {
        0 => Location::Cnot(a, b),
        1 => Location::Cz(a, b),
        _ => Location::Swap(a, b),
    }
}

fn xor(a: &PauliVec, b: &PauliVec) -> PauliVec {
    let mut out = a.clone();
    for q in 0..a.width() {
        let (ax, az) = a.get(q);
        let (bx, bz) = b.get(q);
        out.set(q, ax ^ bx, az ^ bz);
    }
    out
}

proptest! {
    #[test]
    fn propagation_is_linear_and_involutive(kind in 0u8..3, a in 0usize..4, off in 1usize..4, p in any::<u64>(), q in any::<u64>()) {
        let b = (a + off) % 4;
        let step = [gate(kind, a, b)];
        let (p, q) = (pauli(4, p), pauli(4, q));
        let fp = propagate_step(&step, &p).unwrap();
        let fq = propagate_step(&step, &q).unwrap();
        prop_assert_eq!(propagate_step(&step, &xor(&p, &q)).unwrap(), xor(&fp, &fq));
        prop_assert_eq!(propagate_step(&step, &fp).unwrap(), p);
    }

    #[test]
    fn pround_bound_is_monotone(d in 1usize..8, depth in 0usize..40, p in 0.0f64..0.5, dp in 0.0f64..0.5) {
        let r = |x: f64| DecayRate::new(x).unwrap();
        let base = pround_bound(d, depth, r(p)).value();
        prop_assert!(pround_bound(d, depth + 1, r(p)).value() >= base);
        prop_assert!(pround_bound(d, depth, r(p + dp)).value() >= base);
        prop_assert!(pround_bound(d + 1, depth, r(p)).value() >= base);
    }

    #[test]
    fn sampled_faults_are_valid(p in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut c = Circuit::new(3);
        c.push_step(vec![Location::PrepPlus(0), Location::PrepZero(1)]);
        c.push_step(vec![Location::Cnot(0, 1), Location::Idle(2)]);
        c.push_step(vec![Location::Swap(1, 2)]);
        c.push_step(vec![Location::MeasX(0)]);
        let f = sample_circuit_faults(&c, p, 1.0, seed);
        prop_assert!(f.validate(&c).is_ok());
        prop_assert!(f.len() <= c.location_count());
    }
}

#[test]
fn enumerated_distributions_are_normalized() {
    let mut c = Circuit::new(3);
    c.push_step(vec![Location::PrepPlus(2)]);
    c.push_step(vec![Location::Cnot(2, 0)]);
    c.push_step(vec![Location::Cnot(2, 1)]);
    c.push_step(vec![Location::MeasX(2)]);
    for p in [0.0, 0.01, 0.3] {
        let d = enumerate_fault_distribution(&c, p).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
    }
    let d0 = enumerate_fault_distribution(&c, 0.0).unwrap();
    assert!(d0.entries.iter().any(|(x, z, p)| x.is_empty() && z.is_empty() && (*p - 1.0).abs() < 1e-15));
}
