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

mod common;

use hiermem::bits::BitVec;
use hiermem::circuits::{build_ideal_sec, build_local_sec, local_depth_bound, noiseless_syndrome, place_bilayer, verify_schedule, Location};
use hiermem::pauli::{propagate_step, PauliVec};
use hiermem::routing::RoutingMode;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ideal_circuits_measure_the_checks(c in common::small_css(), seed in any::<u64>()) {
        let circ = build_ideal_sec(&c);
        let delta = c.delta_q().max(c.delta_g());
        prop_assert_eq!(circ.width, c.n() + c.m0());
        prop_assert!(circ.depth() <= 2 * (delta + 2));
        let rep = verify_schedule(&circ, 1, None);
        prop_assert!(rep.ok, "{:?}", rep.violations);

        let n = c.n();
        let mut errors = Vec::new();
        for q in 0..n {
            for (x, z) in [(true, false), (false, true), (true, true)] {
                let mut e = PauliVec::new(n);
                e.set(q, x, z);
                errors.push(e);
            }
        }
        let mut s = seed;
        for _ in 0..20 {
            let mut e = PauliVec::new(n);
            for q in 0..n {
                s = hiermem::par::split_seed(s, q as u64);
                e.set(q, s & 1 == 1, s & 2 == 2);
            }
            errors.push(e);
        }
        for e in errors {
            let syn = noiseless_syndrome(&circ, &c, &e);
            prop_assert_eq!(&syn.x, &common::syndrome(c.hx(), e.z()));
            prop_assert_eq!(&syn.z, &common::syndrome(c.hz(), e.x()));
        }
    }

    #[test]
    fn local_circuits_are_valid(c in common::small_css(), seed in any::<u64>()) {
        let circ = build_local_sec(&c, 1, RoutingMode::Unit, seed).unwrap();
        let rep = verify_schedule(&circ, 1, None);
        prop_assert!(rep.ok, "{:?}", rep.violations);
        let delta = c.delta_q().max(c.delta_g());
        let bound = local_depth_bound(delta, place_bilayer(&c).side, 1, RoutingMode::Unit).unwrap();
        prop_assert!(circ.depth() <= bound, "{} > {}", circ.depth(), bound);
        let e = PauliVec::from_masks(BitVec::from_indices(c.n(), [0]), BitVec::new(c.n()));
        prop_assert_eq!(noiseless_syndrome(&circ, &c, &e).z, common::syndrome(c.hz(), e.x()));
    }

    /// CNOT stages with ancilla controls leave ancilla X and data Z untouched.
    #[test]
    fn cnot_stages_keep_invariant_subspace(c in common::small_css(), seed in any::<u64>()) {
        let circ = build_ideal_sec(&c);
        let n = c.n();
        let mut p = PauliVec::new(circ.width);
        let mut s = seed;
        for q in 0..circ.width {
            s = hiermem::par::split_seed(s, q as u64);
            p.set(q, s & 1 == 1, s & 2 == 2);
        }
        for step in circ.steps.iter().filter(|st| !st.is_empty() && st.iter().all(|l| matches!(l, Location::Cnot(..)))) {
            let next = propagate_step(step, &p).unwrap();
            for q in 0..circ.width {
                if q < n {
                    prop_assert_eq!(next.z().get(q), p.z().get(q));
                } else {
                    prop_assert_eq!(next.x().get(q), p.x().get(q));
                }
            }
            p = next;
        }
    }
}
