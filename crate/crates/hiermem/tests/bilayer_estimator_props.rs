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

use hiermem::bilayer::{logical_route_depth, physical_qubit_count, tile_permutation_sim};
use hiermem::estimator::{log_grid, p_surf, wer_basic, wer_hier, hier_cycle_rounds, EstimatorConfig, OuterCode};
use hiermem::routing::Permutation;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tile_simulation_is_clean(l in 1usize..=3, d in prop::sample::select(vec![1usize, 3, 5]), seed in any::<u64>()) {
        let alpha = Permutation::seeded(2 * l * l, seed);
        let rep = tile_permutation_sim(l, d, &alpha).unwrap();
        prop_assert!(rep.violations.is_empty());
        prop_assert!(rep.depth <= rep.safe_depth_bound);
        prop_assert!(rep.touched_sites as u64 <= physical_qubit_count(l, d));
    }
}

proptest! {
    #[test]
    fn route_depth_nonincreasing_in_range(l in 1usize..2000, d in 1usize..40, r in 1usize..400) {
        prop_assert!(logical_route_depth(l, d, r + 1) <= logical_route_depth(l, d, r));
    }

    #[test]
    fn wers_are_clamped_and_monotone(d_l in 3usize..40, r_swap in 0.001f64..2.0, members in 0u32..3) {
        let outer = if members == 0 { OuterCode::expander_58() } else { OuterCode::expander_48(members - 1) };
        let cfg = EstimatorConfig::new(outer, d_l, r_swap);
        let t = hier_cycle_rounds(&cfg);
        let mut last = (0.0, 0.0);
        for p in log_grid(1e-5, 0.5, 40) {
            let h = wer_hier(p, &cfg);
            let b = wer_basic(p, cfg.outer.k, 25, t, &cfg);
            prop_assert!((0.0..=1.0).contains(&h) && (0.0..=1.0).contains(&b));
            prop_assert!(h >= last.0 && b >= last.1);
            last = (h, b);
        }
    }

    #[test]
    fn surface_rate_at_threshold_is_the_prefactor(d in 1usize..60, pref in 0.01f64..1.0) {
        let cfg = EstimatorConfig { surface_prefactor: pref, ..EstimatorConfig::new(OuterCode::expander_58(), 3, 1.0) };
        let v = p_surf(cfg.surface_threshold, d, &cfg);
        prop_assert!((v - pref).abs() <= 1e-12 * pref);
    }
}
