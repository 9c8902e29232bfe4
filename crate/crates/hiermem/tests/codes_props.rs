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

use hiermem::codes::{
    code_params, from_alist, hgp_k, hypergraph_product, rotated_surface_code, sample_full_rank_parity_check,
    sample_regular_parity_check, to_alist, BinaryMatrix, CssCode,
};
use proptest::prelude::*;

fn commutes(c: &CssCode) -> bool {
    let hx = c.hx().to_dense();
    let hz = c.hz().to_dense();
    hx.mul(&hz.transpose()).is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hgp_dimension_formula_matches_direct_rank(
        h1 in common::matrix(1..=8, 1..=32),
        h2 in common::matrix(1..=8, 1..=32),
    ) {
        let c = hypergraph_product(&h1, &h2).unwrap();
        prop_assert!(commutes(&c));
        prop_assert_eq!(hgp_k(&h1, &h2), code_params(&c).k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn regular_samples_have_exact_weights(seed in any::<u64>(), pick in 0usize..3) {
        let (n, cw, rw) = [(16, 3, 4), (24, 2, 6), (20, 3, 5)][pick];
        let h = sample_regular_parity_check(n, cw, rw, seed, 200).unwrap();
        prop_assert_eq!(h.rows(), n * cw / rw);
        prop_assert!(h.col_weights().iter().all(|&w| w == cw));
        prop_assert!((0..h.rows()).all(|r| h.row_weight(r) == rw));
    }

    #[test]
    fn full_rank_samples_are_full_rank(seed in any::<u64>()) {
        let h = sample_full_rank_parity_check(16, 3, 4, seed, 200).unwrap();
        prop_assert_eq!(h.rank(), h.rows());
    }

    #[test]
    fn alist_round_trips(h in common::matrix(1..=10, 1..=12)) {
        let s = h.to_sparse();
        prop_assert_eq!(from_alist(&to_alist(&s)).unwrap(), s);
    }
}

#[test]
fn surface_codes_commute_and_count() {
    for d in [3, 5, 7, 9] {
        let c = rotated_surface_code(d).unwrap();
        assert!(commutes(&c));
        assert_eq!(c.n(), d * d);
        assert_eq!(c.mx() + c.mz(), d * d - 1);
        assert_eq!(code_params(&c).k, 1);
    }
}

#[test]
fn anticommuting_checks_are_rejected() {
    let hx = BinaryMatrix::from_rows(&[vec![1, 0]]);
    let hz = BinaryMatrix::from_rows(&[vec![1, 1]]);
    assert!(CssCode::from_dense(&hx, &hz).is_err());
}
