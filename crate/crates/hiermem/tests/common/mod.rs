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

#![allow(dead_code)]

use hiermem::bits::BitVec;
use hiermem::codes::{hypergraph_product, BinaryMatrix, CssCode, SparseBinMatrix};
use proptest::prelude::*;

/// Random `rows x cols` binary matrix.
pub fn matrix(rows: std::ops::RangeInclusive<usize>, cols: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = BinaryMatrix> {
    (rows, cols).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(0u8..2, n), m).prop_map(|r| BinaryMatrix::from_rows(&r))
    })
}

/// Small CSS codes as hypergraph products of random classical matrices.
pub fn small_css() -> impl Strategy<Value = CssCode> {
    (matrix(1..=3, 2..=4), matrix(1..=3, 2..=4)).prop_map(|(a, b)| hypergraph_product(&a, &b).unwrap())
}

/// `H e` over GF(2) for a sparse `H`.
pub fn syndrome(h: &SparseBinMatrix, e: &BitVec) -> BitVec {
    BitVec::from_bools(&(0..h.rows()).map(|r| h.row(r).iter().filter(|&&c| e.get(c as usize)).count() % 2 == 1).collect::<Vec<_>>())
}
