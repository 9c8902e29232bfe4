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

//! CSS codes: sampled regular classical codes, hypergraph products and the
//! rotated surface code.

mod io;
mod matrix;
mod surface;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitVec;
use crate::par;

pub use io::{from_alist, from_pbm, to_alist, to_pbm};
pub use matrix::{in_row_space, rank_f2, BinaryMatrix, SparseBinMatrix};
pub use surface::rotated_surface_code;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodeError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("sampling failed after {0} tries")]
    SamplingFailure(usize),
    #[error("check matrices do not commute (X row {0}, Z row {1})")]
    NotOrthogonal(usize, usize),
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("even distance {0} rejected")]
    EvenDistance(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// CSS code given by X- and Z-type check matrices on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct CssCode {
    hx: SparseBinMatrix,
    hz: SparseBinMatrix,
    qubit_coords: Option<Vec<(i64, i64)>>,
}

impl CssCode {
    /// Checks `hx * hz^T = 0`.
    pub fn new(hx: SparseBinMatrix, hz: SparseBinMatrix) -> Result<Self, CodeError> {
        if hx.cols() != hz.cols() {
            return Err(CodeError::InvalidParameters(format!(
                "hx has {} columns, hz has {}",
                hx.cols(),
                hz.cols()
            )));
        }
        check_orthogonal(&hx, &hz)?;
        Ok(CssCode { hx, hz, qubit_coords: None })
    }

    pub fn from_dense(hx: &BinaryMatrix, hz: &BinaryMatrix) -> Result<Self, CodeError> {
        Self::new(hx.to_sparse(), hz.to_sparse())
    }

    pub fn with_coords(mut self, coords: Vec<(i64, i64)>) -> Self {
        assert_eq!(coords.len(), self.n());
        self.qubit_coords = Some(coords);
        self
    }

    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    pub fn hx(&self) -> &SparseBinMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &SparseBinMatrix {
        &self.hz
    }

    pub fn mx(&self) -> usize {
        self.hx.rows()
    }

    pub fn mz(&self) -> usize {
        self.hz.rows()
    }

    /// Ancillas needed when X and Z phases reuse them.
    pub fn m0(&self) -> usize {
        self.mx().max(self.mz())
    }

    pub fn qubit_coords(&self) -> Option<&[(i64, i64)]> {
        self.qubit_coords.as_deref()
    }

    /// Max checks per qubit over both matrices.
    pub fn delta_q(&self) -> usize {
        let (a, b) = (self.hx.col_weights(), self.hz.col_weights());
        a.iter().zip(&b).map(|(x, y)| x + y).max().unwrap_or(0)
    }

    /// Max check weight.
    pub fn delta_g(&self) -> usize {
        self.hx.max_row_weight().max(self.hz.max_row_weight())
    }
}

fn check_orthogonal(hx: &SparseBinMatrix, hz: &SparseBinMatrix) -> Result<(), CodeError> {
    let zcols = hz.col_lists();
    let bad = par::map_range(hx.rows(), |i| {
        let mut parity: HashMap<u32, bool> = HashMap::new();
        for &c in hx.row(i) {
            for &j in &zcols[c as usize] {
                *parity.entry(j).or_default() ^= true;
            }
        }
        parity.into_iter().filter(|&(_, odd)| odd).map(|(j, _)| j).min().map(|j| (i, j as usize))
    });
    match bad.into_iter().flatten().next() {
        Some((i, j)) => Err(CodeError::NotOrthogonal(i, j)),
        None => Ok(()),
    }
}

/// `[[n, k, d]]` together with the LDPC degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub delta_q: usize,
    pub delta_g: usize,
    pub d: Option<usize>,
}

/// Parameters by direct GF(2) rank of both check matrices.
pub fn code_params(c: &CssCode) -> CodeParams {
    let k = c.n() - c.hx.to_dense().rank() - c.hz.to_dense().rank();
    CodeParams { n: c.n(), k, delta_q: c.delta_q(), delta_g: c.delta_g(), d: None }
}

/// Random `m x n` matrix with exact column weight `col_w` and row weight
/// `row_w`. Sockets are paired at random; repeated (row, column) pairs are
/// then removed by random double-edge switches that keep every degree.
pub fn sample_regular_parity_check(
    n: usize,
    col_w: usize,
    row_w: usize,
    seed: u64,
    max_tries: usize,
) -> Result<BinaryMatrix, CodeError> {
    if n == 0 || col_w == 0 || row_w == 0 || !(n * col_w).is_multiple_of(row_w) {
        return Err(CodeError::InvalidParameters(format!("n*col_w must be a multiple of row_w (n={n}, col_w={col_w}, row_w={row_w})")));
    }
    let m = n * col_w / row_w;
    if col_w > m || row_w > n {
        return Err(CodeError::InvalidParameters(format!("weights exceed dimensions (m={m}, n={n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        let mut rows: Vec<usize> = (0..n * col_w).map(|s| s / row_w).collect();
        rows.shuffle(&mut rng);
        // edge s joins column s / col_w to row rows[s]
        let mut count: HashMap<(usize, usize), u32> = HashMap::new();
        for (s, &r) in rows.iter().enumerate() {
            *count.entry((s / col_w, r)).or_default() += 1;
        }
        let mut bad: Vec<usize> = (0..rows.len()).filter(|&s| count[&(s / col_w, rows[s])] > 1).collect();
        let budget = 200 * rows.len() + 1000;
        let mut spent = 0;
        while !bad.is_empty() && spent < budget {
            spent += 1;
            let e = bad[rng.gen_range(0..bad.len())];
            let f = rng.gen_range(0..rows.len());
            let (c1, r1, c2, r2) = (e / col_w, rows[e], f / col_w, rows[f]);
            if c1 == c2 || r1 == r2 || count.get(&(c1, r2)).is_some_and(|&x| x > 0) || count.get(&(c2, r1)).is_some_and(|&x| x > 0) {
                continue;
            }
            for key in [(c1, r1), (c2, r2)] {
                *count.get_mut(&key).expect("present") -= 1;
            }
            *count.entry((c1, r2)).or_default() += 1;
            *count.entry((c2, r1)).or_default() += 1;
            rows.swap(e, f);
            bad.retain(|&s| count[&(s / col_w, rows[s])] > 1);
        }
        if !bad.is_empty() {
            continue;
        }
        let mut h = BinaryMatrix::zeros(m, n);
        for (s, &r) in rows.iter().enumerate() {
            h.set(r, s / col_w, true);
        }
        return Ok(h);
    }
    Err(CodeError::SamplingFailure(max_tries))
}

/// Resample (with derived seeds) until the matrix has full row rank.
pub fn sample_full_rank_parity_check(
    n: usize,
    col_w: usize,
    row_w: usize,
    seed: u64,
    max_tries: usize,
) -> Result<BinaryMatrix, CodeError> {
    for t in 0..max_tries {
        let h = sample_regular_parity_check(n, col_w, row_w, par::split_seed(seed, t as u64), max_tries)?;
        if h.rank() == h.rows() {
            return Ok(h);
        }
    }
    Err(CodeError::SamplingFailure(max_tries))
}

/// Hypergraph product `hx = [h1 (x) I_n2 | I_m1 (x) h2^T]`,
/// `hz = [I_n1 (x) h2 | h1^T (x) I_m2]`. Qubits `(j1, j2)` come first at
/// `j1 * n2 + j2`, then `(i1, i2)` at `n1 n2 + i1 m2 + i2`.
pub fn hypergraph_product(h1: &BinaryMatrix, h2: &BinaryMatrix) -> Result<CssCode, CodeError> {
    let (m1, n1, m2, n2) = (h1.rows(), h1.cols(), h2.rows(), h2.cols());
    let n = n1 * n2 + m1 * m2;
    let h1_rows: Vec<Vec<usize>> = (0..m1).map(|i| h1.row_support(i)).collect();
    let h1_cols: Vec<Vec<usize>> = (0..n1).map(|j| (0..m1).filter(|&i| h1.get(i, j)).collect()).collect();
    let h2_rows: Vec<Vec<usize>> = (0..m2).map(|i| h2.row_support(i)).collect();
    let h2_cols: Vec<Vec<usize>> = (0..n2).map(|j| (0..m2).filter(|&i| h2.get(i, j)).collect()).collect();
    let q1 = |j1: usize, j2: usize| (j1 * n2 + j2) as u32;
    let q2 = |i1: usize, i2: usize| (n1 * n2 + i1 * m2 + i2) as u32;
    let hx_rows = par::map_range(m1 * n2, |r| {
        let (i1, j2) = (r / n2, r % n2);
        let mut row: Vec<u32> = h1_rows[i1].iter().map(|&j1| q1(j1, j2)).collect();
        row.extend(h2_cols[j2].iter().map(|&i2| q2(i1, i2)));
        row
    });
    let hz_rows = par::map_range(n1 * m2, |r| {
        let (j1, i2) = (r / m2, r % m2);
        let mut row: Vec<u32> = h2_rows[i2].iter().map(|&j2| q1(j1, j2)).collect();
        row.extend(h1_cols[j1].iter().map(|&i1| q2(i1, i2)));
        row
    });
    CssCode::new(SparseBinMatrix::from_row_lists(n, hx_rows), SparseBinMatrix::from_row_lists(n, hz_rows))
}

/// Logical dimension of a hypergraph product from the classical ranks:
/// `k = k1 k2 + k1' k2'` with `k = n - rank`, `k' = m - rank`.
pub fn hgp_k(h1: &BinaryMatrix, h2: &BinaryMatrix) -> usize {
    let (r1, r2) = (h1.rank(), h2.rank());
    (h1.cols() - r1) * (h2.cols() - r2) + (h1.rows() - r1) * (h2.rows() - r2)
}

/// Parameters of a built hypergraph product, `k` from [`hgp_k`].
pub fn hgp_params(h1: &BinaryMatrix, h2: &BinaryMatrix, code: &CssCode) -> CodeParams {
    CodeParams { n: code.n(), k: hgp_k(h1, h2), delta_q: code.delta_q(), delta_g: code.delta_g(), d: None }
}

/// Size guard for [`distance_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 30;
pub const BRUTEFORCE_MAX_W: usize = 4;

/// Minimum weight of a logical operator up to `w_max`, by enumeration of
/// pure X and pure Z supports (sufficient for CSS codes).
pub fn distance_bruteforce(c: &CssCode, w_max: usize) -> Result<Option<usize>, CodeError> {
    let n = c.n();
    if n > BRUTEFORCE_MAX_N && w_max > BRUTEFORCE_MAX_W {
        return Err(CodeError::InstanceTooLarge(format!("n={n}, w_max={w_max}")));
    }
    // Z-type logicals commute with hx and lie outside rowspace(hz); X-type dually.
    let sides = [(c.hx(), c.hz().to_dense().row_echelon()), (c.hz(), c.hx().to_dense().row_echelon())];
    let col_syn: Vec<Vec<BitVec>> = sides
        .iter()
        .map(|(h, _)| {
            let cols = h.col_lists();
            cols.into_iter().map(|rs| BitVec::from_indices(h.rows(), rs.into_iter().map(|r| r as usize))).collect()
        })
        .collect();
    for w in 1..=w_max.min(n) {
        for (side, (h, stab)) in sides.iter().enumerate() {
            let mut idx: Vec<usize> = (0..w).collect();
            loop {
                let mut syn = BitVec::new(h.rows());
                for &q in &idx {
                    syn.xor_assign(&col_syn[side][q]);
                }
                if syn.is_zero() && !in_row_space(stab, &BitVec::from_indices(n, idx.iter().copied())) {
                    return Ok(Some(w));
                }
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
        }
    }
    Ok(None)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let w = idx.len();
    let mut i = w;
    while i > 0 {
        i -= 1;
        if idx[i] < n - w + i {
            idx[i] += 1;
            for j in i + 1..w {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
