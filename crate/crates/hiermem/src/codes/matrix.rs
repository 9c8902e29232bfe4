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

//! Dense and row-sparse matrices over GF(2).

use crate::bits::BitVec;

/// Dense GF(2) matrix; each row is packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BinaryMatrix { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// From rows of 0/1 entries; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &x) in row.iter().enumerate() {
                if x & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.bits[r * self.stride + c / 64];
        let m = 1u64 << (c % 64);
        if v {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in 0..self.rows {
            for c in self.row_support(r) {
                w[c] += 1;
            }
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &BinaryMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row_support(r) {
                let (src, dst) = (k * other.stride, r * out.stride);
                for w in 0..out.stride {
                    out.bits[dst + w] ^= other.bits[src + w];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len());
        let mut out = BitVec::new(self.rows);
        for r in 0..self.rows {
            let par = self.row_words(r).iter().zip(v.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
            out.set(r, par % 2 == 1);
        }
        out
    }

    pub fn kron(&self, other: &BinaryMatrix) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in self.row_support(r1) {
                for r2 in 0..other.rows {
                    for c2 in other.row_support(r2) {
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, true);
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &BinaryMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                out.set(r, c, true);
            }
            for c in other.row_support(r) {
                out.set(r, self.cols + c, true);
            }
        }
        out
    }

    pub fn vstack(&self, other: &BinaryMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut out = Self::zeros(self.rows + other.rows, self.cols);
        out.bits[..self.bits.len()].copy_from_slice(&self.bits);
        out.bits[self.bits.len()..].copy_from_slice(&other.bits);
        out
    }

    /// Rank over GF(2) by Gaussian elimination on a private copy.
    pub fn rank(&self) -> usize {
        self.row_echelon().len()
    }

    /// Reduced echelon basis of the row space as `(pivot column, row)` pairs.
    pub fn row_echelon(&self) -> Vec<(usize, BitVec)> {
        let mut m = self.bits.clone();
        let s = self.stride;
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..self.cols {
            if top == self.rows {
                break;
            }
            let (w, b) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (top..self.rows).find(|&r| m[r * s + w] & b != 0) else {
                continue;
            };
            if p != top {
                for k in 0..s {
                    m.swap(p * s + k, top * s + k);
                }
            }
            for r in 0..self.rows {
                if r != top && m[r * s + w] & b != 0 {
                    for k in 0..s {
                        m[r * s + k] ^= m[top * s + k];
                    }
                }
            }
            pivots.push(c);
            top += 1;
        }
        pivots
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let mut v = BitVec::new(self.cols);
                v.words_mut().copy_from_slice(&m[i * s..(i + 1) * s]);
                (c, v)
            })
            .collect()
    }

    pub fn to_sparse(&self) -> SparseBinMatrix {
        SparseBinMatrix::from_row_lists(
            self.cols,
            (0..self.rows).map(|r| self.row_support(r).into_iter().map(|c| c as u32).collect()).collect(),
        )
    }
}

/// GF(2) rank.
pub fn rank_f2(m: &BinaryMatrix) -> usize {
    m.rank()
}

/// Reduce `v` against an echelon basis; returns `true` if `v` is in the span.
pub fn in_row_space(basis: &[(usize, BitVec)], v: &BitVec) -> bool {
    let mut x = v.clone();
    for (c, row) in basis {
        if x.get(*c) {
            x.xor_assign(row);
        }
    }
    x.is_zero()
}

/// Row-sparse GF(2) matrix: sorted column indices per row.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparseBinMatrix {
    cols: usize,
    rows: Vec<Vec<u32>>,
}

impl SparseBinMatrix {
    pub fn from_row_lists(cols: usize, mut rows: Vec<Vec<u32>>) -> Self {
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
            assert!(r.last().is_none_or(|&c| (c as usize) < cols), "column out of range");
        }
        SparseBinMatrix { cols, rows }
    }

    pub fn empty(cols: usize) -> Self {
        SparseBinMatrix { cols, rows: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.rows[r]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_row_weight(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in &self.rows {
            for &c in r {
                w[c as usize] += 1;
            }
        }
        w
    }

    /// Column -> rows containing it.
    pub fn col_lists(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            for &c in r {
                out[c as usize].push(i as u32);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        SparseBinMatrix { cols: self.rows.len(), rows: self.col_lists() }
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len());
        let mut out = BitVec::new(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.iter().filter(|&&c| v.get(c as usize)).count() % 2 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn to_dense(&self) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for &c in r {
                m.set(i, c as usize, true);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_f2(&BinaryMatrix::identity(4)), 4);
        assert_eq!(rank_f2(&BinaryMatrix::zeros(3, 5)), 0);
        let m = BinaryMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(rank_f2(&m), 2);
    }

    #[test]
    fn wide_rank() {
        // rows e_i + e_{i+1} over 130 columns: rank 129
        let mut m = BinaryMatrix::zeros(129, 130);
        for i in 0..129 {
            m.set(i, i, true);
            m.set(i, i + 1, true);
        }
        assert_eq!(m.rank(), 129);
        assert_eq!(m.vstack(&m).rank(), 129);
    }

    #[test]
    fn algebra() {
        let a = BinaryMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let i2 = BinaryMatrix::identity(2);
        assert_eq!(i2.mul(&a), a);
        assert_eq!(a.transpose().transpose(), a);
        let k = a.kron(&i2);
        assert_eq!((k.rows(), k.cols()), (4, 6));
        assert_eq!(k.rank(), 4);
        assert_eq!(a.hstack(&i2).cols(), 5);
        assert_eq!(a.to_sparse().to_dense(), a);
        let v = BitVec::from_indices(3, [0, 2]);
        assert_eq!(a.mul_vec(&v), a.to_sparse().mul_vec(&v));
        assert_eq!(a.col_weights(), vec![1, 1, 2]);
    }

    #[test]
    fn row_space_membership() {
        let a = BinaryMatrix::from_rows(&[vec![1, 1, 0, 0], vec![0, 1, 1, 0]]);
        let basis = a.row_echelon();
        assert!(in_row_space(&basis, &BitVec::from_indices(4, [0, 2])));
        assert!(!in_row_space(&basis, &BitVec::from_indices(4, [3])));
    }
}
