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

//! Text formats for check matrices: MacKay `alist` and plain PBM (`P1`).

use std::fmt::Write as _;

use super::{BinaryMatrix, CodeError, SparseBinMatrix};

/// `alist`: `n m`, max column/row weights, the weight lists, then 1-based
/// row indices per column and column indices per row, zero padded.
pub fn to_alist(h: &SparseBinMatrix) -> String {
    let cols = h.col_lists();
    let cw: Vec<usize> = cols.iter().map(Vec::len).collect();
    let rw: Vec<usize> = (0..h.rows()).map(|r| h.row(r).len()).collect();
    let max_c = cw.iter().copied().max().unwrap_or(0);
    let max_r = rw.iter().copied().max().unwrap_or(0);
    let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", h.cols(), h.rows());
    let _ = writeln!(s, "{max_c} {max_r}");
    let _ = writeln!(s, "{}", join(&mut cw.iter().map(|x| x.to_string())));
    let _ = writeln!(s, "{}", join(&mut rw.iter().map(|x| x.to_string())));
    for c in &cols {
        let mut v: Vec<String> = c.iter().map(|&r| (r + 1).to_string()).collect();
        v.resize(max_c, "0".into());
        let _ = writeln!(s, "{}", v.join(" "));
    }
    for r in 0..h.rows() {
        let mut v: Vec<String> = h.row(r).iter().map(|&c| (c + 1).to_string()).collect();
        v.resize(max_r, "0".into());
        let _ = writeln!(s, "{}", v.join(" "));
    }
    s
}

pub fn from_alist(text: &str) -> Result<SparseBinMatrix, CodeError> {
    let bad = |m: &str| CodeError::Parse(format!("alist: {m}"));
    let mut lines = text.lines();
    let mut nums = |what: &str| -> Result<Vec<usize>, CodeError> {
        let line = lines.next().ok_or_else(|| bad(&format!("missing {what}")))?;
        line.split_whitespace().map(|t| t.parse().map_err(|_| bad(&format!("bad number {t:?}")))).collect()
    };
    let dims = nums("dimensions")?;
    let [n, m] = dims[..] else { return Err(bad("dimension line")) };
    nums("max weights")?;
    nums("column weights")?;
    let rw = nums("row weights")?;
    if rw.len() != m {
        return Err(bad("row weight count"));
    }
    for _ in 0..n {
        nums("column list")?;
    }
    let mut rows = Vec::with_capacity(m);
    for &w in &rw {
        let entries = nums("row list")?;
        let row: Vec<u32> = entries.into_iter().filter(|&c| c > 0).map(|c| (c - 1) as u32).collect();
        if row.len() != w || row.iter().any(|&c| c as usize >= n) {
            return Err(bad("row list inconsistent with weights"));
        }
        rows.push(row);
    }
    Ok(SparseBinMatrix::from_row_lists(n, rows))
}

/// Plain PBM: `P1`, `cols rows`, then one line of space-separated bits per row.
pub fn to_pbm(h: &BinaryMatrix) -> String {
    let mut s = format!("P1\n{} {}\n", h.cols(), h.rows());
    for r in 0..h.rows() {
        let row: Vec<&str> = (0..h.cols()).map(|c| if h.get(r, c) { "1" } else { "0" }).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

pub fn from_pbm(text: &str) -> Result<BinaryMatrix, CodeError> {
    let bad = |m: &str| CodeError::Parse(format!("pbm: {m}"));
    let mut toks = text.split_whitespace();
    if toks.next() != Some("P1") {
        return Err(bad("missing P1 magic"));
    }
    let mut dim = || -> Result<usize, CodeError> { toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad dimensions")) };
    let cols = dim()?;
    let rows = dim()?;
    let mut h = BinaryMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            match toks.next() {
                Some("1") => h.set(r, c, true),
                Some("0") => {}
                _ => return Err(bad("bad bit")),
            }
        }
    }
    if toks.next().is_some() {
        return Err(bad("trailing data"));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BinaryMatrix {
        BinaryMatrix::from_rows(&[vec![1, 1, 0, 1], vec![0, 1, 1, 0], vec![0, 0, 0, 0]])
    }

    #[test]
    fn alist_round_trip() {
        let h = sample().to_sparse();
        let text = to_alist(&h);
        let back = from_alist(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(to_alist(&back), text);
    }

    #[test]
    fn pbm_round_trip() {
        let h = sample();
        let text = to_pbm(&h);
        assert!(text.starts_with("P1\n4 3\n1 1 0 1\n"));
        let back = from_pbm(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(to_pbm(&back), text);
        assert!(from_pbm("P2 1 1 0").is_err());
    }
}
