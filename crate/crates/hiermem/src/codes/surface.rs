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

//! Rotated surface code on a `d x d` patch.
//!
//! Data qubit `(x, y)` is index `x * d + y`. The face with lower-left corner
//! `(x, y)`, `-1 <= x, y <= d - 1`, is X-type when `x + y` is even and Z-type
//! otherwise. Bulk faces are weight 4; boundary faces are weight 2, X-type
//! ones on the `y` boundaries and Z-type ones on the `x` boundaries.

use super::{CodeError, CssCode, SparseBinMatrix};

pub fn rotated_surface_code(d: usize) -> Result<CssCode, CodeError> {
    if d.is_multiple_of(2) {
        return Err(CodeError::EvenDistance(d));
    }
    if d < 3 {
        return Err(CodeError::InvalidParameters(format!("distance must be at least 3, got {d}")));
    }
    let di = d as i64;
    let mut xs: Vec<Vec<u32>> = Vec::new();
    let mut zs: Vec<Vec<u32>> = Vec::new();
    for x in -1..di {
        for y in -1..di {
            let is_x = (x + y).rem_euclid(2) == 0;
            let on_x_edge = x == -1 || x == di - 1;
            let on_y_edge = y == -1 || y == di - 1;
            if on_x_edge && on_y_edge {
                continue;
            }
            if (on_y_edge && !is_x) || (on_x_edge && is_x) {
                continue;
            }
            let support: Vec<u32> = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]
                .into_iter()
                .filter(|&(a, b)| (0..di).contains(&a) && (0..di).contains(&b))
                .map(|(a, b)| (a * di + b) as u32)
                .collect();
            if is_x {
                xs.push(support);
            } else {
                zs.push(support);
            }
        }
    }
    let coords = (0..d * d).map(|q| ((q / d) as i64, (q % d) as i64)).collect();
    let n = d * d;
    Ok(CssCode::new(SparseBinMatrix::from_row_lists(n, xs), SparseBinMatrix::from_row_lists(n, zs))?.with_coords(coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{code_params, distance_bruteforce};

    #[test]
    fn distance_three_layout() {
        let c = rotated_surface_code(3).unwrap();
        assert_eq!(c.n(), 9);
        assert_eq!(c.mx() + c.mz(), 8);
        assert_eq!((c.mx(), c.mz()), (4, 4));
        let p = code_params(&c);
        assert_eq!((p.n, p.k, p.delta_q, p.delta_g), (9, 1, 4, 4));
        assert_eq!(distance_bruteforce(&c, 3).unwrap(), Some(3));
        for r in 0..c.mx() {
            assert!([2, 4].contains(&c.hx().row(r).len()));
        }
    }

    #[test]
    fn distance_five_counts() {
        let c = rotated_surface_code(5).unwrap();
        assert_eq!(c.n() + c.mx() + c.mz(), 49);
        assert_eq!(code_params(&c).k, 1);
        assert_eq!(distance_bruteforce(&c, 4).unwrap(), None);
    }

    #[test]
    fn even_rejected() {
        assert_eq!(rotated_surface_code(4).unwrap_err(), CodeError::EvenDistance(4));
    }
}
