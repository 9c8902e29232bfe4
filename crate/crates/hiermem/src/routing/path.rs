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

//! Odd-even transposition routing on a path.

use std::sync::Arc;

use super::{strip_empty, Permutation, RoutingError, RoutingSchedule, Step};
use crate::graphs::make_path;

/// Raw odd-even rounds, trailing empty rounds trimmed. Round `r` compares
/// pairs `(i, i + 1)` with `i = start_parity + r (mod 2)` and swaps when the
/// left pebble's destination is larger. `L` rounds always suffice.
pub fn path_rounds(alpha: &Permutation, start_parity: usize) -> Vec<Step> {
    let l = alpha.len();
    let mut dest: Vec<usize> = alpha.as_slice().to_vec();
    let mut rounds: Vec<Step> = Vec::with_capacity(l);
    for r in 0..l {
        let mut step = Vec::new();
        let mut i = (start_parity + r) % 2;
        while i + 1 < l {
            if dest[i] > dest[i + 1] {
                dest.swap(i, i + 1);
                step.push((i, i + 1));
            }
            i += 2;
        }
        rounds.push(step);
    }
    while rounds.last().is_some_and(Vec::is_empty) {
        rounds.pop();
    }
    debug_assert!(dest.iter().enumerate().all(|(i, &d)| i == d));
    rounds
}

pub fn route_path_with_parity(alpha: &Permutation, start_parity: usize) -> Vec<Step> {
    strip_empty(path_rounds(alpha, start_parity))
}

/// Shallower of the two start parities (ties go to parity 0).
pub fn route_path_steps(alpha: &Permutation) -> Vec<Step> {
    let even = route_path_with_parity(alpha, 0);
    let odd = route_path_with_parity(alpha, 1);
    if odd.len() < even.len() {
        odd
    } else {
        even
    }
}

pub fn route_path(alpha: &Permutation, l: usize) -> Result<RoutingSchedule, RoutingError> {
    alpha.expect_len(l)?;
    Ok(RoutingSchedule::new(Arc::new(make_path(l)), route_path_steps(alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::verify_routing;

    #[test]
    fn figure_four_permutation() {
        let alpha = Permutation::from_one_based(&[6, 7, 2, 5, 3, 4, 8, 1]).unwrap();
        let s = route_path(&alpha, 8).unwrap();
        assert!(verify_routing(&alpha, &s).ok);
        assert!(s.depth() <= 7);
    }

    #[test]
    fn identity_and_reversal() {
        assert_eq!(route_path(&Permutation::identity(5), 5).unwrap().depth(), 0);
        let rev = Permutation::new(vec![2, 1, 0]).unwrap();
        assert_eq!(route_path(&rev, 3).unwrap().depth(), 3);
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(
            route_path(&Permutation::identity(3), 4),
            Err(RoutingError::SizeMismatch { expected: 4, got: 3 })
        ));
    }
}
