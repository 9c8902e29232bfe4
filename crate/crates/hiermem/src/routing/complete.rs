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

//! Depth-2 routing on the complete graph: every cycle is a product of two
//! reflections, each a set of disjoint transpositions.

use std::sync::Arc;

use super::{strip_empty, Permutation, RoutingError, RoutingSchedule, Step};
use crate::graphs::make_complete;

pub fn route_complete_steps(alpha: &Permutation) -> Vec<Step> {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for c in alpha.cycles() {
        let k = c.len();
        // c[i] -> c[-i], then c[j] -> c[1 - j]; together c[i] -> c[i + 1].
        for i in 1..k {
            let j = k - i;
            if i < j {
                first.push((c[i], c[j]));
            }
        }
        for j in 0..k {
            let o = (k + 1 - j) % k;
            if j < o {
                second.push((c[j], c[o]));
            }
        }
    }
    strip_empty(vec![first, second])
}

pub fn route_complete(alpha: &Permutation, m: usize) -> Result<RoutingSchedule, RoutingError> {
    alpha.expect_len(m)?;
    Ok(RoutingSchedule::new(Arc::new(make_complete(m)), route_complete_steps(alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::verify_routing;

    #[test]
    fn small_cases() {
        assert_eq!(route_complete(&Permutation::identity(4), 4).unwrap().depth(), 0);
        let t = Permutation::new(vec![0, 3, 2, 1]).unwrap();
        let s = route_complete(&t, 4).unwrap();
        assert_eq!(s.depth(), 1);
        assert!(verify_routing(&t, &s).ok);
        let c3 = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let s = route_complete(&c3, 3).unwrap();
        assert_eq!(s.depth(), 2);
        assert!(verify_routing(&c3, &s).ok);
    }
}
