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

//! Routing on the `L x L` lattice.
//!
//! * `unit`: path x path on `nn2(L, 1)`.
//! * `dense`: `H x H` with `H = K_R x path(L/R)`, embedded per axis by
//!   `(block p, offset e) -> p * R + e`; valid on `nn2(L, R)`.
//! * `sparse`: as dense with a 4-regular expander in place of `K_R`; valid on
//!   the degree-12 sparse router graph.
//!
//! In `H` the cheap factor (`K_R` or the expander) is the one routed twice.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    route_complete_steps, route_expander_steps, route_path_steps, route_product_steps, ExpanderStrategy, LineRouter,
    Permutation, RoutingError, RoutingSchedule, Step,
};
use crate::graphs::{build_sparse_router_graph, make_nn2, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoutingMode {
    Unit,
    Dense,
    Sparse,
}

impl std::str::FromStr for RoutingMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(RoutingMode::Unit),
            "dense" => Ok(RoutingMode::Dense),
            "sparse" => Ok(RoutingMode::Sparse),
            _ => Err(format!("unknown routing mode {s:?}")),
        }
    }
}

fn check_params(l: usize, r: usize, mode: RoutingMode) -> Result<(), RoutingError> {
    if l == 0 {
        return Err(RoutingError::InvalidModeParameters("L must be positive".into()));
    }
    if mode != RoutingMode::Unit && (r == 0 || r % 2 == 1 || !l.is_multiple_of(r)) {
        return Err(RoutingError::InvalidModeParameters(format!("{mode:?} mode needs even R dividing L, got L={l}, R={r}")));
    }
    Ok(())
}

/// Graph a lattice schedule is validated against.
pub fn lattice_graph(l: usize, r: usize, mode: RoutingMode, seed: u64) -> Result<Graph, RoutingError> {
    check_params(l, r, mode)?;
    Ok(match mode {
        RoutingMode::Unit => make_nn2(l, 1),
        RoutingMode::Dense => make_nn2(l, r),
        RoutingMode::Sparse => build_sparse_router_graph(l, r, seed)?.graph,
    })
}

/// A lattice schedule plus the fixed routing bound it was built against.
#[derive(Clone, Debug)]
pub struct LatticeRoute {
    pub schedule: RoutingSchedule,
    /// `true` when sparse mode used `K_R` because `R < 6`.
    pub complete_fallback: bool,
    /// Number of block routings where greedy handed over to the tree router.
    pub greedy_fallbacks: usize,
}

/// Depth bound each mode guarantees; `None` for sparse (measured only).
pub fn lattice_depth_bound(l: usize, r: usize, mode: RoutingMode) -> Option<usize> {
    match mode {
        RoutingMode::Unit => Some(3 * l),
        RoutingMode::Dense => Some(3 * (l / r) + 12),
        RoutingMode::Sparse => None,
    }
}

pub fn route_lattice(
    alpha: &Permutation,
    l: usize,
    r: usize,
    mode: RoutingMode,
    seed: u64,
) -> Result<LatticeRoute, RoutingError> {
    check_params(l, r, mode)?;
    alpha.expect_len(l * l)?;
    let path = |p: &Permutation| Ok(route_path_steps(p));
    match mode {
        RoutingMode::Unit => {
            let steps = route_product_steps(alpha, l, l, &path, &path)?;
            Ok(LatticeRoute {
                schedule: RoutingSchedule::new(Arc::new(make_nn2(l, 1)), steps),
                complete_fallback: false,
                greedy_fallbacks: 0,
            })
        }
        RoutingMode::Dense => {
            let complete = |p: &Permutation| Ok(route_complete_steps(p));
            let steps = route_blocked(alpha, l, r, &complete, &path)?;
            Ok(LatticeRoute {
                schedule: RoutingSchedule::new(Arc::new(make_nn2(l, r)), steps),
                complete_fallback: false,
                greedy_fallbacks: 0,
            })
        }
        RoutingMode::Sparse => {
            let sg = build_sparse_router_graph(l, r, seed)?;
            let fallbacks = std::sync::atomic::AtomicUsize::new(0);
            let block = sg.block.clone();
            let steps = if sg.complete_fallback {
                let complete = |p: &Permutation| Ok(route_complete_steps(p));
                route_blocked(alpha, l, r, &complete, &path)?
            } else {
                let expander = |p: &Permutation| {
                    let (s, fell) = route_expander_steps(p, &block, ExpanderStrategy::Greedy, seed)?;
                    if fell {
                        fallbacks.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    }
                    Ok(s)
                };
                route_blocked(alpha, l, r, &expander, &path)?
            };
            Ok(LatticeRoute {
                schedule: RoutingSchedule::new(Arc::new(sg.graph), steps),
                complete_fallback: sg.complete_fallback,
                greedy_fallbacks: fallbacks.into_inner(),
            })
        }
    }
}

/// Route on `H x H`, `H = block x path(L/R)`, then map back to lattice indices.
fn route_blocked(
    alpha: &Permutation,
    l: usize,
    r: usize,
    block_router: &LineRouter,
    path_router: &LineRouter,
) -> Result<Vec<Step>, RoutingError> {
    let blocks = l / r;
    // Axis coordinate x = p * R + e  <->  H index e * blocks + p.
    let to_h: Vec<usize> = (0..l).map(|x| (x % r) * blocks + x / r).collect();
    let mut from_h = vec![0; l];
    for (x, &h) in to_h.iter().enumerate() {
        from_h[h] = x;
    }
    let phi = |v: usize| to_h[v / l] * l + to_h[v % l];
    let phi_inv = |w: usize| from_h[w / l] * l + from_h[w % l];
    let mut mapped = vec![0; l * l];
    for v in 0..l * l {
        mapped[phi(v)] = phi(alpha.apply(v));
    }
    let beta = Permutation::new(mapped)?;
    let h_router = |p: &Permutation| route_product_steps(p, r, blocks, block_router, path_router);
    let steps = route_product_steps(&beta, l, l, &h_router, &h_router)?;
    Ok(steps.into_iter().map(|s| s.into_iter().map(|(u, v)| (phi_inv(u), phi_inv(v))).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::verify_routing;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_all_modes() {
        for mode in [RoutingMode::Unit, RoutingMode::Dense, RoutingMode::Sparse] {
            let r = route_lattice(&Permutation::identity(144), 12, 6, mode, 1).unwrap();
            assert_eq!(r.schedule.depth(), 0);
        }
    }

    #[test]
    fn dense_random_within_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let a = Permutation::random(256, &mut rng);
            let r = route_lattice(&a, 16, 4, RoutingMode::Dense, 0).unwrap();
            assert!(verify_routing(&a, &r.schedule).ok);
            assert!(r.schedule.depth() <= 3 * 4 + 12);
        }
    }

    #[test]
    fn sparse_random_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = Permutation::random(144, &mut rng);
        let r = route_lattice(&a, 12, 6, RoutingMode::Sparse, 3).unwrap();
        assert!(verify_routing(&a, &r.schedule).ok);
        assert!(r.schedule.graph.max_degree() <= 12);
    }

    #[test]
    fn bad_parameters() {
        let a = Permutation::identity(144);
        assert!(matches!(route_lattice(&a, 12, 5, RoutingMode::Dense, 0), Err(RoutingError::InvalidModeParameters(_))));
        assert!(matches!(route_lattice(&a, 12, 8, RoutingMode::Sparse, 0), Err(RoutingError::InvalidModeParameters(_))));
    }
}
