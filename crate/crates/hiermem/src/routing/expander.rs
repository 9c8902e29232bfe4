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

//! Heuristic routing on general connected graphs (used for expander blocks).
//!
//! `Greedy` applies maximal matchings of potential-decreasing swaps, where
//! the potential is the summed hop distance of every pebble to its target.
//! When no swap decreases it, one random non-increasing swap next to the
//! unsatisfied pebble closest to home breaks the tie. If the potential makes
//! no new progress for a while, the remainder is finished by `Tree`.
//!
//! `Tree` fixes leaves of a BFS spanning tree one by one, walking the right
//! pebble along the tree path, then compacts the swap sequence ASAP.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{strip_empty, Permutation, RoutingError, RoutingSchedule, Step};
use crate::graphs::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpanderStrategy {
    Greedy,
    Tree,
}

/// Greedy rounds without a new potential minimum before falling back.
fn stall_limit(n: usize) -> usize {
    4 * n + 16
}

/// Returns the steps and whether the greedy strategy fell back to the tree.
pub fn route_expander_steps(
    alpha: &Permutation,
    g: &Graph,
    strategy: ExpanderStrategy,
    seed: u64,
) -> Result<(Vec<Step>, bool), RoutingError> {
    alpha.expect_len(g.vertex_count())?;
    if !g.is_connected() {
        return Err(RoutingError::DisconnectedGraph);
    }
    if alpha.is_identity() {
        return Ok((Vec::new(), false));
    }
    let dest: Vec<usize> = alpha.as_slice().to_vec();
    let at: Vec<usize> = (0..g.vertex_count()).collect();
    match strategy {
        ExpanderStrategy::Tree => Ok((tree_route(g, &dest, at), false)),
        ExpanderStrategy::Greedy => greedy_route(g, &dest, at, seed),
    }
}

pub fn route_expander(
    alpha: &Permutation,
    g: &Graph,
    strategy: ExpanderStrategy,
    seed: u64,
) -> Result<RoutingSchedule, RoutingError> {
    let (steps, _) = route_expander_steps(alpha, g, strategy, seed)?;
    Ok(RoutingSchedule::new(Arc::new(g.clone()), steps))
}

fn all_pairs(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.vertex_count()).map(|s| g.bfs_distances(s).into_iter().map(|d| d as u32).collect()).collect()
}

/// `at[v]` is the pebble on `v`; pebble `p` wants `dest[p]`.
fn greedy_route(g: &Graph, dest: &[usize], mut at: Vec<usize>, seed: u64) -> Result<(Vec<Step>, bool), RoutingError> {
    let n = g.vertex_count();
    let dist = all_pairs(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cost = |v: usize, p: usize| dist[v][dest[p]] as i64;
    let delta = |at: &[usize], u: usize, v: usize| cost(v, at[u]) + cost(u, at[v]) - cost(u, at[u]) - cost(v, at[v]);
    let mut phi: i64 = (0..n).map(|v| cost(v, at[v])).sum();
    let mut best = phi;
    let mut since_best = 0usize;
    let mut steps: Vec<Step> = Vec::new();
    let mut used = vec![false; n];
    while phi > 0 {
        if since_best > stall_limit(n) {
            steps.extend(tree_route(g, dest, at));
            return Ok((strip_empty(steps), true));
        }
        let mut cands: Vec<(i64, usize, usize)> = g
            .edges()
            .iter()
            .filter_map(|&(u, v)| {
                let d = delta(&at, u, v);
                (d < 0).then_some((d, u, v))
            })
            .collect();
        let mut step = Vec::new();
        if cands.is_empty() {
            // Unsatisfied pebble nearest its destination, lowest vertex on ties.
            let u = (0..n)
                .filter(|&v| cost(v, at[v]) > 0)
                .min_by_key(|&v| (cost(v, at[v]), v))
                .expect("phi > 0");
            let options: Vec<usize> = g.neighbors(u).iter().copied().filter(|&w| delta(&at, u, w) <= 0).collect();
            let &w = options.choose(&mut rng).expect("a shortest-path neighbor never increases phi");
            step.push((u.min(w), u.max(w)));
        } else {
            cands.sort_unstable();
            used.iter_mut().for_each(|x| *x = false);
            for (_, u, v) in cands {
                if !used[u] && !used[v] {
                    used[u] = true;
                    used[v] = true;
                    step.push((u, v));
                }
            }
        }
        for &(u, v) in &step {
            phi += delta(&at, u, v);
            at.swap(u, v);
        }
        steps.push(step);
        if phi < best {
            best = phi;
            since_best = 0;
        } else {
            since_best += 1;
        }
    }
    Ok((steps, false))
}

fn tree_route(g: &Graph, dest: &[usize], mut at: Vec<usize>) -> Vec<Step> {
    let n = g.vertex_count();
    // BFS tree rooted at 0.
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut order = vec![0usize];
    parent[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &w in g.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                depth[w] = depth[u] + 1;
                order.push(w);
            }
        }
    }
    let mut pos = vec![0usize; n];
    for (v, &p) in at.iter().enumerate() {
        pos[p] = v;
    }
    let mut target_of = vec![0usize; n];
    for (p, &t) in dest.iter().enumerate() {
        target_of[t] = p;
    }
    let mut seq: Vec<(usize, usize)> = Vec::new();
    // Reverse BFS order always removes a leaf of the remaining subtree.
    for &t in order.iter().rev() {
        let p = target_of[t];
        let x = pos[p];
        if x == t {
            continue;
        }
        // Tree path x -> lca -> t.
        let (mut a, mut b) = (x, t);
        let mut up = vec![a];
        let mut down = vec![b];
        while a != b {
            if depth[a] >= depth[b] {
                a = parent[a];
                up.push(a);
            } else {
                b = parent[b];
                down.push(b);
            }
        }
        down.pop();
        up.extend(down.into_iter().rev());
        for w in up.windows(2) {
            let (u, v) = (w[0], w[1]);
            seq.push((u.min(v), u.max(v)));
            at.swap(u, v);
            pos[at[u]] = u;
            pos[at[v]] = v;
        }
    }
    compact_asap(n, &seq)
}

/// Layer a swap sequence: each swap goes one step after the last swap
/// touching either endpoint. Swaps on disjoint vertices commute.
pub(crate) fn compact_asap(n: usize, seq: &[(usize, usize)]) -> Vec<Step> {
    let mut next = vec![0usize; n];
    let mut steps: Vec<Step> = Vec::new();
    for &(u, v) in seq {
        let t = next[u].max(next[v]);
        if t == steps.len() {
            steps.push(Vec::new());
        }
        steps[t].push((u, v));
        next[u] = t + 1;
        next[v] = t + 1;
    }
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{make_path, sample_expander, DEFAULT_EXPANDER_TRIES};
    use crate::routing::verify_routing;

    #[test]
    fn trivial_cases() {
        let (g, _) = sample_expander(16, 4, 0.5, 2, DEFAULT_EXPANDER_TRIES).unwrap();
        for s in [ExpanderStrategy::Greedy, ExpanderStrategy::Tree] {
            assert_eq!(route_expander(&Permutation::identity(16), &g, s, 1).unwrap().depth(), 0);
            let (u, v) = g.edges()[0];
            let mut m: Vec<usize> = (0..16).collect();
            m.swap(u, v);
            let t = Permutation::new(m).unwrap();
            let r = route_expander(&t, &g, s, 1).unwrap();
            assert!(verify_routing(&t, &r).ok);
            assert_eq!(r.depth(), 1);
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            route_expander(&Permutation::identity(4), &g, ExpanderStrategy::Tree, 0).unwrap_err(),
            RoutingError::DisconnectedGraph
        );
    }

    #[test]
    fn tree_on_path_is_valid() {
        let g = make_path(9);
        let alpha = Permutation::new(vec![8, 7, 6, 5, 4, 3, 2, 1, 0]).unwrap();
        let r = route_expander(&alpha, &g, ExpanderStrategy::Tree, 0).unwrap();
        assert!(verify_routing(&alpha, &r).ok);
        assert!(r.depth() <= 27);
    }

    #[test]
    fn asap_respects_order() {
        let steps = compact_asap(4, &[(0, 1), (2, 3), (1, 2), (0, 1)]);
        assert_eq!(steps, vec![vec![(0, 1), (2, 3)], vec![(1, 2)], vec![(0, 1)]]);
    }
}
