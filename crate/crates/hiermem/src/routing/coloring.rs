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

//! Proper edge coloring of bipartite multigraphs with `Delta` colors:
//! pad to a regular multigraph, then peel perfect matchings.

use super::RoutingError;

/// Color each edge `(l, r)` with a value in `0..colors` so that edges sharing
/// an endpoint differ. Parallel edges are allowed.
pub fn edge_color_bipartite(
    left: usize,
    right: usize,
    edges: &[(usize, usize)],
    colors: usize,
) -> Result<Vec<usize>, RoutingError> {
    edge_color_bipartite_with(left, right, edges, colors, |_, _| false)
}

/// As [`edge_color_bipartite`], but when building color `c` the edges with
/// `prefer(edge, c)` are matched greedily first.
pub fn edge_color_bipartite_with(
    left: usize,
    right: usize,
    edges: &[(usize, usize)],
    colors: usize,
    prefer: impl Fn(usize, usize) -> bool,
) -> Result<Vec<usize>, RoutingError> {
    if edges.is_empty() {
        return Ok(Vec::new());
    }
    let mut dl = vec![0usize; left];
    let mut dr = vec![0usize; right];
    for &(l, r) in edges {
        dl[l] += 1;
        dr[r] += 1;
    }
    let degree = dl.iter().chain(dr.iter()).copied().max().unwrap_or(0);
    if degree > colors {
        return Err(RoutingError::DegreeExceedsColors { degree, colors });
    }

    // Equalize sides and fill deficits with dummy edges.
    let s = left.max(right);
    dl.resize(s, 0);
    dr.resize(s, 0);
    let mut all: Vec<(usize, usize)> = edges.to_vec();
    let (mut i, mut j) = (0, 0);
    loop {
        while i < s && dl[i] == colors {
            i += 1;
        }
        while j < s && dr[j] == colors {
            j += 1;
        }
        if i == s || j == s {
            break;
        }
        all.push((i, j));
        dl[i] += 1;
        dr[j] += 1;
    }
    let real = edges.len();

    let mut alive = vec![true; all.len()];
    let mut color = vec![usize::MAX; all.len()];
    let mut match_l = vec![usize::MAX; s];
    let mut match_r = vec![usize::MAX; s];
    let mut seen = vec![0usize; s];
    let mut epoch = 0usize;
    for c in 0..colors {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); s];
        for (e, &(l, _)) in all.iter().enumerate() {
            if alive[e] {
                adj[l].push(e);
            }
        }
        match_l.iter_mut().for_each(|m| *m = usize::MAX);
        match_r.iter_mut().for_each(|m| *m = usize::MAX);
        for (e, &(l, r)) in all.iter().enumerate().take(real) {
            if alive[e] && match_l[l] == usize::MAX && match_r[r] == usize::MAX && prefer(e, c) {
                match_l[l] = e;
                match_r[r] = e;
            }
        }
        for u in 0..s {
            if match_l[u] != usize::MAX {
                continue;
            }
            epoch += 1;
            if !augment(u, &all, &adj, &mut match_l, &mut match_r, &mut seen, epoch) {
                return Err(RoutingError::ColoringFailure(c));
            }
        }
        for &e in &match_l {
            alive[e] = false;
            color[e] = c;
        }
    }
    color.truncate(real);
    Ok(color)
}

fn augment(
    u: usize,
    all: &[(usize, usize)],
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    seen: &mut [usize],
    epoch: usize,
) -> bool {
    for &e in &adj[u] {
        let r = all[e].1;
        if seen[r] == epoch {
            continue;
        }
        seen[r] = epoch;
        let prev = match_r[r];
        if prev == usize::MAX || augment(all[prev].0, all, adj, match_l, match_r, seen, epoch) {
            match_r[r] = e;
            match_l[u] = e;
            return true;
        }
    }
    false
}
