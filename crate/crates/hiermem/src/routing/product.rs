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

//! Routing on Cartesian products `G1 x G2` as column, row, column phases.
//!
//! Vertex `(v1, v2)` has index `v1 * n2 + v2`. A column is `V1 x {v2}` and is
//! routed on `G1`; a row is `{v1} x V2` and is routed on `G2`. The middle row
//! of each pebble is its color in an `n1`-edge-coloring of the bipartite
//! multigraph "current column -> destination column".

use std::sync::Arc;

use super::{edge_color_bipartite_with, merge_parallel, Permutation, RoutingError, RoutingSchedule, Step};
use crate::graphs::{cartesian_product, Graph};
use crate::par;

/// The three phases of a product routing, as per-line permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub n1: usize,
    pub n2: usize,
    /// Indexed by column `v2`; permutation of `0..n1`.
    pub first_columns: Vec<Permutation>,
    /// Indexed by row `v1`; permutation of `0..n2`.
    pub rows: Vec<Permutation>,
    /// Indexed by column `v2`; permutation of `0..n1`.
    pub last_columns: Vec<Permutation>,
}

impl ProductDecomposition {
    pub fn is_identity(&self) -> bool {
        self.first_columns.iter().chain(&self.rows).chain(&self.last_columns).all(Permutation::is_identity)
    }
}

pub fn product_decomposition(alpha: &Permutation, n1: usize, n2: usize) -> Result<ProductDecomposition, RoutingError> {
    alpha.expect_len(n1 * n2)?;
    if alpha.is_identity() {
        return Ok(ProductDecomposition {
            n1,
            n2,
            first_columns: vec![Permutation::identity(n1); n2],
            rows: vec![Permutation::identity(n2); n1],
            last_columns: vec![Permutation::identity(n1); n2],
        });
    }
    // One edge per pebble v = (a, b): b -> destination column.
    let edges: Vec<(usize, usize)> = (0..n1 * n2).map(|v| (v % n2, alpha.apply(v) % n2)).collect();
    // Prefer keeping a pebble in its own row.
    let color = edge_color_bipartite_with(n2, n2, &edges, n1, |e, c| e / n2 == c)?;

    let mut first = vec![vec![0; n1]; n2];
    let mut rows = vec![vec![0; n2]; n1];
    let mut last = vec![vec![0; n1]; n2];
    for (v, &k) in color.iter().enumerate() {
        let (a, b) = (v / n2, v % n2);
        let (a2, b2) = (alpha.apply(v) / n2, alpha.apply(v) % n2);
        first[b][a] = k;
        rows[k][b] = b2;
        last[b2][k] = a2;
    }
    let to_perm = |v: Vec<Vec<usize>>| -> Result<Vec<Permutation>, RoutingError> {
        v.into_iter()
            .map(|m| Permutation::new(m).map_err(|_| RoutingError::ColoringFailure(usize::MAX)))
            .collect()
    };
    Ok(ProductDecomposition { n1, n2, first_columns: to_perm(first)?, rows: to_perm(rows)?, last_columns: to_perm(last)? })
}

/// Routes a line permutation; returns steps in line-local indices.
pub type LineRouter<'a> = dyn Fn(&Permutation) -> Result<Vec<Step>, RoutingError> + Sync + Send + 'a;

fn route_lines(
    perms: &[Permutation],
    router: &LineRouter,
    to_global: impl Fn(usize, usize) -> usize + Sync + Send,
) -> Result<Vec<Step>, RoutingError> {
    let parts = par::map_range(perms.len(), |line| -> Result<Vec<Step>, RoutingError> {
        let steps = router(&perms[line])?;
        Ok(steps
            .into_iter()
            .map(|s| s.into_iter().map(|(u, v)| (to_global(line, u), to_global(line, v))).collect())
            .collect())
    });
    Ok(merge_parallel(parts.into_iter().collect::<Result<Vec<_>, _>>()?))
}

/// Steps of a product routing, in product indices.
pub fn route_product_steps(
    alpha: &Permutation,
    n1: usize,
    n2: usize,
    router1: &LineRouter,
    router2: &LineRouter,
) -> Result<Vec<Step>, RoutingError> {
    let dec = product_decomposition(alpha, n1, n2)?;
    if alpha.is_identity() {
        return Ok(Vec::new());
    }
    let col = |b: usize, a: usize| a * n2 + b;
    let row = |a: usize, b: usize| a * n2 + b;
    let mut steps = route_lines(&dec.first_columns, router1, col)?;
    steps.extend(route_lines(&dec.rows, router2, row)?);
    steps.extend(route_lines(&dec.last_columns, router1, col)?);
    Ok(super::strip_empty(steps))
}

pub fn route_product(
    alpha: &Permutation,
    g1: &Graph,
    g2: &Graph,
    router1: &LineRouter,
    router2: &LineRouter,
) -> Result<RoutingSchedule, RoutingError> {
    let steps = route_product_steps(alpha, g1.vertex_count(), g2.vertex_count(), router1, router2)?;
    Ok(RoutingSchedule::new(Arc::new(cartesian_product(g1, g2)), steps))
}
