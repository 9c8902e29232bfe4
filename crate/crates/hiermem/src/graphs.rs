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

//! Graph families used as routing substrates: paths, range-R lattices,
//! complete graphs, random regular expanders, Cartesian products, and the
//! degree-12 sparse spanning subgraph of the range-R square lattice.
//!
//! Vertices are 0-indexed. Lattice vertices are row-major: `(a, b)` on an
//! `L x L` grid is `a * L + b` with coordinate `(a + 1, b + 1)`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("coordinates invalid: {0}")]
    BadCoords(String),
    #[error("graph is not regular")]
    NonRegular,
    #[error("expander certification failed after {tries} tries")]
    CertificationFailure { tries: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    coords: Option<Vec<(i64, i64)>>,
}

impl Graph {
    /// Build from an edge list; pairs are normalized to `u < v`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &es {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { adj, edges: es, coords: None })
    }

    pub fn with_coords(mut self, coords: Vec<(i64, i64)>) -> Result<Self, GraphError> {
        if coords.len() != self.vertex_count() {
            return Err(GraphError::BadCoords(format!(
                "{} coordinates for {} vertices",
                coords.len(),
                self.vertex_count()
            )));
        }
        let mut sorted = coords.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::BadCoords("duplicate coordinate".into()));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn coords(&self) -> Option<&[(i64, i64)]> {
        self.coords.as_deref()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first()?.len();
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        n == 0 || self.bfs_distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Hop distances from `src`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut q = VecDeque::new();
        dist[src] = 0;
        q.push_back(src);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    /// Every edge of `self` is an edge of `other` on the same vertex set.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertex_count() == other.vertex_count() && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// Edge-list text: `graph <n>`, one sorted `u v` per line, then an
    /// optional `coords` section with `v x y` lines.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("graph {}\n", self.vertex_count());
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        if let Some(c) = &self.coords {
            s.push_str("coords\n");
            for (v, (x, y)) in c.iter().enumerate() {
                let _ = writeln!(s, "{v} {x} {y}");
            }
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| GraphError::Parse("empty input".into()))?;
        let n: usize = header
            .strip_prefix("graph ")
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header {header:?}")))?;
        let mut edges = Vec::new();
        let mut coords: Option<Vec<(i64, i64)>> = None;
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            if line == "coords" {
                coords = Some(vec![(0, 0); n]);
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || GraphError::Parse(format!("bad line {line:?}"));
            match (&mut coords, toks.len()) {
                (None, 2) => {
                    let u = toks[0].parse().map_err(|_| bad())?;
                    let v = toks[1].parse().map_err(|_| bad())?;
                    edges.push((u, v));
                }
                (Some(c), 3) => {
                    let v: usize = toks[0].parse().map_err(|_| bad())?;
                    let x = toks[1].parse().map_err(|_| bad())?;
                    let y = toks[2].parse().map_err(|_| bad())?;
                    *c.get_mut(v).ok_or(GraphError::VertexOutOfRange(v))? = (x, y);
                }
                _ => return Err(bad()),
            }
        }
        let g = Graph::from_edges(n, edges)?;
        match coords {
            Some(c) => g.with_coords(c),
            None => Ok(g),
        }
    }

    /// Short content hash of the edge-list serialization.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_edge_list().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

pub fn make_path(l: usize) -> Graph {
    make_nn1(l, 1)
}

/// Vertices `0..l`, edge iff `0 < |u - v| <= r`.
pub fn make_nn1(l: usize, r: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..l {
        for v in u + 1..l.min(u + r + 1) {
            edges.push((u, v));
        }
    }
    let coords = (0..l).map(|i| (i as i64 + 1, 1)).collect();
    Graph::from_edges(l, edges).and_then(|g| g.with_coords(coords)).expect("valid nn1")
}

/// `[L] x [L]` with an edge iff Euclidean distance is at most `r`.
pub fn make_nn2(l: usize, r: usize) -> Graph {
    let r = r as i64;
    let li = l as i64;
    let mut edges = Vec::new();
    for a in 0..li {
        for b in 0..li {
            for da in 0..=r {
                for db in -r..=r {
                    if (da == 0 && db <= 0) || da * da + db * db > r * r {
                        continue;
                    }
                    let (a2, b2) = (a + da, b + db);
                    if a2 < li && (0..li).contains(&b2) {
                        edges.push(((a * li + b) as usize, (a2 * li + b2) as usize));
                    }
                }
            }
        }
    }
    let coords = (0..l * l).map(|v| ((v / l) as i64 + 1, (v % l) as i64 + 1)).collect();
    Graph::from_edges(l * l, edges).and_then(|g| g.with_coords(coords)).expect("valid nn2")
}

pub fn make_complete(m: usize) -> Graph {
    make_nn1(m, m.max(1))
}

/// Cartesian product with vertex `(v1, v2)` at index `v1 * |V2| + v2`.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Graph {
    let n2 = g2.vertex_count();
    let mut edges = Vec::with_capacity(g1.edge_count() * n2 + g2.edge_count() * g1.vertex_count());
    for v1 in 0..g1.vertex_count() {
        for &(u2, w2) in g2.edges() {
            edges.push((v1 * n2 + u2, v1 * n2 + w2));
        }
    }
    for &(u1, w1) in g1.edges() {
        for v2 in 0..n2 {
            edges.push((u1 * n2 + v2, w1 * n2 + v2));
        }
    }
    Graph::from_edges(g1.vertex_count() * n2, edges).expect("product of simple graphs is simple")
}

/// Spectral certificate of an `(m, d, lambda)` expander.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCertificate {
    pub degree: usize,
    pub lambda: f64,
    pub epsilon: f64,
}

impl ExpanderCertificate {
    /// Ramanujan-type threshold `2 sqrt(d - 1) + epsilon`.
    pub fn threshold(&self) -> f64 {
        2.0 * ((self.degree as f64) - 1.0).sqrt() + self.epsilon
    }

    pub fn holds(&self) -> bool {
        self.lambda < self.degree as f64 && self.lambda <= self.threshold()
    }
}

/// Above this size `spectral_lambda` switches to Lanczos.
pub const DENSE_EIGEN_LIMIT: usize = 4096;

/// Largest absolute non-principal adjacency eigenvalue of a regular graph.
pub fn spectral_lambda(g: &Graph) -> Result<f64, GraphError> {
    g.regular_degree().ok_or(GraphError::NonRegular)?;
    if g.vertex_count() <= DENSE_EIGEN_LIMIT {
        Ok(spectral_lambda_dense(g))
    } else {
        Ok(spectral_lambda_lanczos(g, 1e-10, g.vertex_count().min(3000)))
    }
}

fn spectral_lambda_dense(g: &Graph) -> f64 {
    let n = g.vertex_count();
    if n <= 1 {
        return 0.0;
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev[1..].iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Lanczos with full reorthogonalization on the complement of the all-ones
/// vector (the principal eigenvector of a regular graph). Stops when the
/// extreme Ritz pairs have residual below `tol` or after `max_iter` steps.
pub fn spectral_lambda_lanczos(g: &Graph, tol: f64, max_iter: usize) -> f64 {
    let n = g.vertex_count();
    if n <= 1 {
        return 0.0;
    }
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let deflate = |v: &mut DVector<f64>| {
        let s = v.sum() * inv_sqrt_n;
        v.add_scalar_mut(-s * inv_sqrt_n);
    };
    let apply = |x: &DVector<f64>| {
        let mut y = DVector::zeros(n);
        for u in 0..n {
            y[u] = g.neighbors(u).iter().map(|&w| x[w]).sum();
        }
        y
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x001a_9c2b);
    let mut q = DVector::from_fn(n, |_, _| rand::Rng::gen_range(&mut rng, -1.0..1.0));
    deflate(&mut q);
    q /= q.norm();
    let mut basis: Vec<DVector<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let steps = max_iter.min(n - 1).max(1);
    let mut estimate = 0.0;
    for k in 0..steps {
        let mut w = apply(&basis[k]);
        deflate(&mut w);
        let a = basis[k].dot(&w);
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let bnorm = w.norm();
        let m = alpha.len();
        if !m.is_multiple_of(10) && k + 1 < steps && bnorm >= 1e-12 {
            beta.push(bnorm);
            basis.push(w / bnorm);
            continue;
        }
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (mut best, mut best_res) = (0.0f64, 0.0f64);
        for (j, &theta) in eig.eigenvalues.iter().enumerate() {
            if theta.abs() >= best {
                best = theta.abs();
                best_res = (bnorm * eig.eigenvectors[(m - 1, j)]).abs();
            }
        }
        estimate = best;
        if best_res < tol || bnorm < 1e-12 {
            break;
        }
        beta.push(bnorm);
        basis.push(w / bnorm);
    }
    estimate
}

/// Random simple `d`-regular graph on `m` vertices from the pairing model,
/// rejecting loops and multi-edges, resampled until `lambda <= 2 sqrt(d-1) + eps`.
pub fn sample_expander(
    m: usize,
    d: usize,
    epsilon: f64,
    seed: u64,
    max_tries: usize,
) -> Result<(Graph, ExpanderCertificate), GraphError> {
    if m % 2 == 1 && d % 2 == 1 {
        return Err(GraphError::InvalidParameters(format!("m*d must be even (m={m}, d={d})")));
    }
    if m % 2 == 1 {
        return Err(GraphError::InvalidParameters(format!("m must be even, got {m}")));
    }
    if d == 0 || m <= d {
        return Err(GraphError::InvalidParameters(format!("need 0 < d < m, got m={m}, d={d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..m * d).map(|i| i / d).collect();
    for _ in 0..max_tries {
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = points.chunks(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let g = Graph::from_edges(m, edges).expect("checked simple");
        if !g.is_connected() {
            continue;
        }
        let cert = ExpanderCertificate { degree: d, lambda: spectral_lambda(&g)?, epsilon };
        if cert.holds() {
            return Ok((g, cert));
        }
    }
    Err(GraphError::CertificationFailure { tries: max_tries })
}

/// Default tolerance for degree-4 expanders.
pub const DEFAULT_EPSILON: f64 = 0.5;
pub const DEFAULT_EXPANDER_TRIES: usize = 200_000;

/// Sparse spanning subgraph of `nn2(L, R)` used by the sparse lattice router.
#[derive(Clone, Debug)]
pub struct SparseRouterGraph {
    pub graph: Graph,
    /// Graph placed on each length-`R` block of an axis.
    pub block: Graph,
    pub certificate: Option<ExpanderCertificate>,
    /// `true` when `R < 6` forced `K_R` in place of a 4-regular expander.
    pub complete_fallback: bool,
}

/// Axis position of block vertex `e` in block `p`.
pub fn axis_embed(p: usize, e: usize, r: usize) -> usize {
    p * r + e
}

/// Block graph for one axis: a certified 4-regular expander on `R` vertices,
/// or `K_R` when `R < 6`.
pub fn sparse_block_graph(r: usize, seed: u64) -> Result<(Graph, Option<ExpanderCertificate>, bool), GraphError> {
    if r < 6 {
        return Ok((make_complete(r), None, true));
    }
    let (g, c) = sample_expander(r, 4, DEFAULT_EPSILON, seed, DEFAULT_EXPANDER_TRIES)?;
    Ok((g, Some(c), false))
}

/// Embedding of `(E_R x path(L/R)) x (E_R x path(L/R))` into `[L] x [L]`.
pub fn build_sparse_router_graph(l: usize, r: usize, seed: u64) -> Result<SparseRouterGraph, GraphError> {
    if r == 0 || r % 2 == 1 || !l.is_multiple_of(r) {
        return Err(GraphError::InvalidParameters(format!("need even R dividing L, got L={l}, R={r}")));
    }
    let (block, certificate, complete_fallback) = sparse_block_graph(r, seed)?;
    let blocks = l / r;
    // Edges of one axis factor, in axis coordinates.
    let mut axis_edges = Vec::new();
    for p in 0..blocks {
        for &(e1, e2) in block.edges() {
            axis_edges.push((axis_embed(p, e1, r), axis_embed(p, e2, r)));
        }
        if p + 1 < blocks {
            for e in 0..r {
                axis_edges.push((axis_embed(p, e, r), axis_embed(p + 1, e, r)));
            }
        }
    }
    let mut edges = Vec::with_capacity(2 * l * axis_edges.len());
    for fixed in 0..l {
        for &(x, y) in &axis_edges {
            edges.push((x * l + fixed, y * l + fixed));
            edges.push((fixed * l + x, fixed * l + y));
        }
    }
    let coords = (0..l * l).map(|v| ((v / l) as i64 + 1, (v % l) as i64 + 1)).collect();
    let graph = Graph::from_edges(l * l, edges)?.with_coords(coords)?;
    Ok(SparseRouterGraph { graph, block, certificate, complete_fallback })
}

/// Squared Euclidean length of an edge of a graph with coordinates.
pub fn edge_length_sq(g: &Graph, u: usize, v: usize) -> Option<i64> {
    let c = g.coords()?;
    let (dx, dy) = (c[u].0 - c[v].0, c[u].1 - c[v].1);
    Some(dx * dx + dy * dy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_shapes() {
        assert_eq!(make_path(1).edge_count(), 0);
        let p8 = make_path(8);
        assert_eq!((p8.vertex_count(), p8.edge_count()), (8, 7));
        let p4 = make_path(4);
        let degs: Vec<usize> = (0..4).map(|v| p4.degree(v)).collect();
        assert_eq!(degs, vec![1, 2, 2, 1]);
        assert_eq!(p4.coords().unwrap()[2], (3, 1));
    }

    #[test]
    fn nn1_cases() {
        assert_eq!(make_nn1(5, 1), make_path(5));
        assert_eq!(make_nn1(5, 4).edges(), make_complete(5).edges());
        assert_eq!(make_nn1(6, 2).edge_count(), 9);
    }

    #[test]
    fn nn2_cases() {
        let c4 = make_nn2(2, 1);
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(c4.regular_degree(), Some(2));
        assert_eq!(make_nn2(3, 1).edge_count(), 12);
        let g = make_nn2(3, 2);
        assert!(g.has_edge(0, 4));
        // 12 axis edges, 8 diagonals, 6 distance-2 straight pairs
        assert_eq!(g.edge_count(), 12 + 8 + 6);
    }

    #[test]
    fn complete_counts() {
        assert_eq!(make_complete(1).edge_count(), 0);
        assert_eq!(make_complete(4).edge_count(), 6);
        assert_eq!(make_complete(10).edge_count(), 45);
    }

    #[test]
    fn product_cases() {
        let k2 = make_complete(2);
        let sq = cartesian_product(&k2, &k2);
        assert_eq!(sq.edge_count(), 4);
        assert_eq!(sq.regular_degree(), Some(2));
        assert_eq!(cartesian_product(&make_path(3), &make_path(2)).edge_count(), 7);
        let grid = cartesian_product(&make_path(5), &make_path(5));
        assert_eq!(grid.edges(), make_nn2(5, 1).edges());
    }

    #[test]
    fn lambda_closed_forms() {
        assert!((spectral_lambda(&make_complete(4)).unwrap() - 1.0).abs() < 1e-8);
        assert!((spectral_lambda(&make_nn2(2, 1)).unwrap() - 2.0).abs() < 1e-8);
        assert!((spectral_lambda(&make_path(2)).unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(spectral_lambda(&make_path(3)), Err(GraphError::NonRegular));
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let (g, _) = sample_expander(400, 4, 0.5, 3, DEFAULT_EXPANDER_TRIES).unwrap();
        let dense = spectral_lambda_dense(&g);
        let lz = spectral_lambda_lanczos(&g, 1e-10, 399);
        assert!((dense - lz).abs() < 1e-6, "dense {dense} lanczos {lz}");
    }

    #[test]
    fn expander_small_cases() {
        let (g, c) = sample_expander(32, 4, 0.5, 1, DEFAULT_EXPANDER_TRIES).unwrap();
        assert_eq!(g.regular_degree(), Some(4));
        assert!(c.lambda <= 2.0 * 3f64.sqrt() + 0.5);
        let (g6, c6) = sample_expander(6, 4, 0.5, 1, DEFAULT_EXPANDER_TRIES).unwrap();
        // the only simple 4-regular graph on 6 vertices is K_{2,2,2}
        assert_eq!(g6.edge_count(), 12);
        assert!((c6.lambda - 2.0).abs() < 1e-8);
        assert!(matches!(sample_expander(7, 4, 0.5, 1, 10), Err(GraphError::InvalidParameters(_))));
    }

    #[test]
    fn sparse_router_graph_checks() {
        let s = build_sparse_router_graph(12, 6, 7).unwrap();
        assert!(s.graph.max_degree() <= 12);
        assert!(s.graph.edges().iter().all(|&(u, v)| edge_length_sq(&s.graph, u, v).unwrap() <= 36));
        assert!(s.graph.is_connected());
        let single = build_sparse_router_graph(6, 6, 1).unwrap();
        assert!(single.graph.max_degree() <= 8);
        assert!(matches!(build_sparse_router_graph(12, 5, 1), Err(GraphError::InvalidParameters(_))));
        let small = build_sparse_router_graph(8, 4, 1).unwrap();
        assert!(small.complete_fallback);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = make_nn2(3, 2);
        let text = g.to_edge_list();
        let back = Graph::from_edge_list(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_edge_list(), text);
        assert_eq!(g.content_hash().len(), 16);
    }
}
