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

//! Permutation routing by parallel edge swaps (the pebble-exchange game).
//!
//! A [`Permutation`] sends the pebble starting on vertex `u` to `alpha(u)`.
//! A schedule is a list of steps, each a set of disjoint edge transpositions.

mod coloring;
mod complete;
mod expander;
mod lattice;
mod path;
mod product;

use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{Graph, GraphError};

pub use coloring::{edge_color_bipartite, edge_color_bipartite_with};
pub use complete::{route_complete, route_complete_steps};
pub use expander::{route_expander, route_expander_steps, ExpanderStrategy};
pub use lattice::{lattice_depth_bound, lattice_graph, route_lattice, LatticeRoute, RoutingMode};
pub use path::{path_rounds, route_path, route_path_steps, route_path_with_parity};
pub use product::{product_decomposition, route_product, route_product_steps, LineRouter, ProductDecomposition};

/// One parallel step: disjoint transpositions `(u, v)`.
pub type Step = Vec<(usize, usize)>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoutingError {
    #[error("size mismatch: permutation on {got} points, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("max degree {degree} exceeds {colors} colors")]
    DegreeExceedsColors { degree: usize, colors: usize },
    #[error("edge coloring failed at color {0}")]
    ColoringFailure(usize),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("invalid mode parameters: {0}")]
    InvalidModeParameters(String),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Bijection on `0..n` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = RoutingError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self, RoutingError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(RoutingError::NotAPermutation(format!("value {x} repeated or out of range")));
            }
        }
        Ok(Permutation(map))
    }

    /// From 1-based one-line notation, e.g. `[6, 7, 2, 5, 3, 4, 8, 1]`.
    pub fn from_one_based(map: &[usize]) -> Result<Self, RoutingError> {
        if map.contains(&0) {
            return Err(RoutingError::NotAPermutation("0 in 1-based notation".into()));
        }
        Permutation::new(map.iter().map(|&x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Permutation(v)
    }

    /// Uniform permutation from a ChaCha8 stream seeded with `seed`.
    pub fn seeded(n: usize, seed: u64) -> Self {
        Self::random(n, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, u: usize) -> usize {
        self.0[u]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation(self.0.iter().map(|&x| other.0[x]).collect())
    }

    /// Cycles of length at least 2, each listed as `c0 -> c1 -> ...`.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] || self.0[s] == s {
                seen[s] = true;
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    pub(crate) fn expect_len(&self, n: usize) -> Result<(), RoutingError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(RoutingError::SizeMismatch { expected: n, got: self.len() })
        }
    }
}

/// Pebble labels after running `steps` from the identity labeling:
/// `labels[v]` is the pebble that now sits on `v`.
pub fn apply_steps(n: usize, steps: &[Step]) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).collect();
    for step in steps {
        for &(u, v) in step {
            labels.swap(u, v);
        }
    }
    labels
}

/// Permutation realized by `steps` (pebble -> final vertex).
pub fn realized_permutation(n: usize, steps: &[Step]) -> Permutation {
    let labels = apply_steps(n, steps);
    let mut map = vec![0; n];
    for (v, &p) in labels.iter().enumerate() {
        map[p] = v;
    }
    Permutation(map)
}

/// Drop empty steps; they do not count toward depth.
pub fn strip_empty(steps: Vec<Step>) -> Vec<Step> {
    steps.into_iter().filter(|s| !s.is_empty()).collect()
}

/// Merge schedules acting on disjoint vertex sets, step by step.
pub(crate) fn merge_parallel(parts: Vec<Vec<Step>>) -> Vec<Step> {
    let depth = parts.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<Step> = vec![Vec::new(); depth];
    for part in parts {
        for (t, step) in part.into_iter().enumerate() {
            out[t].extend(step);
        }
    }
    out
}

/// Routing schedule bound to the graph it must be valid on.
#[derive(Clone, Debug)]
pub struct RoutingSchedule {
    pub graph: Arc<Graph>,
    pub steps: Vec<Step>,
}

impl RoutingSchedule {
    pub fn new(graph: Arc<Graph>, steps: Vec<Step>) -> Self {
        RoutingSchedule { graph, steps: strip_empty(steps) }
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn swap_count(&self) -> usize {
        self.steps.iter().map(Vec::len).sum()
    }

    /// `route <graph-hash> <depth>` followed by one line of `u-v` tokens per step.
    pub fn to_text(&self) -> String {
        let mut s = format!("route {} {}\n", self.graph.content_hash(), self.depth());
        for step in &self.steps {
            let toks: Vec<String> = step.iter().map(|(u, v)| format!("{u}-{v}")).collect();
            let _ = writeln!(s, "{}", toks.join(" "));
        }
        s
    }

    /// Parse schedule text; returns the declared graph hash and the steps.
    pub fn parse_text(text: &str) -> Result<(String, usize, Vec<Step>), RoutingError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| RoutingError::Parse("empty schedule".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "route" {
            return Err(RoutingError::Parse(format!("bad header {header:?}")));
        }
        let depth: usize = toks[2].parse().map_err(|_| RoutingError::Parse("bad depth".into()))?;
        let mut steps = Vec::new();
        for line in lines {
            let mut step = Vec::new();
            for tok in line.split_whitespace() {
                let (a, b) = tok.split_once('-').ok_or_else(|| RoutingError::Parse(format!("bad token {tok:?}")))?;
                let u = a.parse().map_err(|_| RoutingError::Parse(format!("bad token {tok:?}")))?;
                let v = b.parse().map_err(|_| RoutingError::Parse(format!("bad token {tok:?}")))?;
                step.push((u, v));
            }
            steps.push(step);
        }
        Ok((toks[1].to_string(), depth, steps))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RoutingViolation {
    NonEdge { step: usize, u: usize, v: usize },
    NonDisjoint { step: usize, vertex: usize },
    WrongPermutation { pebble: usize, expected: usize, got: usize },
    SizeMismatch { expected: usize, got: usize },
}

impl std::fmt::Display for RoutingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RoutingViolation::NonEdge { step, u, v } => write!(f, "non-edge: ({u}, {v}) in step {step}"),
            RoutingViolation::NonDisjoint { step, vertex } => {
                write!(f, "non-disjoint: vertex {vertex} used twice in step {step}")
            }
            RoutingViolation::WrongPermutation { pebble, expected, got } => {
                write!(f, "wrong permutation: pebble {pebble} ends at {got}, expected {expected}")
            }
            RoutingViolation::SizeMismatch { expected, got } => {
                write!(f, "size mismatch: graph has {expected} vertices, permutation {got}")
            }
        }
    }
}

/// Verdict of [`verify_routing`]; `violation` names the first failed condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoutingVerdict {
    pub ok: bool,
    pub depth: usize,
    pub violation: Option<RoutingViolation>,
}

pub fn verify_steps(alpha: &Permutation, graph: &Graph, steps: &[Step]) -> RoutingVerdict {
    let n = graph.vertex_count();
    let fail = |v: RoutingViolation| RoutingVerdict { ok: false, depth: steps.len(), violation: Some(v) };
    if alpha.len() != n {
        return fail(RoutingViolation::SizeMismatch { expected: n, got: alpha.len() });
    }
    let mut stamp = vec![usize::MAX; n];
    for (t, step) in steps.iter().enumerate() {
        for &(u, v) in step {
            if u == v || !graph.has_edge(u, v) {
                return fail(RoutingViolation::NonEdge { step: t, u, v });
            }
            for w in [u, v] {
                if stamp[w] == t {
                    return fail(RoutingViolation::NonDisjoint { step: t, vertex: w });
                }
                stamp[w] = t;
            }
        }
    }
    let labels = apply_steps(n, steps);
    for (v, &p) in labels.iter().enumerate() {
        if alpha.apply(p) != v {
            return fail(RoutingViolation::WrongPermutation { pebble: p, expected: alpha.apply(p), got: v });
        }
    }
    RoutingVerdict { ok: true, depth: steps.iter().filter(|s| !s.is_empty()).count(), violation: None }
}

/// Checks edges, per-step disjointness and the realized permutation.
pub fn verify_routing(alpha: &Permutation, schedule: &RoutingSchedule) -> RoutingVerdict {
    verify_steps(alpha, &schedule.graph, &schedule.steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::make_path;

    #[test]
    fn permutation_basics() {
        let a = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(a.as_slice(), &[1, 2, 0]);
        assert!(a.then(&a.inverse()).is_identity());
        assert_eq!(a.cycles(), vec![vec![0, 1, 2]]);
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn verifier_diagnostics() {
        let g = Arc::new(make_path(3));
        let alpha = Permutation::new(vec![1, 0, 2]).unwrap();
        let good = RoutingSchedule::new(g.clone(), vec![vec![(0, 1)]]);
        assert!(verify_routing(&alpha, &good).ok);
        let overlap = RoutingSchedule::new(g.clone(), vec![vec![(0, 1), (1, 2)]]);
        let v = verify_routing(&alpha, &overlap);
        assert!(matches!(v.violation, Some(RoutingViolation::NonDisjoint { .. })));
        assert!(v.violation.unwrap().to_string().starts_with("non-disjoint"));
        let beta = Permutation::new(vec![0, 2, 1]).unwrap();
        let v = verify_routing(&beta, &good);
        assert!(v.violation.unwrap().to_string().starts_with("wrong permutation"));
        let nonedge = RoutingSchedule::new(g, vec![vec![(0, 2)]]);
        assert!(matches!(verify_routing(&alpha, &nonedge).violation, Some(RoutingViolation::NonEdge { .. })));
    }

    #[test]
    fn schedule_text_round_trip() {
        let g = Arc::new(make_path(4));
        let s = RoutingSchedule::new(g.clone(), vec![vec![(0, 1), (2, 3)], vec![], vec![(1, 2)]]);
        assert_eq!(s.depth(), 2);
        let text = s.to_text();
        let (hash, depth, steps) = RoutingSchedule::parse_text(&text).unwrap();
        assert_eq!(hash, g.content_hash());
        assert_eq!(depth, 2);
        assert_eq!(steps, s.steps);
    }
}
