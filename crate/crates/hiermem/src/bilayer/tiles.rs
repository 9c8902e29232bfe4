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

//! Site-level simulation of tile permutations on the bilayer.
//!
//! Sites are `(layer, u, v)` with layer 0 at the bottom. Data qubit
//! `(i, j)` of the tile in grid slot `(a, b)` rests at
//! `origin(a, b) + (i + j, j - i)` with `origin(a, b) = a (d, -d) + b (d, d)`,
//! so data live on sites with `u + v` even and each tile also owns the
//! sites one step to the right of its data. A layer is shifted by swapping
//! every data site with its neighbour in the shift direction; since all
//! data of a layer share a parity, the neighbour never holds data.
//!
//! Permutations are routed by splitting them into a layer exchange, an
//! in-layer grid permutation and a second layer exchange. In between,
//! logical slot `(l, a, b)` is stored on physical layer `l ^ c(a, b)`
//! with `c(a, b) = 1` when `a + b` is even, so walking one layer by a tile
//! against the other stacks two tiles of the same logical layer and a
//! vertical swap transposes them.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{physical_qubit_count, t_route, BilayerError};
use crate::routing::{path_rounds, product_decomposition, Permutation, Step};

type Site = (u8, i64, i64);
type Vec2 = (i64, i64);

const SIGMA: Vec2 = (1, 0);
pub(crate) const MAX_SIM_L: usize = 6;
pub(crate) const MAX_SIM_D: usize = 5;

/// Outcome of one simulated tile permutation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TileSimReport {
    pub l: usize,
    pub d_l: usize,
    pub depth: usize,
    /// Walk / vertical swap / walk-back rounds.
    pub logical_rounds: usize,
    /// `(2 d_l + 1) 3L + 4`, which every schedule meets.
    pub safe_depth_bound: usize,
    pub t_route: usize,
    /// `depth <= t_route + 9`.
    pub within_t_route_bound: bool,
    /// Measured depth of a standalone adjacent-tile swap (needs `L >= 2`).
    pub logical_swap_depth: Option<usize>,
    pub touched_sites: usize,
    pub qubit_bound: u64,
    pub violations: Vec<String>,
    /// Site `[layer, u, v]` of data qubit `(0, 0)` of every tile, before
    /// the first step and after each step.
    pub tile_positions: Vec<Vec<[i64; 3]>>,
}

struct Engine {
    l: usize,
    d: i64,
    sites: HashMap<Site, (u32, u16)>,
    touched: HashSet<Site>,
    /// Physical layer -> grid slot -> tile.
    slots: [Vec<u32>; 2],
    walk: [Vec2; 2],
    stag: [bool; 2],
    depth: usize,
    violations: Vec<String>,
    positions: Vec<Vec<[i64; 3]>>,
}

fn add(a: Vec2, b: Vec2) -> Vec2 {
    (a.0 + b.0, a.1 + b.1)
}

fn neg(a: Vec2) -> Vec2 {
    (-a.0, -a.1)
}

impl Engine {
    fn new(l: usize, d: usize) -> Self {
        let n2 = l * l;
        let mut e = Engine {
            l,
            d: d as i64,
            sites: HashMap::new(),
            touched: HashSet::new(),
            slots: [(0..n2 as u32).collect(), (n2 as u32..2 * n2 as u32).collect()],
            walk: [(0, 0); 2],
            stag: [false; 2],
            depth: 0,
            violations: Vec::new(),
            positions: Vec::new(),
        };
        for layer in 0..2 {
            for g in 0..n2 {
                let t = e.slots[layer][g];
                for (q, p) in e.data_sites(layer, g) {
                    e.sites.insert((layer as u8, p.0, p.1), (t, q));
                }
            }
        }
        e.touched.extend(e.sites.keys().copied());
        e.record();
        e
    }

    fn origin(&self, g: usize) -> Vec2 {
        let (a, b) = ((g / self.l) as i64, (g % self.l) as i64);
        (a * self.d + b * self.d, -a * self.d + b * self.d)
    }

    fn delta(&self, q: u16) -> Vec2 {
        let (i, j) = (q as i64 / self.d, q as i64 % self.d);
        (i + j, j - i)
    }

    fn offset(&self, layer: usize) -> Vec2 {
        add(self.walk[layer], if self.stag[layer] { SIGMA } else { (0, 0) })
    }

    /// Where the model expects the data of the tile in `(layer, g)`.
    fn data_sites(&self, layer: usize, g: usize) -> Vec<(u16, Vec2)> {
        let base = add(self.origin(g), self.offset(layer));
        (0..(self.d * self.d) as u16).map(|q| (q, add(base, self.delta(q)))).collect()
    }

    fn record(&mut self) {
        let mut pos = vec![[0i64; 3]; 2 * self.l * self.l];
        for (&(layer, u, v), &(t, q)) in &self.sites {
            if q == 0 {
                pos[t as usize] = [layer as i64, u, v];
            }
        }
        self.positions.push(pos);
    }

    fn violation(&mut self, msg: String) {
        if self.violations.len() < 64 {
            self.violations.push(msg);
        }
    }

    /// One physical step of disjoint swaps.
    fn step(&mut self, swaps: Vec<(Site, Site)>) {
        self.depth += 1;
        let t = self.depth;
        let mut used = HashSet::with_capacity(2 * swaps.len());
        for (x, y) in swaps {
            if !used.insert(x) || !used.insert(y) {
                self.violation(format!("collision at step {t}: site {x:?} or {y:?} used twice"));
                continue;
            }
            let (cx, cy) = (self.sites.remove(&x), self.sites.remove(&y));
            if let (Some(a), Some(b)) = (cx, cy) {
                self.violation(format!("data-data swap at step {t}: tile {} qubit {} with tile {} qubit {}", a.0, a.1, b.0, b.1));
            }
            if let Some(c) = cx {
                self.sites.insert(y, c);
            }
            if let Some(c) = cy {
                self.sites.insert(x, c);
            }
            self.touched.insert(x);
            self.touched.insert(y);
        }
        self.record();
    }

    /// Swaps moving every data qubit of `layer` (except slots in `skip`) by `dir`.
    fn layer_moves(&mut self, layer: usize, dir: Vec2, skip: &HashSet<usize>, out: &mut Vec<(Site, Site)>) {
        for g in 0..self.l * self.l {
            if skip.contains(&g) {
                continue;
            }
            let t = self.slots[layer][g];
            for (q, p) in self.data_sites(layer, g) {
                let from = (layer as u8, p.0, p.1);
                if self.sites.get(&from) != Some(&(t, q)) {
                    self.violation(format!("tile {t} qubit {q} not at {from:?} before step {}", self.depth + 1));
                }
                let to = add(p, dir);
                out.push((from, (layer as u8, to.0, to.1)));
            }
        }
    }

    /// Toggles the stagger of one layer (one step).
    fn stagger(&mut self, layer: usize) {
        let dir = if self.stag[layer] { neg(SIGMA) } else { SIGMA };
        let mut swaps = Vec::new();
        self.layer_moves(layer, dir, &HashSet::new(), &mut swaps);
        self.step(swaps);
        self.stag[layer] = !self.stag[layer];
    }

    /// Moves both layers by the given total displacements, one unit step
    /// per layer per physical step.
    fn walk(&mut self, top: Vec2, bottom: Vec2) {
        let units = |v: Vec2| -> Vec<Vec2> {
            let mut u = vec![(v.0.signum(), 0); v.0.unsigned_abs() as usize];
            u.extend(vec![(0, v.1.signum()); v.1.unsigned_abs() as usize]);
            u
        };
        let (ut, ub) = (units(top), units(bottom));
        for k in 0..ut.len().max(ub.len()) {
            let mut swaps = Vec::new();
            for (layer, u) in [(1, ut.get(k)), (0, ub.get(k))] {
                if let Some(&u) = u {
                    self.layer_moves(layer, u, &HashSet::new(), &mut swaps);
                }
            }
            self.step(swaps);
            for (layer, u) in [(1, ut.get(k)), (0, ub.get(k))] {
                if let Some(&u) = u {
                    self.walk[layer] = add(self.walk[layer], u);
                }
            }
        }
    }

    /// Vertical swaps between stacked `(top slot, bottom slot)` pairs while
    /// every other tile moves within its layer onto the opposite stagger.
    fn vertical_2b(&mut self, pairs: &[(usize, usize)]) {
        if self.stag[0] == self.stag[1] {
            self.violation(format!("vertical step {} without stagger", self.depth + 1));
            return;
        }
        let mut swaps = Vec::new();
        let (mut skip_top, mut skip_bottom) = (HashSet::new(), HashSet::new());
        for &(gt, gb) in pairs {
            if add(self.origin(gt), self.walk[1]) != add(self.origin(gb), self.walk[0]) {
                self.violation(format!("slots {gt} (top) and {gb} (bottom) not stacked at step {}", self.depth + 1));
            }
            skip_top.insert(gt);
            skip_bottom.insert(gb);
            for (layer, g) in [(1usize, gt), (0usize, gb)] {
                for (_, p) in self.data_sites(layer, g) {
                    swaps.push(((layer as u8, p.0, p.1), (1 - layer as u8, p.0, p.1)));
                }
            }
        }
        for (layer, skip) in [(1, &skip_top), (0, &skip_bottom)] {
            let dir = if self.stag[layer] { neg(SIGMA) } else { SIGMA };
            self.layer_moves(layer, dir, skip, &mut swaps);
        }
        self.step(swaps);
        for &(gt, gb) in pairs {
            let t = self.slots[1][gt];
            self.slots[1][gt] = self.slots[0][gb];
            self.slots[0][gb] = t;
        }
        self.stag.swap(0, 1);
    }

    /// Staggered swap between the stacked pairs (three steps).
    fn staggered_swap(&mut self, pairs: &[(usize, usize)]) {
        self.stagger(1);
        self.vertical_2b(pairs);
        self.stagger(0);
    }

    /// Final placement must realize `alpha` on tiles numbered by their
    /// starting slot `layer * L^2 + g`.
    fn check_final(&mut self, alpha: &Permutation) {
        if self.walk != [(0, 0); 2] || self.stag != [false; 2] {
            self.violation("layers not realigned at the end".into());
        }
        let n2 = self.l * self.l;
        let mut expect = HashMap::new();
        for t in 0..2 * n2 {
            let dst = alpha.apply(t);
            let base = self.origin(dst % n2);
            for q in 0..(self.d * self.d) as u16 {
                let p = add(base, self.delta(q));
                expect.insert(((dst / n2) as u8, p.0, p.1), (t as u32, q));
            }
        }
        if expect != self.sites {
            let bad = expect.iter().find(|(s, c)| self.sites.get(s) != Some(c));
            let msg = match bad {
                Some((s, c)) => format!("tile {} qubit {} expected at {s:?}", c.0, c.1),
                None => "stray data after routing".to_string(),
            };
            self.violation(format!("wrong final positions: {msg}"));
        }
    }

    fn report(self, d_l: usize, logical_rounds: usize, logical_swap_depth: Option<usize>) -> TileSimReport {
        let t_r = t_route(d_l, self.l);
        TileSimReport {
            l: self.l,
            d_l,
            depth: self.depth,
            logical_rounds,
            safe_depth_bound: (2 * d_l + 1) * 3 * self.l + 4,
            t_route: t_r,
            within_t_route_bound: self.depth <= t_r + 9,
            logical_swap_depth,
            touched_sites: self.touched.len(),
            qubit_bound: physical_qubit_count(self.l, d_l),
            violations: self.violations,
            tile_positions: self.positions,
        }
    }
}

fn check_params(l: usize, d_l: usize) -> Result<(), BilayerError> {
    if l == 0 || l > MAX_SIM_L {
        return Err(BilayerError::InvalidParameters(format!("L must lie in 1..={MAX_SIM_L}, got {l}")));
    }
    if d_l == 0 || d_l > MAX_SIM_D || d_l.is_multiple_of(2) {
        return Err(BilayerError::InvalidParameters(format!("d_l must be odd and at most {MAX_SIM_D}, got {d_l}")));
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    A,
    B,
}

/// Layer displacements `(top, bottom)` whose difference is `-axis` (for
/// `minus`) or `+axis`, each `d` unit steps long.
fn walk_vectors(axis: Axis, minus: bool, d: i64) -> (Vec2, Vec2) {
    let (h, k) = ((d + 1) / 2, (d - 1) / 2);
    let (top, bottom) = match axis {
        Axis::A => ((-h, k), (k, -h)),
        Axis::B => ((-h, -k), (k, h)),
    };
    if minus {
        (top, bottom)
    } else {
        (neg(top), neg(bottom))
    }
}

/// Simulates the adjacent swap of top tiles `(a, b)` and `(a + 1, b)`
/// with three staggered swaps and a walk there and back.
pub fn logical_swap_report(l: usize, d_l: usize, a: usize, b: usize) -> Result<TileSimReport, BilayerError> {
    check_params(l, d_l)?;
    if a + 1 >= l || b >= l {
        return Err(BilayerError::InvalidParameters(format!("no adjacent pair at ({a}, {b}) for L={l}")));
    }
    let (g0, g1) = (a * l + b, (a + 1) * l + b);
    let mut e = Engine::new(l, d_l);
    let (top, bottom) = walk_vectors(Axis::A, true, d_l as i64);
    e.staggered_swap(&[(g0, g0)]);
    e.walk(top, bottom);
    e.staggered_swap(&[(g1, g0)]);
    e.walk(neg(top), neg(bottom));
    e.staggered_swap(&[(g0, g0)]);
    let n2 = l * l;
    let mut map: Vec<usize> = (0..2 * n2).collect();
    map.swap(n2 + g0, n2 + g1);
    e.check_final(&Permutation::new(map).expect("transposition"));
    let depth = e.depth;
    Ok(e.report(d_l, 1, Some(depth)))
}

/// Runs the full routing of `alpha` (over `2 L^2` tiles, tile
/// `layer * L^2 + a L + b`) and reports every violation found.
pub fn tile_permutation_trace(l: usize, d_l: usize, alpha: &Permutation) -> Result<TileSimReport, BilayerError> {
    check_params(l, d_l)?;
    let n2 = l * l;
    alpha.expect_len(2 * n2)?;
    let swap_depth = if l >= 2 { logical_swap_report(l, d_l, 0, 0)?.logical_swap_depth } else { None };
    let mut e = Engine::new(l, d_l);
    if alpha.is_identity() {
        return Ok(e.report(d_l, 0, swap_depth));
    }
    let outer = product_decomposition(alpha, 2, n2)?;
    let inner = [product_decomposition(&outer.rows[0], l, l)?, product_decomposition(&outer.rows[1], l, l)?];
    let checker = |g: usize| (g / l + g % l).is_multiple_of(2);
    let stored_top = |layer: usize, g: usize| (layer == 1) ^ checker(g);
    let layer_swaps = |cols: &[Permutation]| -> Vec<(usize, usize)> {
        (0..n2).filter(|&g| !cols[g].is_identity() ^ checker(g)).map(|g| (g, g)).collect()
    };

    e.stagger(1);
    e.vertical_2b(&layer_swaps(&outer.first_columns));

    let mut rounds = 0;
    for (axis, which) in [(Axis::A, 0), (Axis::B, 1), (Axis::A, 2)] {
        // Lines as (logical layer, slot of each line position, permutation).
        let mut lines: Vec<(usize, Vec<usize>, &Permutation)> = Vec::new();
        for (layer, dec) in inner.iter().enumerate() {
            for fixed in 0..l {
                let perm = match which {
                    0 => &dec.first_columns[fixed],
                    1 => &dec.rows[fixed],
                    _ => &dec.last_columns[fixed],
                };
                let slots = (0..l).map(|i| if axis == Axis::A { i * l + fixed } else { fixed * l + i }).collect();
                lines.push((layer, slots, perm));
            }
        }
        // Under a "minus" walk the top tile of a stacked pair has the larger
        // line index, so pair (i, i + 1) is reachable iff slot i + 1 is stored on top.
        let plan = |first_minus: bool| -> Vec<Vec<Step>> {
            lines
                .iter()
                .map(|(layer, slots, perm)| {
                    let reach0 = if first_minus { stored_top(*layer, slots[1.min(l - 1)]) } else { stored_top(*layer, slots[0]) };
                    path_rounds(perm, if reach0 { 0 } else { 1 })
                })
                .collect()
        };
        let (pm, pp) = (plan(true), plan(false));
        let len = |p: &Vec<Vec<Step>>| p.iter().map(Vec::len).max().unwrap_or(0);
        let (first_minus, plan) = if len(&pp) < len(&pm) { (false, pp) } else { (true, pm) };
        for r in 0..len(&plan) {
            let minus = first_minus ^ (r % 2 == 1);
            let mut pairs = Vec::new();
            for ((layer, slots, _), steps) in lines.iter().zip(&plan) {
                for &(i, j) in steps.get(r).map_or(&[][..], Vec::as_slice) {
                    let (lo, hi) = (slots[i.min(j)], slots[i.max(j)]);
                    let (top, bottom) = if minus { (hi, lo) } else { (lo, hi) };
                    if !stored_top(*layer, top) {
                        e.violation(format!("line transposition ({lo}, {hi}) unreachable in round {r}"));
                    }
                    pairs.push((top, bottom));
                }
            }
            if pairs.is_empty() {
                continue;
            }
            let (top, bottom) = walk_vectors(axis, minus, d_l as i64);
            e.walk(top, bottom);
            e.vertical_2b(&pairs);
            e.walk(neg(top), neg(bottom));
            rounds += 1;
        }
    }

    e.vertical_2b(&layer_swaps(&outer.last_columns));
    let staggered = if e.stag[0] { 0 } else { 1 };
    e.stagger(staggered);
    e.check_final(alpha);
    Ok(e.report(d_l, rounds, swap_depth))
}

/// [`tile_permutation_trace`], failing on the first violation.
pub fn tile_permutation_sim(l: usize, d_l: usize, alpha: &Permutation) -> Result<TileSimReport, BilayerError> {
    let rep = tile_permutation_trace(l, d_l, alpha)?;
    match rep.violations.first() {
        Some(v) => Err(BilayerError::Verification(v.clone())),
        None => Ok(rep),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_free() {
        let rep = tile_permutation_sim(2, 3, &Permutation::identity(8)).unwrap();
        assert_eq!(rep.depth, 0);
        assert_eq!(rep.logical_swap_depth, Some(15));
    }

    #[test]
    fn adjacent_swap_depth() {
        let rep = logical_swap_report(2, 3, 0, 0).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        assert_eq!(rep.depth, 15);
        let rep = logical_swap_report(3, 5, 1, 2).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        assert_eq!(rep.depth, 19);
    }

    #[test]
    fn random_permutations() {
        for l in 1..=3 {
            for seed in 0..10 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let alpha = Permutation::random(2 * l * l, &mut rng);
                let rep = tile_permutation_sim(l, 3, &alpha).unwrap();
                if !alpha.is_identity() {
                    assert_eq!(rep.depth, 7 * rep.logical_rounds + 4);
                }
                assert!(rep.depth <= rep.safe_depth_bound);
                assert!(rep.touched_sites as u64 <= rep.qubit_bound);
                assert_eq!(rep.tile_positions.len(), rep.depth + 1);
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(tile_permutation_sim(7, 3, &Permutation::identity(98)).is_err());
        assert!(tile_permutation_sim(2, 4, &Permutation::identity(8)).is_err());
        assert!(tile_permutation_sim(2, 3, &Permutation::identity(9)).is_err());
    }
}
