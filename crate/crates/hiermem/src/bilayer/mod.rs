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

//! Tile-level model of a bilayer hierarchical memory: every outer-code
//! qubit is a rotated surface-code tile of distance `d_l`, and tiles are
//! permuted with layer-wide walking and staggered-swap primitives.

mod tiles;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::routing::RoutingError;

pub use tiles::{logical_swap_report, tile_permutation_sim, tile_permutation_trace, TileSimReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BilayerError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Routing(#[from] RoutingError),
}

/// Routing cost constant for the expander term of the long-range branch
/// of [`logical_route_depth`].
pub const C_SPARSE: f64 = 4.0;

/// Integer tile side `ceil(sqrt(2 d_l^2 - 1))`.
pub fn tile_side(d_l: usize) -> usize {
    let target = 2 * d_l * d_l - 1;
    let mut e = (target as f64).sqrt() as usize;
    while e * e < target {
        e += 1;
    }
    while e > 1 && (e - 1) * (e - 1) >= target {
        e -= 1;
    }
    e
}

/// Depth of routing a full tile permutation on an `L x L` bilayer grid
/// with unit-range physical swaps.
pub fn t_route(d_l: usize, l: usize) -> usize {
    assert!(d_l >= 1 && l >= 1, "d_l and L must be positive");
    (2 * d_l + 1) * (3 * l - 3) + 8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapPrimitiveDepths {
    pub staggered: usize,
    pub walk: usize,
    pub full_swap: usize,
}

pub fn swap_primitive_depths(d_l: usize) -> SwapPrimitiveDepths {
    assert!(d_l >= 1, "d_l must be positive");
    SwapPrimitiveDepths { staggered: 3, walk: d_l, full_swap: 2 * d_l + 9 }
}

/// Tile-routing depth when physical swaps reach distance `R`, using
/// [`C_SPARSE`].
pub fn logical_route_depth(l: usize, d_l: usize, r: usize) -> usize {
    logical_route_depth_with(l, d_l, r, C_SPARSE)
}

/// Range-`R` hardware can run any schedule built for a shorter range, so
/// the depth is the best raw cost over `1..=R`. Below the tile side a walk
/// of `d_l` sites takes `ceil(d_l / R)` steps; from the tile side up,
/// `floor(R / ell)` tiles form one routing block.
pub fn logical_route_depth_with(l: usize, d_l: usize, r: usize, c_sparse: f64) -> usize {
    assert!(r >= 1, "R must be positive");
    (1..=r).map(|rr| raw_route_depth(l, d_l, rr, c_sparse)).min().expect("nonempty range")
}

fn raw_route_depth(l: usize, d_l: usize, r: usize, c_sparse: f64) -> usize {
    let ell = tile_side(d_l);
    if r >= ell {
        let block = r / ell;
        let lg = (block as f64).log2();
        (2 * d_l + 1) * 3 * l.div_ceil(block) + 8 + (c_sparse * lg * lg).ceil() as usize
    } else {
        (2 * d_l.div_ceil(r) + 1) * (3 * l - 3) + 8
    }
}

/// Upper bound `2 (ell + 1)^2 (L + 1)^2` on the qubits of an `L x L`
/// bilayer tile grid, buffers included.
pub fn physical_qubit_count(l: usize, d_l: usize) -> u64 {
    let e = tile_side(d_l) as u64 + 1;
    let l = l as u64 + 1;
    2 * e * e * l * l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchicalParams {
    pub big_n: u64,
    pub big_k: u64,
    pub big_d: u64,
    pub n: u64,
    pub k: u64,
    pub d: u64,
    pub d_l: u64,
}

pub fn hierarchical_params(n: u64, k: u64, d: u64, d_l: u64) -> Result<HierarchicalParams, BilayerError> {
    if n == 0 || k == 0 || d == 0 || d_l == 0 {
        return Err(BilayerError::InvalidParameters("all code parameters must be positive".into()));
    }
    Ok(HierarchicalParams { big_n: n * d_l * d_l, big_k: k, big_d: d * d_l, n, k, d, d_l })
}

/// X-distance for biased noise with bias `eta`:
/// `d_x = d_z + ceil(2 ln(eta) / ln(1/p))`.
pub fn biased_tile_dims(d_z: usize, eta: f64, p: f64) -> Result<(usize, usize), BilayerError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(BilayerError::InvalidParameters(format!("p must lie in (0, 1), got {p}")));
    }
    if eta.is_nan() || eta < 1.0 {
        return Err(BilayerError::InvalidParameters(format!("eta must be at least 1, got {eta}")));
    }
    // The slack keeps exact ratios such as 2 ln(100) / ln(100) from rounding up.
    let extra = (2.0 * eta.ln() / (1.0 / p).ln() - 1e-9).ceil().max(0.0) as usize;
    Ok((d_z + extra, d_z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_times() {
        assert_eq!(t_route(3, 1), 8);
        assert_eq!(t_route(3, 2), 29);
        assert_eq!(t_route(3, 900), 18_887);
        assert_eq!(swap_primitive_depths(3), SwapPrimitiveDepths { staggered: 3, walk: 3, full_swap: 15 });
        assert_eq!(swap_primitive_depths(5).full_swap, 19);
        assert_eq!(swap_primitive_depths(1), SwapPrimitiveDepths { staggered: 3, walk: 1, full_swap: 11 });
    }

    #[test]
    fn long_range() {
        for l in [1, 4, 16, 100] {
            assert_eq!(logical_route_depth(l, 3, 1), t_route(3, l));
        }
        let mut prev = usize::MAX;
        for r in 1..200 {
            let v = logical_route_depth(16, 3, r);
            assert!(v <= prev);
            prev = v;
        }
        // One block covers the whole grid.
        let ell = tile_side(3);
        assert_eq!(raw_route_depth(16, 3, 16 * ell, C_SPARSE), 21 + 8 + 64);
    }

    #[test]
    fn counts() {
        assert_eq!(tile_side(3), 5);
        assert_eq!(tile_side(1), 1);
        assert_eq!(physical_qubit_count(1, 3), 288);
        assert_eq!(physical_qubit_count(900, 3), 58_449_672);
        assert_eq!(physical_qubit_count(7, 1), 8 * 64);
        let h = hierarchical_params(1_116_416, 112_896, 119, 3).unwrap();
        assert_eq!((h.big_n, h.big_k, h.big_d), (10_047_744, 112_896, 357));
        let h = hierarchical_params(5, 1, 2, 3).unwrap();
        assert_eq!((h.big_n, h.big_k, h.big_d), (45, 1, 6));
        assert!(hierarchical_params(0, 1, 1, 1).is_err());
    }

    #[test]
    fn biased() {
        assert_eq!(biased_tile_dims(3, 1.0, 1e-3).unwrap(), (3, 3));
        assert_eq!(biased_tile_dims(3, 100.0, 1e-2).unwrap(), (5, 3));
        assert!(biased_tile_dims(3, 10.0, 1.0).is_err());
        for dz in [3usize, 5, 9] {
            assert_eq!((2 * dz + 1).div_ceil(2), 2 * dz.div_ceil(2));
        }
    }
}
