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

//! Rates of locally decaying distributions: a distribution over subsets
//! `S` has rate `p` when `Pr(E ⊆ S) <= p^|E|` for every `E`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::PauliError;

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DecayRate(f64);

impl DecayRate {
    pub fn new(p: f64) -> Result<Self, PauliError> {
        if p.is_nan() || p < 0.0 {
            return Err(PauliError::InvalidRate(p));
        }
        Ok(DecayRate(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Rates of 1 or more bound nothing.
    pub fn is_vacuous(self) -> bool {
        self.0 >= 1.0
    }

    /// `p^|E|`.
    pub fn bound(self, size: usize) -> f64 {
        self.0.powi(size as i32)
    }
}

impl fmt::Display for DecayRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)?;
        if self.is_vacuous() {
            write!(f, " (vacuous)")?;
        }
        Ok(())
    }
}

/// Union of two independent supports.
pub fn compose_rates(p1: DecayRate, p2: DecayRate) -> DecayRate {
    DecayRate(p1.0 + p2.0)
}

/// Image under a linear map whose rows and columns have weight at most
/// `delta`.
pub fn map_rate(p: DecayRate, delta: usize) -> DecayRate {
    assert!(delta >= 1, "delta must be positive");
    DecayRate(2f64.powi(delta as i32) * p.0.powf(1.0 / delta as f64))
}

/// Data error rate left by a single faulty layer of gates.
pub fn depth1_rate(p_phys: DecayRate) -> DecayRate {
    DecayRate(p_phys.0.sqrt())
}

/// Per-round rate `2^(delta+1) * depth * p^(1/(2 delta + 2))`.
pub fn pround_bound(delta: usize, depth: usize, p_phys: DecayRate) -> DecayRate {
    pround_bound_with(2f64.powi(delta as i32 + 1), delta, depth, p_phys)
}

/// [`pround_bound`] with the leading constant replaced by `prefactor`.
pub fn pround_bound_with(prefactor: f64, delta: usize, depth: usize, p_phys: DecayRate) -> DecayRate {
    assert!(delta >= 1, "delta must be positive");
    DecayRate(prefactor * depth as f64 * p_phys.0.powf(1.0 / (2 * delta + 2) as f64))
}

/// `Pr(E ⊆ S)` for a distribution given as `(subset bitmask, probability)`.
pub fn covering_probability(dist: &[(u64, f64)], e: u64) -> f64 {
    dist.iter().filter(|(s, _)| s & e == e).map(|(_, p)| p).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn r(p: f64) -> DecayRate {
        DecayRate::new(p).unwrap()
    }

    #[test]
    fn formulas() {
        assert_relative_eq!(compose_rates(r(0.01), r(0.02)).value(), 0.03, max_relative = 1e-12);
        assert_eq!(compose_rates(r(0.0), r(0.4)).value(), 0.4);
        assert_relative_eq!(map_rate(r(1e-4), 2).value(), 0.04, max_relative = 1e-12);
        assert_relative_eq!(map_rate(r(0.3), 1).value(), 0.6, max_relative = 1e-12);
        assert_relative_eq!(depth1_rate(r(1e-4)).value(), 1e-2, max_relative = 1e-12);
        assert_eq!(depth1_rate(r(0.0)).value(), 0.0);
        assert_eq!(pround_bound(4, 0, r(0.1)).value(), 0.0);
        assert_relative_eq!(pround_bound(4, 12, r(1e-30)).value(), 0.384, max_relative = 1e-12);
        let p: f64 = 3e-3;
        assert_relative_eq!(pround_bound(4, 12, r(p)).value(), 384.0 * p.powf(0.1), max_relative = 1e-12);
        assert!(pround_bound(4, 12, r(p)).is_vacuous());
        assert!(DecayRate::new(-1.0).is_err());
    }

    #[test]
    fn covering() {
        let dist = [(0b00, 0.5), (0b01, 0.2), (0b11, 0.3)];
        assert_relative_eq!(covering_probability(&dist, 0b01), 0.5);
        assert_relative_eq!(covering_probability(&dist, 0b11), 0.3);
        assert_relative_eq!(covering_probability(&dist, 0), 1.0);
    }
}
