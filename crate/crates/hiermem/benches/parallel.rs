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

//! Pooled vs single-threaded timings for the data-parallel hot spots.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hiermem::circuits::build_ideal_sec;
use hiermem::codes::{hypergraph_product, sample_regular_parity_check, BinaryMatrix, CssCode};
use hiermem::estimator::{log_grid, sweep, EstimatorConfig, OuterCode};
use hiermem::par;
use hiermem::pauli::enumerate_fault_distribution;
use hiermem::routing::{route_lattice, Permutation, RoutingMode};

fn modes(c: &mut Criterion, name: &str, mut f: impl FnMut() + Send) {
    let mut g = c.benchmark_group(name);
    g.sample_size(10);
    g.bench_function(BenchmarkId::new(name, "parallel"), |b| b.iter(&mut f));
    g.bench_function(BenchmarkId::new(name, "sequential"), |b| b.iter(|| par::sequential(&mut f)));
    g.finish();
}

fn benches(c: &mut Criterion) {
    let cfg = EstimatorConfig::new(OuterCode::expander_58(), 21, 0.1);
    let grid = log_grid(1e-4, 1e-2, 41);
    modes(c, "estimator_sweep", || {
        std::hint::black_box(sweep(&cfg, &grid, &[9, 15, 21, 27], &[1.0, 0.1, 0.01]));
    });

    let h = sample_regular_parity_check(64, 3, 4, 1, 1000).expect("regular matrix");
    modes(c, "hypergraph_product", || {
        std::hint::black_box(hypergraph_product(&h, &h).expect("product"));
    });

    let alpha = Permutation::seeded(64 * 64, 1);
    modes(c, "lattice_route", || {
        std::hint::black_box(route_lattice(&alpha, 64, 1, RoutingMode::Unit, 1).expect("route"));
    });

    // one weight-3 X check: five fault locations
    let check = BinaryMatrix::from_rows(&[vec![1u8, 1, 1]]);
    let circ = build_ideal_sec(&CssCode::from_dense(&check, &BinaryMatrix::zeros(0, 3)).expect("css code"));
    modes(c, "fault_enumeration", || {
        std::hint::black_box(enumerate_fault_distribution(&circ, 1e-3).expect("enumerable"));
    });
}

criterion_group!(parallel, benches);
criterion_main!(parallel);
