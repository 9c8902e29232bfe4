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

use std::sync::OnceLock;

use hiermem::graphs::{
    build_sparse_router_graph, cartesian_product, edge_length_sq, make_complete, make_nn1, make_nn2, make_path,
    sample_expander, spectral_lambda, Graph,
};
use hiermem::routing::{
    apply_steps, edge_color_bipartite, lattice_depth_bound, product_decomposition, route_complete, route_expander,
    route_lattice, route_path, route_path_steps, route_product, verify_routing, ExpanderStrategy, Permutation,
    RoutingMode,
};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    any::<u64>().prop_map(move |s| Permutation::seeded(n, s))
}

fn sized_perm(lo: usize, hi: usize) -> impl Strategy<Value = Permutation> {
    (lo..=hi).prop_flat_map(perm)
}

fn expander() -> &'static Graph {
    static G: OnceLock<Graph> = OnceLock::new();
    G.get_or_init(|| sample_expander(24, 4, 0.5, 11, 100_000).unwrap().0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn path_router_round_trips(alpha in sized_perm(1, 40)) {
        let l = alpha.len();
        let s = route_path(&alpha, l).unwrap();
        let v = verify_routing(&alpha, &s);
        prop_assert!(v.ok, "{:?}", v.violation);
        prop_assert!(s.depth() <= l);
    }

    #[test]
    fn complete_router_round_trips(alpha in sized_perm(1, 30)) {
        let s = route_complete(&alpha, alpha.len()).unwrap();
        prop_assert!(verify_routing(&alpha, &s).ok);
        prop_assert!(s.depth() <= 2);
    }

    #[test]
    fn product_router_round_trips(n1 in 1usize..8, n2 in 1usize..8, seed in any::<u64>()) {
        let alpha = Permutation::seeded(n1 * n2, seed);
        let line = |p: &Permutation| Ok(route_path_steps(p));
        let s = route_product(&alpha, &make_path(n1), &make_path(n2), &line, &line).unwrap();
        prop_assert!(verify_routing(&alpha, &s).ok);

        // Depth is at most two column passes plus one row pass.
        let dec = product_decomposition(&alpha, n1, n2).unwrap();
        let depth = |p: &Permutation| route_path_steps(p).len();
        let col = dec.first_columns.iter().chain(&dec.last_columns).map(depth).max().unwrap_or(0);
        let row = dec.rows.iter().map(depth).max().unwrap_or(0);
        prop_assert!(s.depth() <= 2 * col + row, "{} > 2*{} + {}", s.depth(), col, row);
    }

    #[test]
    fn expander_routers_round_trip(alpha in perm(24), greedy in any::<bool>(), seed in any::<u64>()) {
        let strategy = if greedy { ExpanderStrategy::Greedy } else { ExpanderStrategy::Tree };
        let s = route_expander(&alpha, expander(), strategy, seed).unwrap();
        prop_assert!(verify_routing(&alpha, &s).ok);
    }

    #[test]
    fn unit_lattice_round_trips(l in 1usize..10, seed in any::<u64>()) {
        let alpha = Permutation::seeded(l * l, seed);
        let s = route_lattice(&alpha, l, 1, RoutingMode::Unit, 0).unwrap().schedule;
        prop_assert!(verify_routing(&alpha, &s).ok);
        prop_assert!(s.depth() <= 3 * l);
    }

    #[test]
    fn dense_lattice_round_trips(r in prop::sample::select(vec![2usize, 4]), seed in any::<u64>()) {
        let l = 8;
        let alpha = Permutation::seeded(l * l, seed);
        let s = route_lattice(&alpha, l, r, RoutingMode::Dense, 0).unwrap().schedule;
        prop_assert!(verify_routing(&alpha, &s).ok);
        prop_assert!(s.depth() <= lattice_depth_bound(l, r, RoutingMode::Dense).unwrap());
    }

    #[test]
    fn sparse_lattice_round_trips(seed in any::<u64>()) {
        let alpha = Permutation::seeded(144, seed);
        let s = route_lattice(&alpha, 12, 6, RoutingMode::Sparse, seed % 4).unwrap().schedule;
        prop_assert!(verify_routing(&alpha, &s).ok);
    }

    #[test]
    fn routing_then_inverse_restores_labels(alpha in sized_perm(2, 30)) {
        let n = alpha.len();
        let mut steps = route_path_steps(&alpha);
        steps.extend(route_path_steps(&alpha.inverse()));
        prop_assert_eq!(apply_steps(n, &steps), (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn bipartite_coloring_partitions_edges(
        edges in prop::collection::vec((0usize..6, 0usize..7), 0..40)
    ) {
        let mut deg = [0usize; 13];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[6 + b] += 1;
        }
        let colors = deg.iter().copied().max().unwrap_or(0);
        let c = edge_color_bipartite(6, 7, &edges, colors).unwrap();
        prop_assert_eq!(c.len(), edges.len());
        for k in 0..colors {
            let mut seen = [false; 13];
            for (&(a, b), &ck) in edges.iter().zip(&c) {
                if ck == k {
                    prop_assert!(!seen[a] && !seen[6 + b], "color {} is not a matching", k);
                    seen[a] = true;
                    seen[6 + b] = true;
                }
            }
        }
        prop_assert!(c.iter().all(|&k| k < colors.max(1)));
    }

    #[test]
    fn wide_range_is_complete(l in 1usize..12, extra in 0usize..4) {
        let r = l.saturating_sub(1) + extra;
        let g = make_nn1(l, r.max(1));
        let k = make_complete(l);
        prop_assert_eq!(g.edge_count(), k.edge_count());
        for u in 0..l {
            for v in 0..l {
                prop_assert_eq!(g.has_edge(u, v), k.has_edge(u, v));
            }
        }
    }

    #[test]
    fn cartesian_product_counts_and_commutes(a in 1usize..7, b in 1usize..7, ka in any::<bool>()) {
        let g1 = if ka { make_complete(a) } else { make_path(a) };
        let g2 = make_path(b);
        let p = cartesian_product(&g1, &g2);
        let q = cartesian_product(&g2, &g1);
        prop_assert_eq!(p.edge_count(), g1.edge_count() * b + g2.edge_count() * a);
        for u in 0..a * b {
            for v in 0..a * b {
                let sw = |x: usize| (x % b) * a + x / b;
                prop_assert_eq!(p.has_edge(u, v), q.has_edge(sw(u), sw(v)));
            }
        }
    }
}

#[test]
fn sparse_router_graphs_are_spanning_and_short() {
    for (l, r, seed) in [(12, 6, 0), (24, 6, 3), (16, 8, 5)] {
        let s = build_sparse_router_graph(l, r, seed).unwrap();
        let g = &s.graph;
        assert_eq!(g.vertex_count(), l * l);
        assert!(g.is_connected());
        assert!(g.max_degree() <= 12);
        assert!(g.is_subgraph_of(&make_nn2(l, r)));
        for &(u, v) in g.edges() {
            assert!(edge_length_sq(g, u, v).unwrap() <= (r * r) as i64);
        }
    }
}

#[test]
fn expander_certificates_recompute() {
    for seed in 0..5 {
        let (g, cert) = sample_expander(30, 4, 0.5, seed, 100_000).unwrap();
        assert_eq!(g.regular_degree(), Some(4));
        let lambda = spectral_lambda(&g).unwrap();
        assert!((lambda - cert.lambda).abs() < 1e-6, "{lambda} vs {}", cert.lambda);
        assert!(lambda <= 2.0 * 3f64.sqrt() + 0.5);
    }
}
