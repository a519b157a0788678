use std::f64::consts::TAU;

use latticeproj::evaluate::{sweep_evaluate, RecurrencePlan};
use latticeproj::factorize::{prepare, OrderStrategy};
use latticeproj::graph::{bipartition, build_from_edges, ClusterGraph};
use latticeproj::oracle::{build_statevector, direct_sum, project_statevector};
use latticeproj::Projection;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn graph_and_spec(max_n: usize) -> impl Strategy<Value = (ClusterGraph, Projection)> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .collect();
            let m = pairs.len();
            (
                Just(n),
                subsequence(pairs, 0..=m),
                prop::collection::vec(0.0..TAU, n),
                prop::collection::vec(0.0..TAU, n),
            )
        })
        .prop_map(|(n, edges, theta, phi)| {
            (
                build_from_edges(n, edges).unwrap(),
                Projection::new(theta, phi).unwrap(),
            )
        })
}

/// Random subgraphs of a 3×3 grid, which stay bipartite.
fn bipartite_graph_and_spec() -> impl Strategy<Value = (ClusterGraph, Projection)> {
    let mut grid = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            let q = 3 * r + c;
            if c < 2 {
                grid.push((q, q + 1));
            }
            if r < 2 {
                grid.push((q, q + 3));
            }
        }
    }
    (
        subsequence(grid.clone(), 0..=grid.len()),
        prop::collection::vec(0.0..TAU, 9),
        prop::collection::vec(0.0..TAU, 9),
    )
        .prop_map(|(edges, theta, phi)| {
            (
                build_from_edges(9, edges).unwrap(),
                Projection::new(theta, phi).unwrap(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn any_order_matches_statevector((g, spec) in graph_and_spec(8), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        // Fisher–Yates with a splitmix step; proptest shrinks the seed.
        let mut x = seed;
        for i in (1..perm.len()).rev() {
            x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let z = (x ^ (x >> 31)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            perm.swap(i, (z % (i as u64 + 1)) as usize);
        }
        let want = project_statevector(&build_statevector(&g).unwrap(), &spec).unwrap();
        let poly = prepare(&g, &spec, &OrderStrategy::Custom(perm)).unwrap();
        let got = sweep_evaluate(&poly).unwrap().amplitude;
        prop_assert!((got - want).norm() < 1e-9, "{} vs {}", got, want);
        let planned = RecurrencePlan::compile(&poly).unwrap().evaluate(&spec).unwrap().amplitude;
        prop_assert!((planned - want).norm() < 1e-9);
    }

    #[test]
    fn amplitude_is_bounded((g, spec) in graph_and_spec(9)) {
        let r = sweep_evaluate(&prepare(&g, &spec, &OrderStrategy::Greedy).unwrap()).unwrap();
        prop_assert!(r.amplitude.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn oracles_agree((g, spec) in bipartite_graph_and_spec()) {
        let sv = project_statevector(&build_statevector(&g).unwrap(), &spec).unwrap();
        let ds = direct_sum(&g, &bipartition(&g).unwrap(), &spec).unwrap();
        prop_assert!((sv - ds).norm() < 1e-10);
    }

    #[test]
    fn relabeling_is_invariant((g, spec) in graph_and_spec(7), shift in 1usize..7) {
        let n = g.n();
        let map = |q: usize| (q + shift) % n;
        let h = build_from_edges(n, g.edges().iter().map(|&(a, b)| (map(a), map(b)))).unwrap();
        let mut theta = vec![0.0; n];
        let mut phi = vec![0.0; n];
        for q in 0..n {
            theta[map(q)] = spec.theta()[q];
            phi[map(q)] = spec.phi()[q];
        }
        let moved = Projection::new(theta, phi).unwrap();
        let a = sweep_evaluate(&prepare(&g, &spec, &OrderStrategy::Greedy).unwrap()).unwrap().amplitude;
        let b = sweep_evaluate(&prepare(&h, &moved, &OrderStrategy::Greedy).unwrap()).unwrap().amplitude;
        prop_assert!((a - b).norm() < 1e-9);
    }
}
