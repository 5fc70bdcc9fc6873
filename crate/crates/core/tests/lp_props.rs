mod common;

use common::dense_graph;
use num_bigint::BigUint;
use proptest::prelude::*;
use trifactor::generators::{complete_tripartite, hsz_extremal};
use trifactor::lp::{integer_clique_weights, rescale_cover, solve_covering_lp, solve_packing_lp};
use trifactor::Graph;

const TOL: f64 = 1e-6;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strong_duality(g in dense_graph(2, 11, 0.7), k in 2usize..=3) {
        let pack = solve_packing_lp(&g, k, None).unwrap();
        let cover = solve_covering_lp(&g, k).unwrap();
        prop_assert!((pack.objective - cover.objective).abs() <= TOL);
        prop_assert!(pack.duality_gap <= TOL);

        let sums = pack.weighting.vertex_sums(g.n());
        prop_assert!(sums.iter().all(|&s| s <= 1.0 + TOL));
        prop_assert!(pack.weighting.weights.iter().all(|&w| w >= -TOL));
        prop_assert!(pack.cover.0.iter().all(|&c| c >= -TOL));
        if !pack.weighting.cliques.is_empty() {
            prop_assert!(pack.cover.min_clique_total(&pack.weighting.cliques) >= 1.0 - TOL);
        }
        prop_assert!(pack.objective <= g.n() as f64 / k as f64 + TOL);
    }

    #[test]
    fn rescaling_keeps_cliques_covered(
        c in proptest::collection::vec(0.0f64..0.8, 3..10),
        k in 2usize..=4,
        picks in proptest::collection::vec(proptest::collection::vec(0usize..10, 4), 1..20),
    ) {
        let kf = k as f64;
        let c_min = c.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assume!(c_min < 1.0 / kf - 1e-3);
        let scaled = rescale_cover(&c, k).unwrap();
        let argmin = c.iter().position(|&x| x == c_min).unwrap();
        prop_assert!(scaled[argmin].abs() <= 1e-9);
        for q in &picks {
            let mut q: Vec<usize> = q.iter().map(|&v| v % c.len()).collect();
            q.sort_unstable();
            q.dedup();
            prop_assume!(q.len() >= k);
            q.truncate(k);
            let before: f64 = q.iter().map(|&v| c[v]).sum();
            if before >= 1.0 {
                prop_assert!(q.iter().map(|&v| scaled[v]).sum::<f64>() >= 1.0 - 1e-9);
            }
        }
        let n = c.len() as f64;
        if c.iter().sum::<f64>() < n / kf - 1e-9 {
            prop_assert!(scaled.iter().sum::<f64>() < c.iter().sum::<f64>());
        }
    }

    #[test]
    fn integer_weights_hit_demand(
        n in prop::sample::select(vec![9usize, 12]),
        noise in proptest::collection::vec(0u64..1000, 12),
        missing in proptest::collection::vec((0usize..12, 0usize..12), 0..3),
    ) {
        // dense enough that δ ≥ n − 3 and α ≤ 2
        let mut edges: Vec<(usize, usize)> = Graph::complete(n).edges();
        edges.retain(|&(u, v)| !missing.iter().any(|&(a, b)| (a % n, b % n) == (u, v)));
        let g = Graph::from_edges(n, edges).unwrap();
        let base = BigUint::from(n).pow(6) * 5u32;
        let mut lambda: Vec<BigUint> = (0..n).map(|u| &base + noise[u]).collect();
        let rem = lambda.iter().sum::<BigUint>() % 3u32;
        lambda[0] += (3u32 - rem) % 3u32;

        let w = integer_clique_weights(&g, 3, &lambda, None).unwrap();
        prop_assert_eq!(w.vertex_sums(n), lambda);
        prop_assert!(w.corrections <= n * n * n);
        prop_assert_eq!(w.discrepancy_trace.len(), w.corrections + 1);
        for pair in w.discrepancy_trace.windows(2) {
            prop_assert_eq!(&pair[0], &(&pair[1] + 2u32));
        }
        prop_assert_eq!(w.discrepancy_trace.last().unwrap(), &BigUint::default());
    }
}

#[test]
fn complete_tripartite_packs_fully() {
    let g = complete_tripartite(3, 3, 3).into_graph();
    let r = solve_packing_lp(&g, 3, None).unwrap();
    assert!((r.objective - 3.0).abs() <= TOL);
    assert!(r.fractional_factor);
}

#[test]
fn extremal_graphs_fall_short() {
    for n in [6, 9, 12] {
        let g = hsz_extremal(n, 3).unwrap();
        let r = solve_packing_lp(&g, 3, None).unwrap();
        assert!(r.objective < n as f64 / 3.0 - TOL, "n = {n}: {}", r.objective);
        assert!(!r.fractional_factor);
    }
}
