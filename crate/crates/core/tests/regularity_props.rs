mod common;

use std::ops::RangeInclusive;

use common::{cross, members, regular_oracle};
use proptest::prelude::*;
use trifactor::regularity::{check_regular_pair, density, exact_density_subgraph, RegularityMode};
use trifactor::Graph;

/// Bipartite graph with sides `0..a` and `a..a+b`.
fn bipartite(
    a: RangeInclusive<usize>,
    b: RangeInclusive<usize>,
    p: f64,
) -> impl Strategy<Value = (Graph, usize, usize)> {
    (a, b).prop_flat_map(move |(a, b)| {
        proptest::collection::vec(proptest::bool::weighted(p), a * b).prop_map(move |bits| {
            let edges = (0..a)
                .flat_map(|i| (0..b).map(move |j| (i, a + j)))
                .zip(bits)
                .filter(|(_, keep)| *keep)
                .map(|(e, _)| e);
            (Graph::from_edges(a + b, edges).unwrap(), a, b)
        })
    })
}

fn sides(a: usize, b: usize) -> (Vec<usize>, Vec<usize>) {
    ((0..a).collect(), (a..a + b).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_mode_matches_oracle((g, a, b) in bipartite(1..=6, 1..=6, 0.6), num in 1i64..=6) {
        let (sa, sb) = sides(a, b);
        let eps = num as f64 / 8.0;
        let v = check_regular_pair(&g, &sa, &sb, eps, RegularityMode::Exact).unwrap();
        prop_assert_eq!(v.pass, regular_oracle(&g, &sa, &sb, num));
        if let Some(w) = v.witness {
            prop_assert!(!v.pass);
            let (nx, ny, na, nb) = (w.x.len() as i64, w.y.len() as i64, a as i64, b as i64);
            prop_assert!(8 * nx >= num * na && 8 * ny >= num * nb);
            let dev = (cross(&g, &w.x, &w.y) * na * nb - cross(&g, &sa, &sb) * nx * ny).abs();
            prop_assert!(8 * dev >= num * nx * ny * na * nb);
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 50_000, ..ProptestConfig::default() })]

    #[test]
    fn slices_stay_regular(
        (g, a, b) in bipartite(2..=7, 2..=7, 0.9),
        eps_num in 2i64..=3,
        keep_a in any::<u32>(),
        keep_b in any::<u32>(),
    ) {
        let (sa, sb) = sides(a, b);
        let eps = eps_num as f64 / 8.0;
        let beta = 0.5;
        prop_assume!(check_regular_pair(&g, &sa, &sb, eps, RegularityMode::Exact).unwrap().pass);
        let u1 = members(keep_a, &sa);
        let u2 = members(keep_b, &sb);
        prop_assume!(u1.len() as f64 >= beta * a as f64 && u2.len() as f64 >= beta * b as f64);
        let eps_slice = (eps / beta).max(2.0 * eps);
        let v = check_regular_pair(&g, &u1, &u2, eps_slice, RegularityMode::Exact).unwrap();
        prop_assert!(v.pass);
        let d_all = density(&g, &sa, &sb).unwrap();
        let d_cut = density(&g, &u1, &u2).unwrap();
        let gap = (*d_all.numer() as f64 / *d_all.denom() as f64 - *d_cut.numer() as f64 / *d_cut.denom() as f64).abs();
        prop_assert!(gap < eps);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_density_postconditions(seed: u64, (g, _, _) in bipartite(10..=10, 10..=10, 0.85)) {
        let (v1, v2) = sides(10, 10);
        let (d, eps) = (0.5, 0.1);
        prop_assume!(cross(&g, &v1, &v2) >= 50);
        let r = match exact_density_subgraph(&g, &v1, &v2, d, eps, seed) {
            Ok(r) => r,
            // too many protected edges is a legitimate refusal
            Err(trifactor::Error::Precondition(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(r.graph.is_subgraph_of(&g));
        prop_assert_eq!(r.edge_count, 50);
        prop_assert_eq!(cross(&r.graph, &v1, &v2), 50);
        for side in &r.low_degree {
            for &y in side {
                prop_assert_eq!(r.graph.degree(y), g.degree(y));
            }
        }
    }
}
