mod common;

use common::{dense_graph, triangles_naive};
use proptest::prelude::*;
use trifactor::generators::gnq;
use trifactor::matching::{
    check_composition, cover_special_vertices, greedy_triangle_matching, match_cover, match_cover_help, EdgeTarget,
    MatchCoverInput, SpecialVertex,
};
use trifactor::{Graph, TriangleMatching};

fn disjoint_and_present(m: &TriangleMatching, g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    m.triangles().iter().all(|t| {
        t.is_in(g)
            && t.vertices().iter().all(|&v| {
                let fresh = !seen[v];
                seen[v] = true;
                fresh
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn greedy_is_maximal(g in dense_graph(3, 15, 0.6)) {
        let m = greedy_triangle_matching(&g, None);
        prop_assert!(disjoint_and_present(&m, &g));
        let free: Vec<bool> = (0..g.n()).map(|v| !m.covers(v)).collect();
        prop_assert!(!triangles_naive(&g).iter().any(|t| t.iter().all(|&v| free[v])));
    }

    #[test]
    fn cover_respects_contracts(seed: u64, q in 0.6f64..1.0, p in 0.2f64..1.0, s in 1usize..5) {
        let n = 45;
        let g = gnq(n, q, seed).unwrap();
        let specials: Vec<SpecialVertex> = (0..s)
            .map(|v| SpecialVertex {
                vertex: v,
                edges: g.triangle_link(v).unwrap().into_iter().filter(|&(a, b)| a >= s && b >= s).collect(),
            })
            .collect();
        let quotas = vec![(s..s + 10).collect::<Vec<_>>(), (30..45).collect()];
        let mu = 0.1;
        let r = cover_special_vertices(&g, p, &specials, &quotas, mu, seed).unwrap();
        prop_assert_eq!(r.repeat_reveals, 0);
        prop_assert_eq!(&r, &cover_special_vertices(&g, p, &specials, &quotas, mu, seed).unwrap());
        if let Some(m) = &r.matching {
            prop_assert!(disjoint_and_present(m, &g));
            prop_assert_eq!(m.len(), s);
            for (t, sp) in m.triangles().iter().zip(&specials) {
                let others: Vec<usize> = t.vertices().into_iter().filter(|&x| x != sp.vertex).collect();
                prop_assert_eq!(others.len(), 2);
                prop_assert!(sp.edges.contains(&(others[0], others[1])));
            }
            prop_assert!(r.quota_ok);
            for (qset, &used) in quotas.iter().zip(&r.quota_usage) {
                prop_assert!(used as f64 <= 12.0 * mu * qset.len() as f64 + 1.0);
            }
        }
    }

    #[test]
    fn match_cover_composition(seed: u64, p in 0.3f64..1.0, n2 in 0usize..3, n3 in 0usize..3) {
        let n = 60;
        let g = gnq(n, 0.9, seed).unwrap();
        let x1: Vec<usize> = (0..20).collect();
        let edges: Vec<(usize, usize)> = g.edges().into_iter().filter(|&(a, b)| a < 20 && b < 20).collect();
        let input = MatchCoverInput::One {
            sets: [x1, (20..40).collect(), (40..60).collect()],
            edges,
            counts: [n2, n3],
        };
        let r = match_cover(&g, p, &input, 0.2, seed).unwrap();
        prop_assert_eq!(r.repeat_reveals, 0);
        prop_assert_eq!(&r, &match_cover(&g, p, &input, 0.2, seed).unwrap());
        if let Some(m) = &r.matching {
            prop_assert!(disjoint_and_present(m, &g));
            prop_assert_eq!(m.len(), n2 + n3);
            prop_assert!(check_composition(&g, &input, &r));
        }
    }

    #[test]
    fn help_pairs_are_triangles(seed: u64, p in 0.3f64..1.0) {
        let n = 60;
        let g = gnq(n, 0.9, seed).unwrap();
        let targets: Vec<EdgeTarget> = g
            .edges()
            .into_iter()
            .filter(|&(a, b)| a < 30 && b < 30)
            .map(|(a, b)| EdgeTarget {
                edge: (a, b),
                apexes: (30..60).filter(|&x| g.has_edge(a, x) && g.has_edge(b, x)).collect(),
            })
            .collect();
        let r = match_cover_help(&g, p, &targets, 0.2, seed).unwrap();
        prop_assert_eq!(r.repeat_reveals, 0);
        prop_assert!(disjoint_and_present(&r.matching, &g));
        prop_assert_eq!(r.matching.len(), r.pairs.len());
        for &((a, b), x) in &r.pairs {
            prop_assert!(targets.iter().any(|t| t.edge == (a, b) && t.apexes.contains(&x)));
        }
    }
}
