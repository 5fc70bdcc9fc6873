#![allow(dead_code)]

use proptest::prelude::*;
use trifactor::{Edge, Graph, TripartiteGraph, Vertex};

/// Graph on `lo..=hi` vertices, each pair an edge with the drawn bit.
pub fn graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

/// Graph whose pairs are edges with probability about `density`.
pub fn dense_graph(lo: usize, hi: usize, density: f64) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(density), n * n.saturating_sub(1) / 2).prop_map(
            move |bits| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
            },
        )
    })
}

/// Balanced tripartite graph with parts of size `lo..=hi`.
pub fn tripartite(lo: usize, hi: usize, density: f64) -> impl Strategy<Value = TripartiteGraph> {
    (lo..=hi).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(density), 3 * n * n).prop_map(move |bits| {
            let mut edges: Vec<Edge> = Vec::new();
            let mut it = bits.into_iter();
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                for i in 0..n {
                    for j in 0..n {
                        if it.next().unwrap() {
                            edges.push((a * n + i, b * n + j));
                        }
                    }
                }
            }
            TripartiteGraph::from_edges([n, n, n], edges).unwrap()
        })
    })
}

/// Every triangle `{a, b, c}` with `a < b < c`, by triple loop.
pub fn triangles_naive(g: &Graph) -> Vec<[Vertex; 3]> {
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Unordered triangle factors, counted by always covering the lowest free
/// vertex first.
pub fn factor_count_naive(g: &Graph) -> u128 {
    fn go(g: &Graph, free: &mut Vec<bool>) -> u128 {
        let Some(a) = free.iter().position(|&f| f) else {
            return 1;
        };
        free[a] = false;
        let mut total = 0;
        for b in a + 1..g.n() {
            if !free[b] || !g.has_edge(a, b) {
                continue;
            }
            free[b] = false;
            for c in b + 1..g.n() {
                if free[c] && g.has_edge(a, c) && g.has_edge(b, c) {
                    free[c] = false;
                    total += go(g, free);
                    free[c] = true;
                }
            }
            free[b] = true;
        }
        free[a] = true;
        total
    }
    if !g.n().is_multiple_of(3) {
        return 0;
    }
    go(g, &mut vec![true; g.n()])
}

pub fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

pub fn falling(n: u128, t: u128) -> u128 {
    (0..t).map(|i| n - i).product()
}

pub fn cross(g: &Graph, xs: &[usize], ys: &[usize]) -> i64 {
    xs.iter()
        .map(|&x| ys.iter().filter(|&&y| g.has_edge(x, y)).count() as i64)
        .sum()
}

pub fn members(mask: u32, side: &[usize]) -> Vec<usize> {
    side.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

/// Regularity at `ε = num/8` by enumerating every subset pair, in integers.
pub fn regular_oracle(g: &Graph, a: &[usize], b: &[usize], num: i64) -> bool {
    let e_ab = cross(g, a, b);
    let (na, nb) = (a.len() as i64, b.len() as i64);
    for xm in 1u32..1 << a.len() {
        let x = members(xm, a);
        if 8 * (x.len() as i64) < num * na {
            continue;
        }
        for ym in 1u32..1 << b.len() {
            let y = members(ym, b);
            if 8 * (y.len() as i64) < num * nb {
                continue;
            }
            let (nx, ny) = (x.len() as i64, y.len() as i64);
            let dev = (cross(g, &x, &y) * na * nb - e_ab * nx * ny).abs();
            if 8 * dev >= num * nx * ny * na * nb {
                return false;
            }
        }
    }
    true
}
