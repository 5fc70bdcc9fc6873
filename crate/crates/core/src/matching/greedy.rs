use crate::graph::{Graph, Triangle, TriangleMatching, Vertex};

/// Maximal triangle matching built by repeatedly taking the
/// lexicographically least triangle on uncovered vertices.
///
/// With `parts`, only triangles meeting each part once are used and
/// vertices outside the parts are ignored.
pub fn greedy_triangle_matching(g: &Graph, parts: Option<&[Vec<Vertex>; 3]>) -> TriangleMatching {
    let n = g.n();
    let label: Vec<Option<usize>> = match parts {
        Some(ps) => {
            let mut l = vec![None; n];
            for (i, p) in ps.iter().enumerate() {
                for &v in p {
                    if v < n {
                        l[v] = Some(i);
                    }
                }
            }
            l
        }
        None => vec![Some(0); n],
    };
    let transversal = parts.is_some();
    let mut free = g.full_set();
    for v in 0..n {
        if label[v].is_none() {
            free.set(v, false);
        }
    }
    let mut out = TriangleMatching::new();
    // removing vertices only destroys triangles, so the least remaining
    // triangle never starts below the current vertex
    for a in 0..n {
        if !free.contains(a) {
            continue;
        }
        let mut cand = g.neighbors(a).clone();
        cand.intersect_with(&free);
        let found = cand.ones().filter(|&b| b > a).find_map(|b| {
            if transversal && label[b] == label[a] {
                return None;
            }
            g.neighbors(b)
                .intersection(&cand)
                .find(|&c| c > b && (!transversal || (label[c] != label[a] && label[c] != label[b])))
                .map(|c| (b, c))
        });
        if let Some((b, c)) = found {
            for v in [a, b, c] {
                free.set(v, false);
            }
            out.push(Triangle::new(a, b, c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_tripartite;

    #[test]
    fn examples() {
        let k = complete_tripartite(3, 3, 3);
        let parts = [vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
        assert_eq!(greedy_triangle_matching(k.graph(), Some(&parts)).len(), 3);
        assert_eq!(greedy_triangle_matching(k.graph(), None).len(), 3);
        let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(greedy_triangle_matching(&c6, None).is_empty());
        let m = greedy_triangle_matching(&Graph::complete(7), None);
        assert_eq!(m.triangles(), &[Triangle::new(0, 1, 2), Triangle::new(3, 4, 5)]);
    }

    #[test]
    fn transversal_restriction() {
        let g = Graph::complete(6);
        let parts = [vec![0, 1], vec![2, 3], vec![4, 5]];
        let m = greedy_triangle_matching(&g, Some(&parts));
        assert_eq!(m.len(), 2);
        for t in m.triangles() {
            let [a, b, c] = t.vertices();
            assert!(a / 2 != b / 2 && b / 2 != c / 2 && a / 2 != c / 2);
        }
    }
}
