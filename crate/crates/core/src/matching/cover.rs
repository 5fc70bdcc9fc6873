use fixedbitset::FixedBitSet;
use log::warn;
use serde::{Deserialize, Serialize};

use super::reveal::RevealState;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Triangle, TriangleMatching, Vertex};

/// A vertex `v_i` together with its admissible partner edges `E_i ⊆ tr_{v_i}(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialVertex {
    pub vertex: Vertex,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    /// `T_i` contains `v_i`, in the order of the specials.
    pub matching: Option<TriangleMatching>,
    /// Index of the special whose step found no triangle.
    pub failed_at: Option<usize>,
    /// `|A_k ∩ V(𝒯)|` per quota set.
    pub quota_usage: Vec<usize>,
    /// Every quota set satisfies `|A_k ∩ V(𝒯)| ≤ 12μ|A_k| + 1`.
    pub quota_ok: bool,
    pub revealed: usize,
    pub repeat_reveals: usize,
    pub warnings: Vec<String>,
}

pub(crate) fn validate_specials(g: &Graph, specials: &[SpecialVertex], quotas: &[Vec<Vertex>]) -> Result<()> {
    let n = g.n();
    let mut seen = FixedBitSet::with_capacity(n);
    for s in specials {
        g.check_vertex(s.vertex)?;
        if seen.put(s.vertex) {
            return Err(Error::InvalidArgument(format!(
                "special vertex {} listed twice",
                s.vertex
            )));
        }
        for &(a, b) in &s.edges {
            g.check_vertex(a)?;
            g.check_vertex(b)?;
            let v = s.vertex;
            if a == v || b == v || !g.has_edge(a, b) || !g.has_edge(v, a) || !g.has_edge(v, b) {
                return Err(Error::InvalidArgument(format!(
                    "edge {a}-{b} does not form a triangle with {v}"
                )));
            }
        }
    }
    let mut in_quota = FixedBitSet::with_capacity(n);
    for q in quotas {
        for &v in q {
            g.check_vertex(v)?;
            if seen.contains(v) {
                return Err(Error::InvalidArgument(format!("quota set contains special vertex {v}")));
            }
            if in_quota.put(v) {
                return Err(Error::InvalidArgument(format!("quota sets overlap at vertex {v}")));
            }
        }
    }
    Ok(())
}

pub(crate) struct CoverRun {
    pub triangles: Option<Vec<Triangle>>,
    pub failed_at: Option<usize>,
    pub quota_usage: Vec<usize>,
}

/// The step-by-step revealing process on an existing reveal state.
/// `blocked` vertices are never used (already covered elsewhere).
pub(crate) fn cover_with_state(
    state: &mut RevealState<'_>,
    specials: &[SpecialVertex],
    quotas: &[Vec<Vertex>],
    mu: f64,
    blocked: &FixedBitSet,
) -> CoverRun {
    let g = state.graph();
    let n = g.n();
    let mut special_set = FixedBitSet::with_capacity(n);
    for s in specials {
        special_set.insert(s.vertex);
    }
    let mut used = FixedBitSet::with_capacity(n);
    let mut usage = vec![0usize; quotas.len()];
    let mut triangles = Vec::with_capacity(specials.len());
    for (i, s) in specials.iter().enumerate() {
        let v = s.vertex;
        // vertices of full quota sets are off limits
        let mut forbidden = special_set.clone();
        forbidden.union_with(&used);
        forbidden.union_with(blocked);
        for (k, q) in quotas.iter().enumerate() {
            if usage[k] as f64 >= 12.0 * mu * q.len() as f64 {
                for &w in q {
                    forbidden.insert(w);
                }
            }
        }
        let mut s_i = FixedBitSet::with_capacity(n);
        for w in g.neighbors(v).ones() {
            if !forbidden.contains(w) && state.reveal(v, w) {
                s_i.insert(w);
            }
        }
        let mut batch: Vec<Edge> = s
            .edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .filter(|&(a, b)| s_i.contains(a) && s_i.contains(b) && state.is_alive(a, b))
            .collect();
        batch.sort_unstable();
        batch.dedup();
        let mut first = None;
        for (a, b) in batch {
            if state.reveal(a, b) && first.is_none() {
                first = Some((a, b));
            }
        }
        let Some((a, b)) = first else {
            return CoverRun {
                triangles: None,
                failed_at: Some(i),
                quota_usage: usage,
            };
        };
        for w in [v, a, b] {
            used.insert(w);
        }
        for (k, q) in quotas.iter().enumerate() {
            usage[k] += q.iter().filter(|&&w| w == a || w == b).count();
        }
        triangles.push(Triangle::new(v, a, b));
    }
    CoverRun {
        triangles: Some(triangles),
        failed_at: None,
        quota_usage: usage,
    }
}

/// Covers every special vertex `v_i` by a triangle of `G_p` formed with an
/// edge of `E_i`, while using few vertices of each quota set.
pub fn cover_special_vertices(
    g: &Graph,
    p: f64,
    specials: &[SpecialVertex],
    quotas: &[Vec<Vertex>],
    mu: f64,
    seed: u64,
) -> Result<CoverReport> {
    crate::sparsify::check_probability(p)?;
    validate_specials(g, specials, quotas)?;
    let n = g.n() as f64;
    let mut warnings = Vec::new();
    if specials.len() as f64 > mu * mu * n {
        warnings.push(format!("{} special vertices exceed μ²n", specials.len()));
    }
    for s in specials {
        if (s.edges.len() as f64) < mu * n * n {
            warnings.push(format!(
                "special vertex {} has |E_i| = {} < μn²",
                s.vertex,
                s.edges.len()
            ));
        }
    }
    for w in &warnings {
        warn!("cover_special_vertices: {w}");
    }
    let mut state = RevealState::new(g, p, seed);
    let run = cover_with_state(&mut state, specials, quotas, mu, &FixedBitSet::with_capacity(g.n()));
    let quota_ok = quotas
        .iter()
        .zip(&run.quota_usage)
        .all(|(q, &u)| u as f64 <= 12.0 * mu * q.len() as f64 + 1.0);
    Ok(CoverReport {
        matching: run.triangles.map(TriangleMatching::from_unchecked),
        failed_at: run.failed_at,
        quota_usage: run.quota_usage,
        quota_ok,
        revealed: state.revealed_count(),
        repeat_reveals: state.repeat_reveals,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsify::sparsify;

    #[test]
    fn complete_graph_at_p_one() {
        let g = Graph::complete(60);
        let sp = SpecialVertex {
            vertex: 0,
            edges: g.triangle_link(0).unwrap(),
        };
        let r = cover_special_vertices(&g, 1.0, &[sp], &[], 0.05, 1).unwrap();
        let m = r.matching.unwrap();
        assert_eq!(m.len(), 1);
        assert!(m.triangles()[0].contains(0));
        assert_eq!(r.repeat_reveals, 0);
    }

    #[test]
    fn empty_edge_set_fails() {
        let g = Graph::complete(10);
        let sp = SpecialVertex {
            vertex: 3,
            edges: Vec::new(),
        };
        let r = cover_special_vertices(&g, 1.0, &[sp], &[], 0.05, 1).unwrap();
        assert!(r.matching.is_none());
        assert_eq!(r.failed_at, Some(0));
    }

    #[test]
    fn shape_errors() {
        let g = Graph::complete(10);
        let sp = |v| SpecialVertex {
            vertex: v,
            edges: vec![],
        };
        assert!(cover_special_vertices(&g, 0.5, &[sp(1), sp(1)], &[], 0.05, 1).is_err());
        assert!(cover_special_vertices(&g, 0.5, &[sp(1)], &[vec![1, 2]], 0.05, 1).is_err());
        assert!(cover_special_vertices(&g, 0.5, &[sp(1)], &[vec![2, 3], vec![3]], 0.05, 1).is_err());
        let bad = SpecialVertex {
            vertex: 0,
            edges: vec![(0, 1)],
        };
        assert!(cover_special_vertices(&g, 0.5, &[bad], &[], 0.05, 1).is_err());
    }

    #[test]
    fn triangles_lie_in_the_sparsified_graph() {
        let g = Graph::complete(120);
        let specials: Vec<SpecialVertex> = (0..4)
            .map(|v| SpecialVertex {
                vertex: v,
                edges: g.triangle_link(v).unwrap(),
            })
            .collect();
        let quotas = vec![(10..30).collect::<Vec<_>>(), (30..50).collect()];
        for seed in 0..10 {
            let r = cover_special_vertices(&g, 0.5, &specials, &quotas, 0.05, seed).unwrap();
            let gp = sparsify(&g, 0.5, seed).unwrap();
            let m = r.matching.expect("dense instance");
            assert!(m.is_valid_in(&gp));
            assert!(r.quota_ok && r.repeat_reveals == 0);
        }
    }
}
