use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use log::warn;
use serde::{Deserialize, Serialize};

use super::cover::{cover_with_state, SpecialVertex};
use super::help::{help_with_state, prepare_targets, EdgeTarget};
use super::reveal::RevealState;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Triangle, TriangleMatching, Vertex};
use crate::sparsify::{check_probability, round_seed};

/// Input sets for the two configurations handled by [`match_cover`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchCoverInput {
    /// Edges `E` inside `X_1`; `counts[0]` triangles take their apex from
    /// `X_2`, `counts[1]` from `X_3`.
    One {
        sets: [Vec<Vertex>; 3],
        edges: Vec<Edge>,
        counts: [usize; 2],
    },
    /// Edges `E_i` inside `X_i`; `counts[i]` triangles use an edge of
    /// `E_i` and an apex from the other set.
    Two {
        sets: [Vec<Vertex>; 2],
        edges: [Vec<Edge>; 2],
        counts: [usize; 2],
    },
}

/// One triangle with its composition: `edge` from the edge class `class`
/// plus `apex`. In mode one `class` is the index of the apex set (1 or 2
/// for `X_2`, `X_3` in zero-based terms); in mode two it is the index of
/// the edge set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComposedTriangle {
    pub edge: Edge,
    pub apex: Vertex,
    pub class: usize,
    pub phase: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchCoverReport {
    pub matching: Option<TriangleMatching>,
    pub composition: Vec<ComposedTriangle>,
    /// Zero-based phase that fell short.
    pub failed_phase: Option<usize>,
    /// Triangles demanded of each phase.
    pub phase_targets: [usize; 3],
    /// Size of the high-degree set(s) handled in the last phase.
    pub high_degree: usize,
    pub revealed: usize,
    pub repeat_reveals: usize,
    pub warnings: Vec<String>,
}

struct Rounds<'g> {
    states: Vec<RevealState<'g>>,
}

impl<'g> Rounds<'g> {
    fn new(g: &'g Graph, p: f64, seed: u64) -> Self {
        Rounds {
            states: (0..3)
                .map(|r| RevealState::new(g, p / 3.0, round_seed(seed, r)))
                .collect(),
        }
    }

    fn revealed(&self) -> usize {
        self.states.iter().map(|s| s.revealed_count()).sum()
    }

    fn repeats(&self) -> usize {
        self.states.iter().map(|s| s.repeat_reveals).sum()
    }
}

fn to_set(n: usize, vs: &[Vertex]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for &v in vs {
        s.insert(v);
    }
    s
}

fn norm(e: Edge) -> Edge {
    (e.0.min(e.1), e.0.max(e.1))
}

fn check_edges_inside(g: &Graph, edges: &[Edge], inside: &FixedBitSet, name: &str) -> Result<()> {
    for &(a, b) in edges {
        g.check_vertex(a)?;
        g.check_vertex(b)?;
        if !g.has_edge(a, b) {
            return Err(Error::InvalidArgument(format!("{a}-{b} is not an edge of G")));
        }
        if !inside.contains(a) || !inside.contains(b) {
            return Err(Error::InvalidArgument(format!("edge {a}-{b} leaves {name}")));
        }
    }
    Ok(())
}

fn check_disjoint(g: &Graph, sets: &[&[Vertex]]) -> Result<()> {
    let mut seen = FixedBitSet::with_capacity(g.n());
    for s in sets {
        for &v in *s {
            g.check_vertex(v)?;
            if seen.put(v) {
                return Err(Error::InvalidArgument(format!("vertex sets are not disjoint at {v}")));
            }
        }
    }
    Ok(())
}

fn edge_degrees(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(a, b) in edges {
        d[a] += 1;
        d[b] += 1;
    }
    d
}

/// Edges with both ends in `within`, each with apexes `N(e) ∩ pool`.
fn targets_inside(g: &Graph, edges: &[Edge], within: &FixedBitSet, pool: &FixedBitSet) -> Vec<EdgeTarget> {
    edges
        .iter()
        .filter(|&&(a, b)| within.contains(a) && within.contains(b))
        .map(|&(a, b)| {
            let mut common = g.neighbors(a).clone();
            common.intersect_with(g.neighbors(b));
            common.intersect_with(pool);
            EdgeTarget {
                edge: norm((a, b)),
                apexes: common.ones().collect(),
            }
        })
        .filter(|t| !t.apexes.is_empty())
        .collect()
}

/// Runs one helper phase: needs `want` triangles from `targets`.
fn help_phase(
    g: &Graph,
    state: &mut RevealState<'_>,
    targets: Vec<EdgeTarget>,
    mu: f64,
    blocked: &FixedBitSet,
    want: usize,
    warnings: &mut Vec<String>,
) -> Option<Vec<(Edge, Vertex)>> {
    if want == 0 {
        return Some(Vec::new());
    }
    if targets.is_empty() {
        return None;
    }
    let (targets, w) = prepare_targets(g, &targets, mu).ok()?;
    warnings.extend(w);
    let pairs = help_with_state(state, &targets, blocked, want);
    (pairs.len() == want).then_some(pairs)
}

/// Special vertex `v` whose admissible edges are `(a, x)` with `va ∈ E`,
/// `a ∈ own`, `x ∈ other` and `vax` a triangle of `G`.
fn special_for(g: &Graph, v: Vertex, e_adj: &[Vec<Vertex>], own: &FixedBitSet, other: &FixedBitSet) -> SpecialVertex {
    let mut edges = Vec::new();
    for &a in &e_adj[v] {
        if !own.contains(a) {
            continue;
        }
        let mut common = g.neighbors(v).clone();
        common.intersect_with(g.neighbors(a));
        common.intersect_with(other);
        edges.extend(common.ones().map(|x| norm((a, x))));
    }
    edges.sort_unstable();
    edges.dedup();
    SpecialVertex { vertex: v, edges }
}

fn adjacency_lists(n: usize, edges: &[Edge]) -> Vec<Vec<Vertex>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Finds a triangle matching of `G_p` with a prescribed composition, by the
/// three-round process: two helper rounds on the low-degree edges and a
/// final round covering the high-degree vertices one by one.
///
/// The returned report carries `matching: None` if any phase falls short.
pub fn match_cover(g: &Graph, p: f64, input: &MatchCoverInput, mu: f64, seed: u64) -> Result<MatchCoverReport> {
    check_probability(p)?;
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidArgument(format!("mu = {mu} outside (0, 1)")));
    }
    let report = match input {
        MatchCoverInput::One { sets, edges, counts } => mode_one(g, p, sets, edges, *counts, mu, seed)?,
        MatchCoverInput::Two { sets, edges, counts } => mode_two(g, p, sets, edges, *counts, mu, seed)?,
    };
    for w in &report.warnings {
        warn!("match_cover: {w}");
    }
    Ok(report)
}

fn size_warnings(n: usize, sets: &[&[Vertex]], warnings: &mut Vec<String>) {
    for (i, s) in sets.iter().enumerate() {
        if s.len() * 10 < n {
            warnings.push(format!("|X_{}| = {} is below n/10", i + 1, s.len()));
        }
    }
}

fn finish(
    rounds: &Rounds<'_>,
    composition: Vec<ComposedTriangle>,
    failed_phase: Option<usize>,
    phase_targets: [usize; 3],
    high_degree: usize,
    warnings: Vec<String>,
) -> MatchCoverReport {
    let matching = failed_phase.is_none().then(|| {
        TriangleMatching::from_unchecked(
            composition
                .iter()
                .map(|c| Triangle::new(c.edge.0, c.edge.1, c.apex))
                .collect(),
        )
    });
    MatchCoverReport {
        matching,
        composition,
        failed_phase,
        phase_targets,
        high_degree,
        revealed: rounds.revealed(),
        repeat_reveals: rounds.repeats(),
        warnings,
    }
}

fn mode_one(
    g: &Graph,
    p: f64,
    sets: &[Vec<Vertex>; 3],
    edges: &[Edge],
    counts: [usize; 2],
    mu: f64,
    seed: u64,
) -> Result<MatchCoverReport> {
    let n = g.n();
    let nf = n as f64;
    check_disjoint(g, &[&sets[0], &sets[1], &sets[2]])?;
    let x: Vec<FixedBitSet> = sets.iter().map(|s| to_set(n, s)).collect();
    check_edges_inside(g, edges, &x[0], "X_1")?;
    let mut edges: Vec<Edge> = edges.iter().map(|&e| norm(e)).collect();
    edges.sort_unstable();
    edges.dedup();

    let mut warnings = Vec::new();
    size_warnings(n, &[&sets[0], &sets[1], &sets[2]], &mut warnings);
    let deg = edge_degrees(n, &edges);
    let delta = sets[0].iter().map(|&v| deg[v]).min().unwrap_or(0);
    let [n2, n3] = counts;
    let total = n2 + n3;
    if total > delta || total as f64 > mu.powi(5) * nf {
        warnings.push(format!(
            "n_2 + n_3 = {total} exceeds min(δ_E = {delta}, μ⁵n = {:.3})",
            mu.powi(5) * nf
        ));
    }
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| {
        x[1..].iter().any(|xi| {
            let mut c = g.neighbors(a).clone();
            c.intersect_with(g.neighbors(b));
            (c.intersection(xi).count() as f64) < mu * nf
        })
    }) {
        warnings.push(format!(
            "edge {a}-{b} has fewer than μn common neighbours in X_2 or X_3"
        ));
    }

    let mut rounds = Rounds::new(g, p, seed);
    if total == 0 {
        return Ok(finish(&rounds, Vec::new(), None, [0; 3], 0, warnings));
    }

    let mut high: Vec<Vertex> = sets[0].iter().copied().filter(|&v| deg[v] as f64 >= mu * nf).collect();
    high.sort_unstable();
    let mut s = x[0].clone();
    for &v in &high {
        s.set(v, false);
    }
    let (n2p, n3p) = if high.len() >= total {
        (0, 0)
    } else {
        let n2p = (total - high.len()).min(n2);
        (n2p, total - high.len() - n2p)
    };
    let (n2pp, n3pp) = (n2 - n2p, n3 - n3p);
    let targets = [n2p, n3p, n2pp + n3pp];

    let mut composition = Vec::with_capacity(total);
    let mut used = FixedBitSet::with_capacity(n);

    // phase 1 in G_1, phase 2 in G_2
    for (phase, want) in [n2p, n3p].into_iter().enumerate() {
        let mut within = s.clone();
        within.difference_with(&used);
        let mut pool = x[phase + 1].clone();
        pool.difference_with(&used);
        let t = targets_inside(g, &edges, &within, &pool);
        let Some(pairs) = help_phase(g, &mut rounds.states[phase], t, mu, &used, want, &mut warnings) else {
            return Ok(finish(&rounds, composition, Some(phase), targets, high.len(), warnings));
        };
        for ((a, b), apex) in pairs {
            for w in [a, b, apex] {
                used.insert(w);
            }
            composition.push(ComposedTriangle {
                edge: (a, b),
                apex,
                class: phase + 1,
                phase,
            });
        }
    }

    // phase 3 in G_3
    let remaining: Vec<FixedBitSet> = x
        .iter()
        .map(|xi| {
            let mut r = xi.clone();
            r.difference_with(&used);
            r
        })
        .collect();
    let e_adj = adjacency_lists(n, &edges);
    let mut specials = Vec::with_capacity(n2pp + n3pp);
    let mut classes = Vec::with_capacity(n2pp + n3pp);
    for (idx, &v) in high.iter().take(n2pp + n3pp).enumerate() {
        let class = if idx < n2pp { 1 } else { 2 };
        specials.push(special_for(g, v, &e_adj, &remaining[0], &remaining[class]));
        classes.push(class);
    }
    let run = cover_with_state(&mut rounds.states[2], &specials, &[], mu, &used);
    let Some(tris) = run.triangles else {
        return Ok(finish(&rounds, composition, Some(2), targets, high.len(), warnings));
    };
    for ((sp, tri), class) in specials.iter().zip(tris).zip(classes) {
        let v = sp.vertex;
        let [a, b, c] = tri.vertices();
        let others: Vec<Vertex> = [a, b, c].into_iter().filter(|&w| w != v).collect();
        // the partner in X_1 forms the E-edge with v
        let (mate, apex) = if remaining[0].contains(others[0]) {
            (others[0], others[1])
        } else {
            (others[1], others[0])
        };
        composition.push(ComposedTriangle {
            edge: norm((v, mate)),
            apex,
            class,
            phase: 2,
        });
    }
    Ok(finish(&rounds, composition, None, targets, high.len(), warnings))
}

fn mode_two(
    g: &Graph,
    p: f64,
    sets: &[Vec<Vertex>; 2],
    edges: &[Vec<Edge>; 2],
    counts: [usize; 2],
    mu: f64,
    seed: u64,
) -> Result<MatchCoverReport> {
    let n = g.n();
    let nf = n as f64;
    let mu2 = mu / 2.0;
    check_disjoint(g, &[&sets[0], &sets[1]])?;
    let x: Vec<FixedBitSet> = sets.iter().map(|s| to_set(n, s)).collect();
    let mut e: [Vec<Edge>; 2] = [Vec::new(), Vec::new()];
    for i in 0..2 {
        check_edges_inside(g, &edges[i], &x[i], if i == 0 { "X_1" } else { "X_2" })?;
        e[i] = edges[i].iter().map(|&f| norm(f)).collect();
        e[i].sort_unstable();
        e[i].dedup();
    }

    let mut warnings = Vec::new();
    size_warnings(n, &[&sets[0], &sets[1]], &mut warnings);
    let deg: Vec<Vec<usize>> = e.iter().map(|ei| edge_degrees(n, ei)).collect();
    for i in 0..2 {
        let delta = sets[i].iter().map(|&v| deg[i][v]).min().unwrap_or(0);
        if counts[i] > delta || counts[i] as f64 > mu.powi(5) * nf {
            warnings.push(format!(
                "n_{} = {} exceeds min(δ_{} = {delta}, μ⁵n = {:.3})",
                i + 1,
                counts[i],
                i + 1,
                mu.powi(5) * nf
            ));
        }
    }

    let mut rounds = Rounds::new(g, p, seed);
    if counts == [0, 0] {
        return Ok(finish(&rounds, Vec::new(), None, [0; 3], 0, warnings));
    }

    let high: Vec<Vec<Vertex>> = (0..2)
        .map(|i| {
            let mut b: Vec<Vertex> = sets[i]
                .iter()
                .copied()
                .filter(|&v| deg[i][v] as f64 >= mu2 * nf)
                .collect();
            b.sort_unstable();
            b.truncate(counts[i]);
            b
        })
        .collect();
    let mut s: Vec<FixedBitSet> = (0..2)
        .map(|i| {
            let mut si = x[i].clone();
            for &v in &high[i] {
                si.set(v, false);
            }
            si
        })
        .collect();
    let np = [counts[0] - high[0].len(), counts[1] - high[1].len()];
    let order = if np[0] <= np[1] { [0, 1] } else { [1, 0] };
    let n_high = high[0].len() + high[1].len();
    let targets = [np[order[0]], np[order[1]], n_high];

    let mut composition = Vec::with_capacity(counts[0] + counts[1]);
    let mut used = FixedBitSet::with_capacity(n);
    for (phase, &i) in order.iter().enumerate() {
        let t = targets_inside(g, &e[i], &s[i], &s[1 - i]);
        let Some(pairs) = help_phase(g, &mut rounds.states[phase], t, mu2, &used, np[i], &mut warnings) else {
            return Ok(finish(&rounds, composition, Some(phase), targets, n_high, warnings));
        };
        for ((a, b), apex) in pairs {
            for w in [a, b, apex] {
                used.insert(w);
                s[0].set(w, false);
                s[1].set(w, false);
            }
            composition.push(ComposedTriangle {
                edge: (a, b),
                apex,
                class: i,
                phase,
            });
        }
    }

    let e_adj: Vec<Vec<Vec<Vertex>>> = e.iter().map(|ei| adjacency_lists(n, ei)).collect();
    let mut specials = Vec::with_capacity(n_high);
    let mut classes = Vec::with_capacity(n_high);
    for i in 0..2 {
        for &v in &high[i] {
            specials.push(special_for(g, v, &e_adj[i], &s[i], &s[1 - i]));
            classes.push(i);
        }
    }
    let run = cover_with_state(&mut rounds.states[2], &specials, &[], mu2, &used);
    let Some(tris) = run.triangles else {
        return Ok(finish(&rounds, composition, Some(2), targets, n_high, warnings));
    };
    for ((sp, tri), i) in specials.iter().zip(tris).zip(classes) {
        let v = sp.vertex;
        let others: Vec<Vertex> = tri.vertices().into_iter().filter(|&w| w != v).collect();
        let (mate, apex) = if s[i].contains(others[0]) {
            (others[0], others[1])
        } else {
            (others[1], others[0])
        };
        composition.push(ComposedTriangle {
            edge: norm((v, mate)),
            apex,
            class: i,
            phase: 2,
        });
    }
    Ok(finish(&rounds, composition, None, targets, n_high, warnings))
}

/// Checks the composition contract of a report against its input: disjoint
/// triangles of `g`, edges from the right edge set, apexes from the right
/// vertex set, and the demanded count per class.
pub fn check_composition(g: &Graph, input: &MatchCoverInput, report: &MatchCoverReport) -> bool {
    let Some(m) = &report.matching else {
        return false;
    };
    if !m.is_valid_in(g) {
        return false;
    }
    let n = g.n();
    let (edge_sets, apex_sets, counts): (Vec<HashSet<Edge>>, Vec<FixedBitSet>, [usize; 2]) = match input {
        MatchCoverInput::One { sets, edges, counts } => {
            let es: HashSet<Edge> = edges.iter().map(|&e| norm(e)).collect();
            (
                vec![HashSet::new(), es.clone(), es],
                sets.iter().map(|s| to_set(n, s)).collect(),
                *counts,
            )
        }
        MatchCoverInput::Two { sets, edges, counts } => (
            edges.iter().map(|ei| ei.iter().map(|&e| norm(e)).collect()).collect(),
            vec![to_set(n, &sets[1]), to_set(n, &sets[0])],
            *counts,
        ),
    };
    let mut seen = [0usize; 2];
    for c in &report.composition {
        let (edge_class, apex_class, slot) = match input {
            MatchCoverInput::One { .. } => (c.class, c.class, c.class.wrapping_sub(1)),
            MatchCoverInput::Two { .. } => (c.class, c.class, c.class),
        };
        if slot > 1 || !edge_sets[edge_class].contains(&norm(c.edge)) || !apex_sets[apex_class].contains(c.apex) {
            return false;
        }
        seen[slot] += 1;
    }
    seen == counts
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `K_n` split into thirds, `E` a perfect matching on the first third:
    /// every `E`-degree is 1, so no vertex is high-degree.
    fn sparse_edge_instance(n: usize, counts: [usize; 2]) -> (Graph, MatchCoverInput) {
        let g = Graph::complete(n);
        let t = n / 3;
        let sets = [(0..t).collect(), (t..2 * t).collect(), (2 * t..n).collect()];
        let edges = (0..t / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        (g, MatchCoverInput::One { sets, edges, counts })
    }

    #[test]
    fn zero_counts_give_empty_matching() {
        let (g, input) = sparse_edge_instance(30, [0, 0]);
        let r = match_cover(&g, 0.5, &input, 0.05, 1).unwrap();
        assert!(r.matching.unwrap().is_empty());
    }

    #[test]
    fn low_degree_instance_uses_only_helper_phases() {
        let (g, input) = sparse_edge_instance(60, [2, 3]);
        let r = match_cover(&g, 1.0, &input, 0.05, 7).unwrap();
        // p/3 per round leaves G_1 ∪ G_2 dense enough at this size
        assert_eq!(r.high_degree, 0);
        assert_eq!(r.phase_targets, [2, 3, 0]);
        assert!(r.failed_phase.is_none(), "{:?}", r.failed_phase);
        assert!(check_composition(&g, &input, &r));
        assert!(r.composition.iter().all(|c| c.phase < 2));
        assert_eq!(r.repeat_reveals, 0);
    }

    #[test]
    fn high_degree_vertices_go_to_last_phase() {
        // star-like E: vertex 0 adjacent in E to the whole first third
        let n = 60;
        let g = Graph::complete(n);
        let sets = [(0..20).collect(), (20..40).collect(), (40..60).collect()];
        let edges: Vec<Edge> = (1..20).map(|v| (0, v)).collect();
        let input = MatchCoverInput::One {
            sets,
            edges,
            counts: [1, 0],
        };
        // μn = 3: vertex 0 has E-degree 19
        let r = match_cover(&g, 1.0, &input, 0.05, 2).unwrap();
        assert_eq!(r.high_degree, 1);
        assert_eq!(r.phase_targets, [0, 0, 1]);
        assert!(check_composition(&g, &input, &r));
    }

    #[test]
    fn mode_two_on_complete_graph() {
        let n = 60;
        let g = Graph::complete(n);
        let x1: Vec<Vertex> = (0..30).collect();
        let x2: Vec<Vertex> = (30..60).collect();
        let e1 = (0..15).map(|i| (2 * i, 2 * i + 1)).collect();
        let e2: Vec<Edge> = (31..60).map(|v| (30, v)).collect();
        let input = MatchCoverInput::Two {
            sets: [x1, x2],
            edges: [e1, e2],
            counts: [2, 1],
        };
        // μ large enough that the μ'²n² edge cap keeps all of E_1
        let r = match_cover(&g, 1.0, &input, 0.2, 4).unwrap();
        assert_eq!(r.high_degree, 1);
        assert!(check_composition(&g, &input, &r), "{r:?}");
    }

    #[test]
    fn shape_errors() {
        let g = Graph::complete(12);
        let overlapping = MatchCoverInput::One {
            sets: [vec![0, 1], vec![1, 2], vec![3]],
            edges: vec![],
            counts: [0, 0],
        };
        assert!(match_cover(&g, 0.5, &overlapping, 0.05, 1).is_err());
        let leaving = MatchCoverInput::One {
            sets: [vec![0, 1], vec![2], vec![3]],
            edges: vec![(0, 2)],
            counts: [0, 0],
        };
        assert!(match_cover(&g, 0.5, &leaving, 0.05, 1).is_err());
    }
}
