use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use log::warn;
use serde::{Deserialize, Serialize};

use super::reveal::RevealState;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Triangle, TriangleMatching, Vertex};

/// An edge `e` with its admissible apex set `X_e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTarget {
    pub edge: Edge,
    pub apexes: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelpReport {
    pub matching: TriangleMatching,
    /// `(e, x)` for every triangle, in discovery order.
    pub pairs: Vec<(Edge, Vertex)>,
    /// `|E|` after shrinking to at most `μ²n²` edges.
    pub edge_count: usize,
    /// `|E| / (10μn)`.
    pub goal: f64,
    pub goal_met: bool,
    pub revealed: usize,
    pub repeat_reveals: usize,
    pub warnings: Vec<String>,
}

/// Validates shapes and returns the targets sorted by edge, shrunk to at
/// most `μ²n²` edges, plus size warnings.
pub(crate) fn prepare_targets(g: &Graph, targets: &[EdgeTarget], mu: f64) -> Result<(Vec<EdgeTarget>, Vec<String>)> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("edge set E is empty".into()));
    }
    let n = g.n();
    let nf = n as f64;
    let mut in_e = FixedBitSet::with_capacity(n);
    let mut deg: HashMap<Vertex, usize> = HashMap::new();
    let mut sorted: Vec<EdgeTarget> = Vec::with_capacity(targets.len());
    for t in targets {
        let (a, b) = t.edge;
        g.check_vertex(a)?;
        g.check_vertex(b)?;
        if !g.has_edge(a, b) {
            return Err(Error::InvalidArgument(format!("{a}-{b} is not an edge of G")));
        }
        in_e.insert(a);
        in_e.insert(b);
        *deg.entry(a).or_default() += 1;
        *deg.entry(b).or_default() += 1;
        let mut apexes = t.apexes.clone();
        apexes.sort_unstable();
        apexes.dedup();
        sorted.push(EdgeTarget {
            edge: (a.min(b), a.max(b)),
            apexes,
        });
    }
    for t in &sorted {
        let (a, b) = t.edge;
        for &x in &t.apexes {
            g.check_vertex(x)?;
            if in_e.contains(x) {
                return Err(Error::InvalidArgument(format!("apex {x} lies in V(E)")));
            }
            if !g.has_edge(a, x) || !g.has_edge(b, x) {
                return Err(Error::InvalidArgument(format!(
                    "apex {x} is not a common neighbour of {a}-{b}"
                )));
            }
        }
    }
    sorted.sort_by_key(|x| x.edge);
    sorted.dedup_by(|x, y| x.edge == y.edge);

    let mut warnings = Vec::new();
    let max_deg = deg.values().copied().max().unwrap_or(0);
    if max_deg as f64 > mu * nf {
        warnings.push(format!("Δ(E) = {max_deg} exceeds μn"));
    }
    if (sorted.len() as f64) < mu * nf {
        warnings.push(format!("|E| = {} is below μn", sorted.len()));
    }
    let cap = (mu * mu * nf * nf).floor() as usize;
    if sorted.len() > cap {
        sorted.truncate(cap.max(1));
    }
    if let Some(t) = sorted.iter().find(|t| (t.apexes.len() as f64) < mu * nf) {
        warnings.push(format!("|X_e| = {} is below μn for {:?}", t.apexes.len(), t.edge));
    }
    Ok((sorted, warnings))
}

/// Single lexicographic pass: each edge of `E` whose endpoints are free is
/// extended by the first free apex forming a triangle of `G_p`. The result
/// is maximal among such triangles.
pub(crate) fn help_with_state(
    state: &mut RevealState<'_>,
    targets: &[EdgeTarget],
    blocked: &FixedBitSet,
    limit: usize,
) -> Vec<(Edge, Vertex)> {
    let mut used = blocked.clone();
    let mut out = Vec::new();
    for t in targets {
        if out.len() == limit {
            break;
        }
        let (a, b) = t.edge;
        if used.contains(a) || used.contains(b) || !state.status(a, b) {
            continue;
        }
        let apex = t
            .apexes
            .iter()
            .copied()
            .filter(|&x| !used.contains(x))
            .find(|&x| state.status(a, x) && state.status(b, x));
        if let Some(x) = apex {
            for w in [a, b, x] {
                used.insert(w);
            }
            out.push(((a, b), x));
        }
    }
    out
}

pub(crate) fn to_matching(pairs: &[(Edge, Vertex)]) -> TriangleMatching {
    TriangleMatching::from_unchecked(pairs.iter().map(|&((a, b), x)| Triangle::new(a, b, x)).collect())
}

/// Greedy triangle matching in `G_p` whose triangles are an edge `e ∈ E`
/// plus an apex from `X_e`.
pub fn match_cover_help(g: &Graph, p: f64, targets: &[EdgeTarget], mu: f64, seed: u64) -> Result<HelpReport> {
    crate::sparsify::check_probability(p)?;
    let (targets, warnings) = prepare_targets(g, targets, mu)?;
    for w in &warnings {
        warn!("match_cover_help: {w}");
    }
    let mut state = RevealState::new(g, p, seed);
    let pairs = help_with_state(&mut state, &targets, &FixedBitSet::with_capacity(g.n()), usize::MAX);
    let goal = targets.len() as f64 / (10.0 * mu * g.n() as f64);
    Ok(HelpReport {
        matching: to_matching(&pairs),
        goal_met: pairs.len() as f64 >= goal,
        pairs,
        edge_count: targets.len(),
        goal,
        revealed: state.revealed_count(),
        repeat_reveals: state.repeat_reveals,
        warnings,
    })
}
