//! Benchmark graph families.
//!
//! Tripartite families take the part size `n`; every other family takes
//! the total vertex count.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, TripartiteGraph, Vertex};
use crate::io::GraphFile;
use crate::seed;
use crate::sparsify::{self, check_probability, EdgeUniforms};

pub fn complete_tripartite(n1: usize, n2: usize, n3: usize) -> TripartiteGraph {
    let sizes = [n1, n2, n3];
    let n = n1 + n2 + n3;
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    let part = |v: Vertex| {
        if v < n1 {
            0
        } else if v < n1 + n2 {
            1
        } else {
            2
        }
    };
    for u in 0..n {
        for v in 0..n {
            if part(u) != part(v) {
                adj[u].insert(v);
            }
        }
    }
    TripartiteGraph::new(Graph::from_adjacency(adj), sizes).expect("cross-part edges only")
}

/// `K_n` with all edges inside `I = {0, …, n/k}` deleted.
pub fn hsz_extremal(n: usize, k: usize) -> Result<Graph> {
    if k < 2 || n < k || !n.is_multiple_of(k) {
        return Err(Error::InvalidArgument(format!(
            "hsz_extremal needs k ≥ 2 and k | n with n ≥ k (n = {n}, k = {k})"
        )));
    }
    let i = n / k + 1;
    Graph::from_edges(
        n,
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(_, v)| v >= i),
    )
}

/// Complete tripartite graph on `X, Y, Z` with `|X| = n/3 + 2`,
/// `|Y| = |Z| = n/3 − 1`, plus the cycle `0, 1, …, n/3 + 1` on `X`.
pub fn nash_williams_tripartite(n: usize) -> Result<Graph> {
    if !n.is_multiple_of(3) || n < 12 {
        return Err(Error::InvalidArgument(format!(
            "nash_williams_tripartite needs 3 | n and n ≥ 12 (n = {n})"
        )));
    }
    let m = n / 3;
    let x = m + 2;
    let base = complete_tripartite(x, m - 1, m - 1).into_graph();
    let cycle = (0..x).map(|i| (i, (i + 1) % x));
    Graph::from_edges(n, base.edges().into_iter().chain(cycle))
}

/// Binomial random graph `G(n, q)`.
pub fn gnq(n: usize, q: f64, seed: u64) -> Result<Graph> {
    sparsify::sparsify(&Graph::complete(n), q, seed)
}

/// Random balanced tripartite graph with cross-pair density `d`.
pub fn superreg_tripartite(n: usize, d: f64, seed: u64) -> Result<TripartiteGraph> {
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::InvalidArgument(format!("density {d} not in (0, 1]")));
    }
    sparsify::sparsify_tripartite(&complete_tripartite(n, n, n), d, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlantedMode {
    One,
    Two,
}

impl FromStr for PlantedMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "1" => Ok(PlantedMode::One),
            "two" | "2" => Ok(PlantedMode::Two),
            _ => Err(Error::InvalidArgument(format!("unknown planted mode `{s}`"))),
        }
    }
}

/// Dense graph with planted sparse sets.
///
/// `Two`: complete tripartite on three parts of size `n/3` with noise
/// inside each part. `One`: a single sparse set `S` of size `n/3`, joined
/// completely to its complement `R`, where `G[R]` is `G(2n/3, 0.9)` repaired
/// to minimum degree `|R|/2`. In both modes intra-set noise adds each pair
/// with probability `τ/2` unless an endpoint already has `⌊τn⌋` neighbours
/// inside its set, so `Δ(G[S]) ≤ τn` and `δ(G) ≥ 2n/3`.
pub fn planted_sparse(n: usize, mode: PlantedMode, tau: f64, seed: u64) -> Result<Graph> {
    if !n.is_multiple_of(3) {
        return Err(Error::InvalidArgument(format!("planted_sparse needs 3 | n (n = {n})")));
    }
    if !(0.0..1.0 / 3.0).contains(&tau) {
        return Err(Error::InvalidArgument(format!("noise level τ = {tau} not in [0, 1/3)")));
    }
    let s = n / 3;
    let cap = (tau * n as f64).floor() as usize;
    let mut uniforms = EdgeUniforms::new(n, seed::derive(seed, 1));
    let mut edges = Vec::new();
    let mut add_noise = |range: std::ops::Range<Vertex>, edges: &mut Vec<(Vertex, Vertex)>| {
        let mut deg = vec![0usize; n];
        for u in range.clone() {
            for v in u + 1..range.end {
                if uniforms.uniform(u, v) < tau / 2.0 && deg[u] < cap && deg[v] < cap {
                    deg[u] += 1;
                    deg[v] += 1;
                    edges.push((u, v));
                }
            }
        }
    };
    match mode {
        PlantedMode::Two => {
            edges.extend(complete_tripartite(s, s, s).graph().edges());
            for i in 0..3 {
                add_noise(i * s..(i + 1) * s, &mut edges);
            }
        }
        PlantedMode::One => {
            add_noise(0..s, &mut edges);
            edges.extend((0..s).flat_map(|u| (s..n).map(move |v| (u, v))));
            let r = n - s;
            let inner = repair_min_degree(gnq(r, 0.9, seed::derive(seed, 2))?, r.div_ceil(2));
            edges.extend(inner.edges().into_iter().map(|(u, v)| (u + s, v + s)));
        }
    }
    Graph::from_edges(n, edges)
}

/// Adds edges (lowest-degree partner first, lowest id on ties) until every
/// vertex has degree at least `target`.
fn repair_min_degree(g: Graph, target: usize) -> Graph {
    let n = g.n();
    let mut adj: Vec<FixedBitSet> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    for v in 0..n {
        while adj[v].count_ones(..) < target.min(n - 1) {
            let w = (0..n)
                .filter(|&w| w != v && !adj[v].contains(w))
                .min_by_key(|&w| (adj[w].count_ones(..), w))
                .expect("target below n");
            adj[v].insert(w);
            adj[w].insert(v);
        }
    }
    Graph::from_adjacency(adj)
}

/// Family tag plus its parameters; `n` is supplied at build time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    CompleteTripartite,
    HszExtremal { k: usize },
    NashWilliams,
    Gnq { q: f64 },
    SuperregTripartite { d: f64 },
    PlantedSparse { mode: PlantedMode, tau: f64 },
    Edgeless,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::CompleteTripartite => "complete_tripartite",
            Family::HszExtremal { .. } => "hsz_extremal",
            Family::NashWilliams => "nash_williams",
            Family::Gnq { .. } => "gnq",
            Family::SuperregTripartite { .. } => "superreg_tripartite",
            Family::PlantedSparse { .. } => "planted_sparse",
            Family::Edgeless => "edgeless",
        }
    }

    /// Builds a family from its tag and optional parameters, using the
    /// documented defaults for missing ones.
    pub fn from_tag(
        tag: &str,
        k: Option<usize>,
        q: Option<f64>,
        d: Option<f64>,
        tau: Option<f64>,
        mode: Option<PlantedMode>,
    ) -> Result<Self> {
        Ok(match tag {
            "complete_tripartite" => Family::CompleteTripartite,
            "hsz_extremal" => Family::HszExtremal { k: k.unwrap_or(3) },
            "nash_williams" | "nash_williams_tripartite" => Family::NashWilliams,
            "gnq" => Family::Gnq { q: q.unwrap_or(0.5) },
            "superreg_tripartite" => Family::SuperregTripartite { d: d.unwrap_or(0.8) },
            "planted_sparse" => Family::PlantedSparse {
                mode: mode.unwrap_or(PlantedMode::Two),
                tau: tau.unwrap_or(0.0),
            },
            "edgeless" => Family::Edgeless,
            _ => return Err(Error::InvalidArgument(format!("unknown family `{tag}`"))),
        })
    }

    pub fn is_tripartite(&self) -> bool {
        matches!(self, Family::CompleteTripartite | Family::SuperregTripartite { .. })
    }

    /// Total vertex count for size parameter `n`.
    pub fn vertex_count(&self, n: usize) -> usize {
        if self.is_tripartite() {
            3 * n
        } else {
            n
        }
    }

    pub fn build(&self, n: usize, seed: u64) -> Result<GraphFile> {
        Ok(match *self {
            Family::CompleteTripartite => GraphFile::Tripartite(complete_tripartite(n, n, n)),
            Family::HszExtremal { k } => GraphFile::General(hsz_extremal(n, k)?),
            Family::NashWilliams => GraphFile::General(nash_williams_tripartite(n)?),
            Family::Gnq { q } => {
                check_probability(q)?;
                GraphFile::General(gnq(n, q, seed)?)
            }
            Family::SuperregTripartite { d } => GraphFile::Tripartite(superreg_tripartite(n, d, seed)?),
            Family::PlantedSparse { mode, tau } => GraphFile::General(planted_sparse(n, mode, tau, seed)?),
            Family::Edgeless => GraphFile::General(Graph::empty(n)),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}
