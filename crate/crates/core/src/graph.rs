//! Immutable graphs with bit-mask adjacency, tripartite hosts, and the
//! neighbourhood/clique queries the rest of the crate is built on.

use std::fmt;
use std::ops::Range;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Edge = (Vertex, Vertex);

/// Independence numbers are computed exactly up to this many vertices.
pub const DEFAULT_ALPHA_CAP: usize = 24;

/// Simple undirected graph on `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Rank of the pair `{u, v}` in the lexicographic order of all pairs of `0..n`.
///
/// This is the canonical edge id used to key per-edge randomness, so it does
/// not depend on which edges are present.
pub fn pair_rank(n: usize, u: Vertex, v: Vertex) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(b < n && a != b);
    let (a, b, n) = (a as u64, b as u64, n as u64);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut adj = Vec::with_capacity(n);
        for v in 0..n {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert_range(..);
            row.set(v, false);
            adj.push(row);
        }
        Graph {
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !g.adj[u].contains(v) {
                g.adj[u].insert(v);
                g.adj[v].insert(u);
                g.m += 1;
            }
        }
        Ok(g)
    }

    pub(crate) fn from_adjacency(adj: Vec<FixedBitSet>) -> Self {
        let m = adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2;
        Graph { adj, m }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &FixedBitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].count_ones(..)
    }

    /// Number of neighbours of `v` inside `set`.
    pub fn degree_into(&self, v: Vertex, set: &FixedBitSet) -> usize {
        self.adj[v].intersection_count(set)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            out.extend(self.adj[u].ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn vertex_set(&self, vs: &[Vertex]) -> Result<FixedBitSet> {
        let mut set = FixedBitSet::with_capacity(self.n());
        for &v in vs {
            self.check_vertex(v)?;
            set.insert(v);
        }
        Ok(set)
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n());
        s.insert_range(..);
        s
    }

    /// Common neighbourhood of `s` restricted to `within`; `N(∅)` is the
    /// whole vertex set.
    pub fn neighborhood(&self, s: &[Vertex], within: &[Vertex]) -> Result<Vec<Vertex>> {
        let within = self.vertex_set(within)?;
        let mut acc = self.common_neighborhood(s)?;
        acc.intersect_with(&within);
        Ok(acc.ones().collect())
    }

    pub fn common_neighborhood(&self, s: &[Vertex]) -> Result<FixedBitSet> {
        let mut acc = self.full_set();
        for &v in s {
            self.check_vertex(v)?;
            acc.intersect_with(&self.adj[v]);
        }
        Ok(acc)
    }

    /// Every `k`-clique, each reported once as an increasing vertex list,
    /// in lexicographic order.
    pub fn cliques(&self, k: usize) -> Vec<Vec<Vertex>> {
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        let mut stack = Vec::with_capacity(k);
        let all = self.full_set();
        self.extend_cliques(k, &all, &mut stack, &mut out);
        out
    }

    /// `K_k(G, u)`: the `k`-cliques containing `u`.
    pub fn cliques_containing(&self, k: usize, u: Vertex) -> Result<Vec<Vec<Vertex>>> {
        self.check_vertex(u)?;
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut found = Vec::new();
        let mut stack = vec![u];
        let cand = self.adj[u].clone();
        self.extend_cliques(k - 1, &cand, &mut stack, &mut found);
        for c in &mut found {
            c.sort_unstable();
        }
        found.sort();
        Ok(found)
    }

    fn extend_cliques(
        &self,
        remaining: usize,
        cand: &FixedBitSet,
        stack: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if remaining == 0 {
            out.push(stack.clone());
            return;
        }
        // `cand` only holds vertices above the last pick, so each clique is
        // produced once
        for v in cand.ones() {
            let mut next = cand.clone();
            next.intersect_with(&self.adj[v]);
            next.set_range(..v + 1, false);
            stack.push(v);
            self.extend_cliques(remaining - 1, &next, stack, out);
            stack.pop();
        }
    }

    /// `tr_v(G)`: edges forming a triangle with `v`.
    pub fn triangle_link(&self, v: Vertex) -> Result<Vec<Edge>> {
        self.check_vertex(v)?;
        let nb = &self.adj[v];
        let mut out = Vec::new();
        for a in nb.ones() {
            for b in self.adj[a].intersection(nb) {
                if b > a {
                    out.push((a, b));
                }
            }
        }
        Ok(out)
    }

    /// Number of triangles through `v`.
    pub fn triangle_degree(&self, v: Vertex) -> usize {
        let nb = &self.adj[v];
        nb.ones().map(|a| self.adj[a].intersection_count(nb)).sum::<usize>() / 2
    }

    /// Induced subgraph on the vertices not in `remove`. Ids absent from the
    /// graph are ignored.
    pub fn remove_vertices(&self, remove: &[Vertex]) -> Induced<Graph> {
        let mut keep = self.full_set();
        for &v in remove {
            if v < self.n() {
                keep.set(v, false);
            }
        }
        let origin: Vec<Vertex> = keep.ones().collect();
        Induced {
            graph: self.induced_on(&origin),
            origin,
        }
    }

    /// Induced subgraph on `keep` (in the given order).
    pub fn induced_on(&self, keep: &[Vertex]) -> Graph {
        let k = keep.len();
        let mut adj = vec![FixedBitSet::with_capacity(k); k];
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Graph::from_adjacency(adj)
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|v| {
                let mut row = self.adj[v].clone();
                row.toggle_range(..);
                row.set(v, false);
                row
            })
            .collect();
        Graph::from_adjacency(adj)
    }

    /// Same vertex set, only the listed edges kept (edges absent from `self`
    /// are rejected).
    pub fn spanning_subgraph(&self, edges: &[Edge]) -> Result<Graph> {
        for &(u, v) in edges {
            self.check_vertex(u)?;
            self.check_vertex(v)?;
            if !self.has_edge(u, v) {
                return Err(Error::InvalidArgument(format!("{u}-{v} is not an edge")));
            }
        }
        Graph::from_edges(self.n(), edges.iter().copied())
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && (0..self.n()).all(|v| self.adj[v].is_subset(&other.adj[v]))
    }

    /// Maximum degree of the subgraph induced on `set`.
    pub fn induced_max_degree(&self, set: &FixedBitSet) -> usize {
        set.ones()
            .map(|v| self.adj[v].intersection_count(set))
            .max()
            .unwrap_or(0)
    }

    pub fn stats(&self) -> GraphStats {
        self.stats_with_cap(DEFAULT_ALPHA_CAP)
    }

    pub fn stats_with_cap(&self, alpha_cap: usize) -> GraphStats {
        let independence = if self.n() <= alpha_cap.min(64) {
            Independence::Exact(self.independence_number_exact())
        } else {
            Independence::LowerBound(self.greedy_independent_set().len())
        };
        GraphStats {
            min_degree: self.min_degree(),
            independence,
        }
    }

    fn independence_number_exact(&self) -> usize {
        let n = self.n();
        assert!(n <= 64);
        let masks: Vec<u64> = (0..n)
            .map(|v| self.adj[v].ones().fold(0u64, |acc, w| acc | (1 << w)))
            .collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut best = 0;
        mis_branch(&masks, all, 0, &mut best);
        best
    }

    /// Min-degree greedy independent set.
    pub fn greedy_independent_set(&self) -> Vec<Vertex> {
        let mut alive = self.full_set();
        let mut out = Vec::new();
        while let Some(v) = alive
            .ones()
            .min_by_key(|&v| (self.adj[v].intersection_count(&alive), v))
        {
            out.push(v);
            alive.set(v, false);
            alive.difference_with(&self.adj[v]);
        }
        out
    }
}

fn mis_branch(masks: &[u64], cand: u64, size: usize, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + cand.count_ones() as usize <= *best {
        return;
    }
    let v = cand.trailing_zeros() as usize;
    let without_v = cand & !(1u64 << v);
    mis_branch(masks, without_v & !masks[v], size + 1, best);
    if masks[v] & cand != 0 {
        mis_branch(masks, without_v, size, best);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Independence {
    Exact(usize),
    LowerBound(usize),
}

impl Independence {
    pub fn value(self) -> usize {
        match self {
            Independence::Exact(v) | Independence::LowerBound(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Independence::Exact(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub min_degree: usize,
    pub independence: Independence,
}

/// A subgraph together with the original id of each of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Induced<G> {
    pub graph: G,
    pub origin: Vec<Vertex>,
}

impl<G> Induced<G> {
    /// New id of an original vertex, if it survived.
    pub fn new_id(&self, original: Vertex) -> Option<Vertex> {
        self.origin.binary_search(&original).ok()
    }
}

/// Tripartite graph with parts `V^1, V^2, V^3` laid out as consecutive id
/// intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripartiteGraph {
    graph: Graph,
    sizes: [usize; 3],
}

impl TripartiteGraph {
    pub fn new(graph: Graph, sizes: [usize; 3]) -> Result<Self> {
        if sizes.iter().sum::<usize>() != graph.n() {
            return Err(Error::InvalidArgument(format!(
                "part sizes {sizes:?} do not sum to {}",
                graph.n()
            )));
        }
        let tg = TripartiteGraph { graph, sizes };
        for (u, v) in tg.graph.edges() {
            if tg.part_of(u) == tg.part_of(v) {
                return Err(Error::IntraPartEdge(u, v));
            }
        }
        Ok(tg)
    }

    pub fn from_edges<I>(sizes: [usize; 3], edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let g = Graph::from_edges(sizes.iter().sum(), edges)?;
        TripartiteGraph::new(g, sizes)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn sizes(&self) -> [usize; 3] {
        self.sizes
    }

    /// Common part size of a balanced graph, or the largest part otherwise.
    pub fn part_size(&self) -> usize {
        *self.sizes.iter().max().unwrap()
    }

    pub fn is_balanced(&self) -> bool {
        self.sizes[0] == self.sizes[1] && self.sizes[1] == self.sizes[2]
    }

    pub fn part(&self, i: usize) -> Range<Vertex> {
        let start: usize = self.sizes[..i].iter().sum();
        start..start + self.sizes[i]
    }

    pub fn part_of(&self, v: Vertex) -> usize {
        if v < self.sizes[0] {
            0
        } else if v < self.sizes[0] + self.sizes[1] {
            1
        } else {
            2
        }
    }

    pub fn part_set(&self, i: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.graph.n());
        s.insert_range(self.part(i));
        s
    }

    /// Transversal triangles, each as `[a, b, c]` with `a ∈ V^1, b ∈ V^2, c ∈ V^3`.
    pub fn triangles(&self) -> Vec<Triangle> {
        let mut out = Vec::new();
        let p2 = self.part_set(1);
        let p3 = self.part_set(2);
        for a in self.part(0) {
            let na = self.graph.neighbors(a);
            for b in na.intersection(&p2) {
                let mut cs = na.clone();
                cs.intersect_with(self.graph.neighbors(b));
                cs.intersect_with(&p3);
                out.extend(cs.ones().map(|c| Triangle([a, b, c])));
            }
        }
        out
    }

    pub fn remove_vertices(&self, remove: &[Vertex]) -> Induced<TripartiteGraph> {
        let Induced { graph, origin } = self.graph.remove_vertices(remove);
        let mut sizes = [0; 3];
        for &v in &origin {
            sizes[self.part_of(v)] += 1;
        }
        Induced {
            graph: TripartiteGraph { graph, sizes },
            origin,
        }
    }

    /// Same parts, edge set replaced by a subgraph of the current one.
    pub fn with_graph(&self, graph: Graph) -> Result<Self> {
        TripartiteGraph::new(graph, self.sizes)
    }
}

/// Ordered tuple `(u_1, …, u_ℓ)` with `u_i ∈ V^i` and `ℓ ≤ 3`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexTuple(Vec<Vertex>);

impl VertexTuple {
    pub fn empty() -> Self {
        VertexTuple(Vec::new())
    }

    pub fn new(g: &TripartiteGraph, entries: Vec<Vertex>) -> Result<Self> {
        if entries.len() > 3 {
            return Err(Error::InvalidArgument(format!(
                "vertex tuple of length {} (max 3)",
                entries.len()
            )));
        }
        for (i, &v) in entries.iter().enumerate() {
            g.graph().check_vertex(v)?;
            if g.part_of(v) != i {
                return Err(Error::InvalidArgument(format!(
                    "tuple entry {i} (vertex {v}) is not in part {}",
                    i + 1
                )));
            }
        }
        Ok(VertexTuple(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }
}

/// Three pairwise adjacent vertices, stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle(pub [Vertex; 3]);

impl Triangle {
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Self {
        let mut t = [a, b, c];
        t.sort_unstable();
        Triangle(t)
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn is_in(&self, g: &Graph) -> bool {
        let [a, b, c] = self.0;
        a != b && b != c && a != c && g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c)
    }
}

/// Vertex-disjoint triangles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleMatching {
    triangles: Vec<Triangle>,
}

impl TriangleMatching {
    pub fn new() -> Self {
        Self::default()
    }

    /// Checks disjointness and that every triangle lives in `g`.
    pub fn from_triangles(g: &Graph, triangles: Vec<Triangle>) -> Result<Self> {
        let mut seen = FixedBitSet::with_capacity(g.n());
        for t in &triangles {
            if !t.is_in(g) {
                return Err(Error::InvalidArgument(format!("{t:?} is not a triangle")));
            }
            for v in t.0 {
                if seen.put(v) {
                    return Err(Error::InvalidArgument(format!("vertex {v} covered twice")));
                }
            }
        }
        Ok(TriangleMatching { triangles })
    }

    pub(crate) fn from_unchecked(triangles: Vec<Triangle>) -> Self {
        TriangleMatching { triangles }
    }

    pub(crate) fn push(&mut self, t: Triangle) {
        self.triangles.push(t);
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// `V(𝒯)`, sorted.
    pub fn covered(&self) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = self.triangles.iter().flat_map(|t| t.0).collect();
        vs.sort_unstable();
        vs
    }

    pub fn covers(&self, v: Vertex) -> bool {
        self.triangles.iter().any(|t| t.contains(v))
    }

    /// Disjoint, all triangles present in `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        TriangleMatching::from_triangles(g, self.triangles.clone()).is_ok()
    }

    pub fn is_factor_of(&self, g: &Graph) -> bool {
        self.is_valid_in(g) && 3 * self.len() == g.n()
    }

    pub fn extend(&mut self, other: &TriangleMatching) {
        self.triangles.extend_from_slice(&other.triangles);
    }
}

/// `n!_t = n (n-1) ⋯ (n-t+1)`, with `n!_0 = 1`.
pub fn falling_factorial(n: u64, t: u64) -> Result<BigUint> {
    if t > n {
        return Err(Error::InvalidArgument(format!(
            "falling factorial with t = {t} > n = {n}"
        )));
    }
    Ok((n - t + 1..=n).fold(BigUint::from(1u32), |acc, x| acc * x))
}

/// Greedy max-degree peeling: repeatedly delete the vertex of largest
/// induced degree (lowest id on ties) until `Δ(G[S]) ≤ degree_cap·n`, then
/// report `S` if it still has at least `size_floor·n` vertices.
pub fn find_sparse_set(g: &Graph, size_floor: f64, degree_cap: f64) -> Option<Vec<Vertex>> {
    let n = g.n() as f64;
    let mut alive = g.full_set();
    let mut deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    loop {
        let worst = alive.ones().max_by_key(|&v| (deg[v], std::cmp::Reverse(v)));
        let Some(v) = worst else { break };
        if deg[v] as f64 <= degree_cap * n {
            break;
        }
        alive.set(v, false);
        for w in g.neighbors(v).intersection(&alive) {
            deg[w] -= 1;
        }
    }
    let size = alive.count_ones(..);
    (size > 0 && size as f64 >= size_floor * n).then(|| alive.ones().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn neighborhood_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.neighborhood(&[0, 1], &[0, 1, 2, 3]).unwrap(), vec![2, 3]);
        assert_eq!(k4.neighborhood(&[], &[0, 1, 2, 3]).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(path3().neighborhood(&[0, 2], &[0, 1, 2]).unwrap(), vec![1]);
        assert!(matches!(
            k4.neighborhood(&[7], &[0]),
            Err(Error::VertexOutOfRange { vertex: 7, .. })
        ));
    }

    #[test]
    fn clique_examples() {
        assert_eq!(Graph::complete(4).cliques(3).len(), 4);
        assert!(cycle(5).cliques(3).is_empty());
        let k333 = TripartiteGraph::from_edges(
            [3, 3, 3],
            (0..9)
                .flat_map(|u| (0..9).map(move |v| (u, v)))
                .filter(|&(u, v)| u < v && u / 3 != v / 3),
        )
        .unwrap();
        assert_eq!(k333.graph().cliques(3).len(), 27);
        assert_eq!(k333.triangles().len(), 27);
    }

    #[test]
    fn cliques_containing_matches_filter() {
        let g = Graph::complete(6);
        for u in 0..6 {
            let direct = g.cliques_containing(4, u).unwrap();
            let filtered: Vec<_> = g.cliques(4).into_iter().filter(|c| c.contains(&u)).collect();
            assert_eq!(direct, filtered);
        }
    }

    #[test]
    fn triangle_link_examples() {
        assert_eq!(Graph::complete(4).triangle_link(0).unwrap().len(), 3);
        let star = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        assert!(star.triangle_link(0).unwrap().is_empty());
    }

    #[test]
    fn remove_vertices_examples() {
        let k4 = Graph::complete(4);
        let r = k4.remove_vertices(&[2]);
        assert_eq!(r.graph, Graph::complete(3));
        assert_eq!(r.origin, vec![0, 1, 3]);
        assert_eq!(k4.remove_vertices(&[]).graph, k4);
        // absent ids are a no-op
        assert_eq!(k4.remove_vertices(&[10]).graph, k4);
    }

    #[test]
    fn stats_examples() {
        assert_eq!(
            Graph::complete(7).stats(),
            GraphStats {
                min_degree: 6,
                independence: Independence::Exact(1)
            }
        );
        assert_eq!(
            Graph::empty(5).stats(),
            GraphStats {
                min_degree: 0,
                independence: Independence::Exact(5)
            }
        );
        let big = Graph::empty(30).stats();
        assert_eq!(big.independence, Independence::LowerBound(30));
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(7, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(falling_factorial(5, 2).unwrap(), BigUint::from(20u32));
        assert_eq!(falling_factorial(4, 4).unwrap(), BigUint::from(24u32));
        assert!(falling_factorial(3, 4).is_err());
    }

    #[test]
    fn pair_rank_is_dense_and_lexicographic() {
        let n = 7;
        let mut expected = 0;
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(pair_rank(n, u, v), expected);
                assert_eq!(pair_rank(n, v, u), expected);
                expected += 1;
            }
        }
    }

    #[test]
    fn sparse_set_examples() {
        let k333 = Graph::complete(9).complement().complement();
        assert!(find_sparse_set(&k333, 0.3, 0.05).is_none());
        let tri = TripartiteGraph::from_edges(
            [3, 3, 3],
            (0..9)
                .flat_map(|u| (u + 1..9).map(move |v| (u, v)))
                .filter(|&(u, v)| u / 3 != v / 3),
        )
        .unwrap();
        let s = find_sparse_set(tri.graph(), 0.3, 0.05).unwrap();
        assert!((0..3).any(|i| s == tri.part(i).collect::<Vec<_>>()));
    }

    #[test]
    fn matching_validation() {
        let k6 = Graph::complete(6);
        assert!(TriangleMatching::from_triangles(&k6, vec![Triangle::new(0, 1, 2), Triangle::new(2, 3, 4)]).is_err());
        let m = TriangleMatching::from_triangles(&k6, vec![Triangle::new(0, 1, 2), Triangle::new(3, 4, 5)]).unwrap();
        assert!(m.is_factor_of(&k6));
        assert_eq!(m.covered(), vec![0, 1, 2, 3, 4, 5]);
    }
}
