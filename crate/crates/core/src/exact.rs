//! Exact factor search, factor counting and labelled embedding counts.
//!
//! These are the ground-truth oracles for the rest of the crate. All counts
//! are arbitrary precision.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Triangle, TriangleMatching, TripartiteGraph, Vertex, VertexTuple};

/// Failed states remembered by the factor search before the memo stops
/// growing.
const FAILURE_MEMO_CAP: usize = 1 << 20;

/// Part size up to which embedding counts memoize on used-vertex masks.
pub const EMBEDDING_MEMO_PART_CAP: usize = 14;

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            deadline: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Infeasible,
    BudgetExhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Precomputed clique structure shared by the searches.
struct CliqueIndex {
    cliques: Vec<Vec<Vertex>>,
    masks: Vec<FixedBitSet>,
    /// clique ids containing each vertex, in lexicographic clique order
    by_vertex: Vec<Vec<usize>>,
}

impl CliqueIndex {
    fn new(g: &Graph, k: usize) -> Self {
        let cliques = g.cliques(k);
        let mut by_vertex = vec![Vec::new(); g.n()];
        let masks = cliques
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut m = FixedBitSet::with_capacity(g.n());
                for &v in c {
                    m.insert(v);
                    by_vertex[v].push(i);
                }
                m
            })
            .collect();
        CliqueIndex {
            cliques,
            masks,
            by_vertex,
        }
    }
}

struct FactorSearch<'a> {
    index: &'a CliqueIndex,
    budget: SearchBudget,
    nodes: u64,
    exhausted: bool,
    failed: HashSet<FixedBitSet>,
    chosen: Vec<usize>,
}

impl FactorSearch<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(max) = self.budget.max_nodes {
            if self.nodes > max {
                self.exhausted = true;
            }
        }
        if let Some(deadline) = self.budget.deadline {
            if self.nodes.is_multiple_of(1024) && Instant::now() >= deadline {
                self.exhausted = true;
            }
        }
        !self.exhausted
    }

    fn search(&mut self, covered: &mut FixedBitSet, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        if !self.tick() || self.failed.contains(covered) {
            return false;
        }
        // uncovered vertex with fewest available cliques, lowest id on ties
        let mut best: Option<(usize, Vertex)> = None;
        for v in covered.zeroes() {
            let avail = self.index.by_vertex[v]
                .iter()
                .filter(|&&c| self.index.masks[c].is_disjoint(covered))
                .count();
            if best.is_none_or(|(b, _)| avail < b) {
                best = Some((avail, v));
                if avail == 0 {
                    break;
                }
            }
        }
        let (avail, v) = best.expect("remaining > 0 implies an uncovered vertex");
        if avail > 0 {
            let k = self.index.cliques[0].len();
            for i in 0..self.index.by_vertex[v].len() {
                let c = self.index.by_vertex[v][i];
                if !self.index.masks[c].is_disjoint(covered) {
                    continue;
                }
                covered.union_with(&self.index.masks[c]);
                self.chosen.push(c);
                if self.search(covered, remaining - k) {
                    return true;
                }
                self.chosen.pop();
                covered.difference_with(&self.index.masks[c]);
                if self.exhausted {
                    return false;
                }
            }
        }
        if self.failed.len() < FAILURE_MEMO_CAP {
            self.failed.insert(covered.clone());
        }
        false
    }
}

/// Exact `K_k`-factor search with a resource budget.
///
/// Branches on the uncovered vertex with the fewest available cliques
/// (lowest id on ties) and tries its cliques in lexicographic order, so the
/// witness is deterministic.
pub fn find_clique_factor_with_budget(g: &Graph, k: usize, budget: SearchBudget) -> SearchOutcome<Vec<Vec<Vertex>>> {
    let n = g.n();
    if k == 0 || !n.is_multiple_of(k) {
        return SearchOutcome::Infeasible;
    }
    if n == 0 {
        return SearchOutcome::Found(Vec::new());
    }
    let index = CliqueIndex::new(g, k);
    if index.cliques.is_empty() || index.by_vertex.iter().any(Vec::is_empty) {
        return SearchOutcome::Infeasible;
    }
    let mut search = FactorSearch {
        index: &index,
        budget,
        nodes: 0,
        exhausted: false,
        failed: HashSet::new(),
        chosen: Vec::new(),
    };
    let mut covered = FixedBitSet::with_capacity(n);
    if search.search(&mut covered, n) {
        let mut out: Vec<Vec<Vertex>> = search.chosen.iter().map(|&c| index.cliques[c].clone()).collect();
        out.sort();
        SearchOutcome::Found(out)
    } else if search.exhausted {
        SearchOutcome::BudgetExhausted
    } else {
        SearchOutcome::Infeasible
    }
}

pub fn find_clique_factor(g: &Graph, k: usize) -> Option<Vec<Vec<Vertex>>> {
    find_clique_factor_with_budget(g, k, SearchBudget::unlimited()).found()
}

pub fn find_triangle_factor_with_budget(g: &Graph, budget: SearchBudget) -> SearchOutcome<TriangleMatching> {
    match find_clique_factor_with_budget(g, 3, budget) {
        SearchOutcome::Found(cs) => SearchOutcome::Found(to_matching(cs)),
        SearchOutcome::Infeasible => SearchOutcome::Infeasible,
        SearchOutcome::BudgetExhausted => SearchOutcome::BudgetExhausted,
    }
}

/// A triangle factor of `g`, or `None` if there is none (including when
/// `3 ∤ |V(g)|`).
pub fn find_triangle_factor(g: &Graph) -> Option<TriangleMatching> {
    find_triangle_factor_with_budget(g, SearchBudget::unlimited()).found()
}

fn to_matching(cs: Vec<Vec<Vertex>>) -> TriangleMatching {
    TriangleMatching::from_unchecked(cs.into_iter().map(|c| Triangle::new(c[0], c[1], c[2])).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountKind {
    /// `|Ψ^t(Γ)|` or `|Ψ^t_û(Γ)|`
    Embeddings,
    /// `|Ψ^t_v(Γ)|`
    Rooted,
    /// `T(G)`, unordered triangle factors
    Factors,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCount {
    pub value: BigUint,
    pub kind: CountKind,
}

/// Number of unordered `K_k`-factors.
pub fn count_clique_factors(g: &Graph, k: usize) -> BigUint {
    let n = g.n();
    if k == 0 || !n.is_multiple_of(k) {
        return BigUint::zero();
    }
    let index = CliqueIndex::new(g, k);
    let mut memo = HashMap::new();
    let mut covered = FixedBitSet::with_capacity(n);
    count_rec(&index, &mut covered, &mut memo)
}

fn count_rec(index: &CliqueIndex, covered: &mut FixedBitSet, memo: &mut HashMap<FixedBitSet, BigUint>) -> BigUint {
    let Some(v) = covered.zeroes().next() else {
        return BigUint::one();
    };
    if let Some(c) = memo.get(covered) {
        return c.clone();
    }
    let mut total = BigUint::zero();
    for &c in &index.by_vertex[v] {
        if index.masks[c].is_disjoint(covered) {
            covered.union_with(&index.masks[c]);
            total += count_rec(index, covered, memo);
            covered.difference_with(&index.masks[c]);
        }
    }
    memo.insert(covered.clone(), total.clone());
    total
}

/// `T(G)`: the number of unordered triangle factors.
pub fn count_triangle_factors(g: &Graph) -> EmbeddingCount {
    EmbeddingCount {
        value: count_clique_factors(g, 3),
        kind: CountKind::Factors,
    }
}

/// Unordered transversal triangle matchings of `Γ`, by size: entry `j` of the
/// result counts matchings with exactly `j` triangles, for `j ≤ t_max`.
pub fn matching_polynomial(g: &TripartiteGraph, t_max: usize) -> Vec<BigUint> {
    let [n1, n2, n3] = g.sizes();
    assert!(n2 + n3 <= 128, "parts too large for the embedding counter");
    let p1: Vec<Vertex> = g.part(0).collect();
    let off2 = g.part(1).start;
    // neighbourhoods of V^1 vertices into V^2 ∪ V^3, as bit masks over the
    // concatenated index space
    let to_bits = |v: Vertex| -> u128 {
        let mut m = 0u128;
        for w in g.graph().neighbors(v).ones() {
            if w >= off2 {
                m |= 1u128 << (w - off2);
            }
        }
        m
    };
    let nb1: Vec<u128> = p1.iter().map(|&a| to_bits(a)).collect();
    let nb2: Vec<u128> = g.part(1).map(to_bits).collect();
    let mask3: u128 = ((1u128 << n3) - 1) << n2;
    let ctx = PolyCtx {
        nb1,
        nb2,
        mask3,
        n2,
        t_max,
        memoize: n1.max(n2).max(n3) <= EMBEDDING_MEMO_PART_CAP,
    };
    let mut memo = HashMap::new();
    ctx.poly(0, 0, &mut memo)
}

struct PolyCtx {
    nb1: Vec<u128>,
    nb2: Vec<u128>,
    mask3: u128,
    n2: usize,
    t_max: usize,
    memoize: bool,
}

impl PolyCtx {
    fn poly(&self, i: usize, used: u128, memo: &mut HashMap<(usize, u128), Vec<BigUint>>) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); self.t_max + 1];
        if i == self.nb1.len() {
            out[0] = BigUint::one();
            return out;
        }
        if self.memoize {
            if let Some(p) = memo.get(&(i, used)) {
                return p.clone();
            }
        }
        // V^1 vertex i unmatched
        let skip = self.poly(i + 1, used, memo);
        for (o, s) in out.iter_mut().zip(skip) {
            *o += s;
        }
        if self.t_max > 0 {
            let free = self.nb1[i] & !used;
            let mut bs = free & ((1u128 << self.n2) - 1);
            while bs != 0 {
                let b = bs.trailing_zeros() as usize;
                bs &= bs - 1;
                let mut cs = free & self.nb2[b] & self.mask3;
                while cs != 0 {
                    let c = cs.trailing_zeros() as usize;
                    cs &= cs - 1;
                    let sub = self.poly(i + 1, used | (1u128 << b) | (1u128 << c), memo);
                    for j in 0..self.t_max {
                        out[j + 1] += &sub[j];
                    }
                }
            }
        }
        if self.memoize {
            memo.insert((i, used), out.clone());
        }
        out
    }
}

fn factorial(t: usize) -> BigUint {
    (1..=t as u64).fold(BigUint::one(), |acc, x| acc * x)
}

/// `|Ψ^t(Γ)|`: ordered sequences of `t` vertex-disjoint transversal
/// triangles.
fn psi(g: &TripartiteGraph, t: usize) -> BigUint {
    if t > g.sizes().into_iter().min().unwrap() {
        return BigUint::zero();
    }
    let poly = matching_polynomial(g, t);
    &poly[t] * factorial(t)
}

fn check_t(g: &TripartiteGraph, t: usize) -> Result<()> {
    let cap = g.sizes().into_iter().max().unwrap();
    if t > cap {
        return Err(Error::InvalidArgument(format!("t = {t} exceeds the part size {cap}")));
    }
    Ok(())
}

/// `|Ψ^t_û(Γ)|`, or `|Ψ^t_v(Γ_û)|` when `root = Some(v)` (the first
/// triangle uses `v ∈ V^1`).
pub fn count_embeddings(
    g: &TripartiteGraph,
    t: usize,
    avoid: &VertexTuple,
    root: Option<Vertex>,
) -> Result<EmbeddingCount> {
    check_t(g, t)?;
    for &a in avoid.as_slice() {
        g.graph().check_vertex(a)?;
    }
    let reduced = g.remove_vertices(avoid.as_slice());
    let Some(v) = root else {
        return Ok(EmbeddingCount {
            value: psi(&reduced.graph, t),
            kind: CountKind::Embeddings,
        });
    };
    g.graph().check_vertex(v)?;
    if g.part_of(v) != 0 {
        return Err(Error::InvalidArgument(format!("root {v} is not in V^1")));
    }
    if avoid.as_slice().contains(&v) {
        return Err(Error::InvalidArgument(format!("root {v} is also avoided")));
    }
    let value = if t == 0 {
        BigUint::zero()
    } else {
        let rv = reduced.new_id(v).expect("root survives removal");
        let rg = &reduced.graph;
        triangles_at(rg, rv)
            .into_iter()
            .map(|(b, c)| psi(&rg.remove_vertices(&[rv, b, c]).graph, t - 1))
            .sum()
    };
    Ok(EmbeddingCount {
        value,
        kind: CountKind::Rooted,
    })
}

/// Pairs `(b, c)`, `b < c`, forming a transversal triangle with `v`.
fn triangles_at(g: &TripartiteGraph, v: Vertex) -> Vec<Edge> {
    g.graph()
        .triangle_link(v)
        .expect("vertex in range")
        .into_iter()
        .filter(|&(b, c)| {
            let (pv, pb, pc) = (g.part_of(v), g.part_of(b), g.part_of(c));
            pv != pb && pv != pc && pb != pc
        })
        .collect()
}

/// Law of `ψ*_v` for a uniformly random `ψ* ∈ Ψ^t_û(Γ)`: `⊥` when `v` is
/// isolated, otherwise the pair of the triangle through `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleDistribution {
    pub bottom: BigRational,
    pub pairs: Vec<(Edge, BigRational)>,
}

impl TriangleDistribution {
    pub fn total(&self) -> BigRational {
        self.pairs.iter().fold(self.bottom.clone(), |acc, (_, p)| acc + p)
    }

    /// `P[Y_v = 1]`.
    pub fn covered_probability(&self) -> BigRational {
        BigRational::one() - &self.bottom
    }

    /// Law of the pair given `Y_v = 1`, or `None` if `v` is never covered.
    pub fn conditional_on_covered(&self) -> Option<Vec<(Edge, BigRational)>> {
        let cov = self.covered_probability();
        if cov.is_zero() {
            return None;
        }
        Some(self.pairs.iter().map(|(e, p)| (*e, p / &cov)).collect())
    }

    /// `h(ψ*_v)` in nats.
    pub fn entropy(&self) -> f64 {
        std::iter::once(&self.bottom)
            .chain(self.pairs.iter().map(|(_, p)| p))
            .map(entropy_term)
            .sum()
    }

    /// `h(ψ*_v | Y_v = 1)` in nats.
    pub fn conditional_entropy(&self) -> Option<f64> {
        self.conditional_on_covered()
            .map(|d| d.iter().map(|(_, p)| entropy_term(p)).sum())
    }
}

fn entropy_term(p: &BigRational) -> f64 {
    let x = p.to_f64().unwrap_or(0.0);
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Exact law of `ψ*_v` under the uniform measure on `Ψ^t_avoid(Γ)`.
pub fn triangle_distribution(
    g: &TripartiteGraph,
    t: usize,
    avoid: &VertexTuple,
    v: Vertex,
) -> Result<TriangleDistribution> {
    check_t(g, t)?;
    g.graph().check_vertex(v)?;
    if avoid.as_slice().contains(&v) {
        return Err(Error::InvalidArgument(format!("vertex {v} is avoided")));
    }
    let reduced = g.remove_vertices(avoid.as_slice());
    let rg = &reduced.graph;
    let total = psi(rg, t);
    if total.is_zero() {
        return Err(Error::EmptyEmbeddingSet);
    }
    let rv = reduced.new_id(v).expect("v survives removal");
    let denom = num_bigint::BigInt::from(total);
    let ratio = |num: BigUint| BigRational::new(num.into(), denom.clone());
    let bottom = ratio(psi(&rg.remove_vertices(&[rv]).graph, t));
    let pairs = triangles_at(rg, rv)
        .into_iter()
        .map(|(b, c)| {
            let num = if t == 0 {
                BigUint::zero()
            } else {
                BigUint::from(t) * psi(&rg.remove_vertices(&[rv, b, c]).graph, t - 1)
            };
            ((reduced.origin[b], reduced.origin[c]), ratio(num))
        })
        .collect();
    Ok(TriangleDistribution { bottom, pairs })
}

/// Maximum number of vertex-disjoint `k`-cliques, with a witness.
///
/// Exact memoized search over remaining-vertex sets; intended for graphs of
/// a few dozen vertices.
pub fn max_clique_matching(g: &Graph, k: usize) -> (usize, Vec<Vec<Vertex>>) {
    let n = g.n();
    if k == 0 || n < k {
        return (0, Vec::new());
    }
    if n.is_multiple_of(k) {
        if let Some(f) = find_clique_factor(g, k) {
            return (n / k, f);
        }
    }
    let index = CliqueIndex::new(g, k);
    let mut memo: HashMap<FixedBitSet, (usize, Option<usize>)> = HashMap::new();
    let alive = g.full_set();
    let best = mcm_rec(&index, k, alive.clone(), &mut memo);
    let mut witness = Vec::new();
    let mut state = alive;
    while let Some(&(_, choice)) = memo.get(&state) {
        let Some(v) = state.ones().next() else { break };
        match choice {
            Some(c) => {
                witness.push(index.cliques[c].clone());
                state.difference_with(&index.masks[c]);
            }
            None => state.set(v, false),
        }
    }
    witness.sort();
    debug_assert_eq!(witness.len(), best);
    (best, witness)
}

fn mcm_rec(
    index: &CliqueIndex,
    k: usize,
    alive: FixedBitSet,
    memo: &mut HashMap<FixedBitSet, (usize, Option<usize>)>,
) -> usize {
    let Some(v) = alive.ones().next() else {
        return 0;
    };
    if let Some(&(b, _)) = memo.get(&alive) {
        return b;
    }
    let bound = alive.count_ones(..) / k;
    let mut best = 0;
    let mut choice = None;
    for &c in &index.by_vertex[v] {
        if index.masks[c].is_subset(&alive) {
            let mut rest = alive.clone();
            rest.difference_with(&index.masks[c]);
            let val = 1 + mcm_rec(index, k, rest, memo);
            if val > best {
                best = val;
                choice = Some(c);
                if best == bound {
                    break;
                }
            }
        }
    }
    if best < bound {
        let mut rest = alive.clone();
        rest.set(v, false);
        let val = mcm_rec(index, k, rest, memo);
        if val > best {
            best = val;
            choice = None;
        }
    }
    memo.insert(alive, (best, choice));
    best
}
