//! Seeded random sparsification `G_p`.
//!
//! Each vertex pair `{u, v}` of an `n`-vertex host owns a uniform value
//! `U(u, v) ∈ [0, 1)` determined by `(seed, pair_rank(n, u, v))`. An edge
//! survives iff `U < p`, so for a fixed seed the sparsified graphs are
//! nested in `p`.

use fixedbitset::FixedBitSet;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_rank, Edge, Graph, TripartiteGraph, Vertex};
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsifyParams {
    pub p: f64,
    pub seed: u64,
    pub rounds: usize,
}

impl SparsifyParams {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        let params = SparsifyParams { p, seed, rounds: 1 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.rounds == 0 {
            return Err(Error::InvalidArgument("round count must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("probability {p} not in [0, 1]")))
    }
}

/// Random-access source of the per-pair uniforms of one seed.
#[derive(Clone, Debug)]
pub struct EdgeUniforms {
    n: usize,
    rng: ChaCha8Rng,
    next_rank: Option<u64>,
}

impl EdgeUniforms {
    pub fn new(n: usize, seed: u64) -> Self {
        EdgeUniforms {
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_rank: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `U(u, v)`; calling in increasing rank order avoids re-seeking.
    pub fn uniform(&mut self, u: Vertex, v: Vertex) -> f64 {
        let rank = pair_rank(self.n, u, v);
        if self.next_rank != Some(rank) {
            // two 32-bit words per pair
            self.rng.set_word_pos(rank as u128 * 2);
        }
        self.next_rank = Some(rank + 1);
        let x = self.rng.next_u64();
        (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn retained(&mut self, u: Vertex, v: Vertex, p: f64) -> bool {
        self.uniform(u, v) < p
    }
}

/// `G_p` of a general graph.
pub fn sparsify(g: &Graph, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let n = g.n();
    if p >= 1.0 {
        return Ok(g.clone());
    }
    let mut uniforms = EdgeUniforms::new(n, seed);
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    for (u, v) in g.edges() {
        if uniforms.retained(u, v, p) {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    Ok(Graph::from_adjacency(adj))
}

pub fn sparsify_with(g: &Graph, params: &SparsifyParams) -> Result<Graph> {
    params.validate()?;
    sparsify(g, params.p, params.seed)
}

/// `G_p` of a tripartite graph; parts are kept.
pub fn sparsify_tripartite(g: &TripartiteGraph, p: f64, seed: u64) -> Result<TripartiteGraph> {
    g.with_graph(sparsify(g.graph(), p, seed)?)
}

/// `rounds` independent copies of `G_{p/rounds}`.
pub fn split_rounds(g: &Graph, p: f64, rounds: usize, seed: u64) -> Result<Vec<Graph>> {
    check_probability(p)?;
    if rounds == 0 {
        return Err(Error::InvalidArgument("round count must be positive".into()));
    }
    (0..rounds)
        .map(|r| sparsify(g, p / rounds as f64, round_seed(seed, r)))
        .collect()
}

/// Seed of round `r` in [`split_rounds`].
pub fn round_seed(seed: u64, r: usize) -> u64 {
    seed::mix(&[seed, 0x5157_0000 + r as u64])
}

/// Uniformly random subset of exactly `target` edges, in input order.
pub fn subsample_exact(edges: &[Edge], target: usize, seed: u64) -> Result<Vec<Edge>> {
    if target > edges.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot keep {target} of {} edges",
            edges.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, edges.len(), target).into_vec();
    idx.sort_unstable();
    Ok(idx.into_iter().map(|i| edges[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let k = Graph::complete(20);
        assert_eq!(sparsify(&k, 1.0, 3).unwrap(), k);
        assert_eq!(sparsify(&k, 0.0, 3).unwrap(), Graph::empty(20));
        assert!(sparsify(&k, 1.5, 3).is_err());
    }

    #[test]
    fn k100_half_within_three_sigma() {
        let m = sparsify(&Graph::complete(100), 0.5, 7).unwrap().m() as f64;
        let sigma = (4950.0f64 * 0.25).sqrt();
        assert!((m - 2475.0).abs() <= 3.0 * sigma, "m = {m}");
    }

    #[test]
    fn uniforms_do_not_depend_on_access_order() {
        let mut a = EdgeUniforms::new(30, 11);
        let mut b = EdgeUniforms::new(30, 11);
        let forward: Vec<f64> = (1..30).map(|v| a.uniform(0, v)).collect();
        let mut backward: Vec<f64> = (1..30).rev().map(|v| b.uniform(v, 0)).collect();
        backward.reverse();
        assert_eq!(forward, backward);
    }

    #[test]
    fn split_rounds_examples() {
        let k = Graph::complete(60);
        let one = split_rounds(&k, 0.4, 1, 5).unwrap();
        assert_eq!(one, vec![sparsify(&k, 0.4, round_seed(5, 0)).unwrap()]);
        assert!(split_rounds(&k, 0.0, 3, 5).unwrap().iter().all(|g| g.m() == 0));

        let rounds = split_rounds(&k, 0.3, 3, 9).unwrap();
        let pairs = 1770.0;
        let union = k
            .edges()
            .into_iter()
            .filter(|&(u, v)| rounds.iter().any(|g| g.has_edge(u, v)))
            .count() as f64;
        let q: f64 = 1.0 - 0.9f64.powi(3);
        let sigma = (pairs * q * (1.0 - q)).sqrt();
        assert!((union - q * pairs).abs() <= 3.0 * sigma);
    }

    #[test]
    fn subsample_examples() {
        let e = Graph::complete(10).edges();
        assert_eq!(subsample_exact(&e, e.len(), 1).unwrap(), e);
        assert!(subsample_exact(&e, 0, 1).unwrap().is_empty());
        assert_eq!(
            subsample_exact(&e, 17, 99).unwrap(),
            subsample_exact(&e, 17, 99).unwrap()
        );
        assert_eq!(subsample_exact(&e, 17, 99).unwrap().len(), 17);
        assert!(subsample_exact(&e, 46, 1).is_err());
    }
}
