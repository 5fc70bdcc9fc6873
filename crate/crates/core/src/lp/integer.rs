//! Integer clique weightings with prescribed vertex sums.
//!
//! Given a near-uniform demand `λ` with `λ(u) ≥ n^{2k}` and `k | Σλ`, the
//! construction subtracts a uniform cushion, solves the fractional problem,
//! rounds every clique up by `k·n^k` so no weight can go negative, and then
//! moves single units from surplus to deficit vertices until every vertex
//! sum is exact.

use std::collections::{HashMap, VecDeque};

use log::warn;
use num_bigint::{BigInt, BigUint};
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::lp::solve_packing_lp;

/// Degree and independence thresholds under which the construction is
/// guaranteed to succeed. Violations are only logged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub gamma: f64,
    pub eta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerWeighting {
    pub cliques: Vec<Vec<Vertex>>,
    pub weights: Vec<BigUint>,
    /// Number of unit transfers in the correction loop.
    pub corrections: usize,
    /// `Σ_u |λ(u) − current(u)|` before the loop and after every transfer.
    pub discrepancy_trace: Vec<BigUint>,
    pub warnings: Vec<String>,
}

impl IntegerWeighting {
    pub fn vertex_sums(&self, n: usize) -> Vec<BigUint> {
        let mut s = vec![BigUint::zero(); n];
        for (c, w) in self.cliques.iter().zip(&self.weights) {
            for &v in c {
                s[v] += w;
            }
        }
        s
    }
}

/// Shortest walk of even length from `u` to `v` (BFS over vertex × parity).
///
/// Every vertex appears at most twice, so every edge is traversed at most
/// twice.
pub fn even_walk(g: &Graph, u: Vertex, v: Vertex) -> Result<Vec<Vertex>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(Error::InvalidArgument("even walk needs distinct endpoints".into()));
    }
    let n = g.n();
    let idx = |w: Vertex, parity: usize| 2 * w + parity;
    let mut prev = vec![usize::MAX; 2 * n];
    let mut seen = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    seen[idx(u, 0)] = true;
    queue.push_back((u, 0));
    while let Some((w, par)) = queue.pop_front() {
        if w == v && par == 0 {
            break;
        }
        for x in g.neighbors(w).ones() {
            let s = idx(x, 1 - par);
            if !seen[s] {
                seen[s] = true;
                prev[s] = idx(w, par);
                queue.push_back((x, 1 - par));
            }
        }
    }
    if !seen[idx(v, 0)] {
        let reason = if seen[idx(v, 1)] {
            "bipartite component with the endpoints in opposite classes"
        } else {
            "endpoints lie in different components"
        };
        return Err(Error::NoEvenWalk {
            kind: "even",
            from: u,
            to: v,
            reason: reason.into(),
        });
    }
    let mut walk = vec![v];
    let mut s = idx(v, 0);
    while prev[s] != usize::MAX {
        s = prev[s];
        walk.push(s / 2);
    }
    walk.reverse();
    Ok(walk)
}

fn is_connected(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let mut seen = fixedbitset::FixedBitSet::with_capacity(g.n());
    let mut stack = vec![0];
    seen.insert(0);
    while let Some(w) = stack.pop() {
        for x in g.neighbors(w).ones() {
            if !seen.put(x) {
                stack.push(x);
            }
        }
    }
    seen.count_ones(..) == g.n()
}

fn check_hypotheses(g: &Graph, k: usize, lambda: &[BigUint], hyp: Option<Hypotheses>) -> Vec<String> {
    let n = g.n();
    let mut warnings = Vec::new();
    if !is_connected(g) {
        warnings.push("graph is disconnected".to_string());
    }
    let floor = BigUint::from(n).pow(2 * k as u32);
    if lambda.iter().any(|l| *l < floor) {
        warnings.push(format!("some demand is below n^(2k) = {floor}"));
    }
    if let Some(h) = hyp {
        let kf = k as f64;
        let nf = n as f64;
        let stats = g.stats();
        if (stats.min_degree as f64) < ((kf - 1.0) / kf - h.gamma) * nf {
            warnings.push(format!("minimum degree {} below ((k-1)/k - γ)n", stats.min_degree));
        }
        if stats.independence.value() as f64 >= (1.0 / kf - h.eta) * nf {
            warnings.push(format!(
                "independence number {} not below (1/k - η)n",
                stats.independence.value()
            ));
        }
    }
    for w in &warnings {
        warn!("integer_clique_weights: {w}");
    }
    warnings
}

fn discrepancy(lambda: &[BigUint], current: &[BigUint]) -> BigUint {
    lambda
        .iter()
        .zip(current)
        .map(|(l, c)| if l > c { l - c } else { c - l })
        .sum()
}

/// Integer weights `ω: K_k(g) → ℕ0` with `Σ_{K∋u} ω(K) = λ(u)` exactly.
pub fn integer_clique_weights(
    g: &Graph,
    k: usize,
    lambda: &[BigUint],
    hyp: Option<Hypotheses>,
) -> Result<IntegerWeighting> {
    let n = g.n();
    if lambda.len() != n {
        return Err(Error::InvalidArgument(format!(
            "demand has {} entries for {n} vertices",
            lambda.len()
        )));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("clique size k = {k} < 2")));
    }
    let total: BigUint = lambda.iter().sum();
    if !(&total % k).is_zero() {
        return Err(Error::InvalidArgument(format!("k = {k} does not divide Σλ = {total}")));
    }
    let warnings = check_hypotheses(g, k, lambda, hyp);

    let nk = BigUint::from(n).pow(k as u32);
    let cushion = &nk * k;
    let cliques = g.cliques(k);
    let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in cliques.iter().enumerate() {
        for &v in c {
            by_vertex[v].push(i);
        }
    }

    // λ'(u) = λ(u) − k·|K_k(g,u)|·n^k
    let mut reduced = Vec::with_capacity(n);
    for u in 0..n {
        let sub = &cushion * by_vertex[u].len();
        if lambda[u] < sub {
            return Err(Error::Precondition(format!(
                "demand at vertex {u} is smaller than its cushion {sub}"
            )));
        }
        reduced.push(&lambda[u] - sub);
    }
    let scale = reduced.iter().max().and_then(|m| m.to_f64()).unwrap_or(0.0).max(1.0);
    let scaled: Vec<f64> = reduced.iter().map(|r| r.to_f64().unwrap() / scale).collect();
    let frac = solve_packing_lp(g, k, Some(&scaled))?;
    let mut warnings = warnings;
    if !frac.fractional_factor {
        let w = "no exact fractional solution for the reduced demand".to_string();
        warn!("integer_clique_weights: {w}");
        warnings.push(w);
    }

    // round ω' + k·n^k so that k·Σω'' = Σλ, largest remainder first
    let mut weights = Vec::with_capacity(cliques.len());
    let mut remainders = Vec::with_capacity(cliques.len());
    for (i, &x) in frac.weighting.weights.iter().enumerate() {
        let w = (x * scale).max(0.0);
        let fl = w.floor();
        weights.push(BigUint::from_f64(fl).expect("finite weight") + &cushion);
        remainders.push((w - fl, i));
    }
    let target = BigInt::from(&total / k);
    let base: BigUint = weights.iter().sum();
    let missing = target - BigInt::from(base);
    if missing.is_negative() || missing > BigInt::from(cliques.len()) {
        return Err(Error::Precondition(format!(
            "rounding cannot reach the weight total (off by {missing})"
        )));
    }
    let missing = missing.to_usize().unwrap();
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in &remainders[..missing] {
        weights[i] += 1u32;
    }

    let mut current = vec![BigUint::zero(); n];
    for (c, w) in cliques.iter().zip(&weights) {
        for &v in c {
            current[v] += w;
        }
    }
    let lookup: HashMap<&[Vertex], usize> = cliques.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let mut trace = vec![discrepancy(lambda, &current)];
    let step_cap = nk.to_usize().unwrap_or(usize::MAX);
    let mut corrections = 0;
    loop {
        let Some(u) = (0..n).find(|&u| current[u] > lambda[u]) else {
            break;
        };
        let v = (0..n)
            .find(|&v| current[v] < lambda[v])
            .expect("equal totals: a surplus implies a deficit");
        if corrections == step_cap {
            return Err(Error::CapExceeded(format!(
                "correction loop exceeded n^k = {step_cap} steps"
            )));
        }
        if k == 2 {
            let walk = even_walk(g, u, v).map_err(|_| Error::Stuck { surplus: u, deficit: v })?;
            for (j, pair) in walk.windows(2).enumerate() {
                let key = [pair[0].min(pair[1]), pair[0].max(pair[1])];
                let e = lookup[&key[..]];
                if j % 2 == 0 {
                    if weights[e].is_zero() {
                        return Err(Error::Stuck { surplus: u, deficit: v });
                    }
                    weights[e] -= 1u32;
                } else {
                    weights[e] += 1u32;
                }
            }
        } else {
            // a (k−1)-clique Q ⊆ N(u) ∩ N(v) with ω(Q+u) ≥ 1
            let mut transfer = None;
            for &c in &by_vertex[u] {
                if weights[c].is_zero() || cliques[c].contains(&v) {
                    continue;
                }
                let q: Vec<Vertex> = cliques[c].iter().copied().filter(|&x| x != u).collect();
                if q.iter().all(|&x| g.has_edge(x, v)) {
                    let mut qv = q;
                    qv.push(v);
                    qv.sort_unstable();
                    transfer = Some((c, lookup[qv.as_slice()]));
                    break;
                }
            }
            let (from, to) = transfer.ok_or(Error::Stuck { surplus: u, deficit: v })?;
            weights[from] -= 1u32;
            weights[to] += 1u32;
        }
        current[u] -= 1u32;
        current[v] += 1u32;
        corrections += 1;
        trace.push(discrepancy(lambda, &current));
    }
    Ok(IntegerWeighting {
        cliques,
        weights,
        corrections,
        discrepancy_trace: trace,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gnq;

    #[test]
    fn even_walk_examples() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(even_walk(&path, 0, 2).unwrap(), vec![0, 1, 2]);
        let k2 = Graph::complete(2);
        assert!(matches!(even_walk(&k2, 0, 1), Err(Error::NoEvenWalk { .. })));
        let tri = Graph::complete(3);
        assert_eq!(even_walk(&tri, 0, 1).unwrap(), vec![0, 2, 1]);
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let Err(Error::NoEvenWalk { reason, .. }) = even_walk(&split, 0, 2) else {
            panic!("expected an error")
        };
        assert!(reason.contains("components"));
    }

    fn check_exact(g: &Graph, k: usize, lambda: &[BigUint]) -> IntegerWeighting {
        let w = integer_clique_weights(g, k, lambda, None).unwrap();
        assert_eq!(w.vertex_sums(g.n()), lambda);
        for pair in w.discrepancy_trace.windows(2) {
            assert_eq!(&pair[0], &(&pair[1] + 2u32));
        }
        assert!(w.corrections <= g.n().pow(k as u32));
        w
    }

    #[test]
    fn uniform_triangle() {
        let m = BigUint::from(3u32).pow(6) * 5u32;
        let w = check_exact(&Graph::complete(3), 3, &vec![m.clone(); 3]);
        assert_eq!(w.weights, vec![m]);
    }

    #[test]
    fn k4_edges() {
        let l = BigUint::from(4u32).pow(4) * 3u32;
        check_exact(&Graph::complete(4), 2, &vec![l; 4]);
        // uneven demand exercises the even-walk transfers
        let base = BigUint::from(4u32).pow(4) * 3u32;
        let lambda: Vec<BigUint> = [0u32, 3, 1, 2].iter().map(|&d| &base + d).collect();
        check_exact(&Graph::complete(4), 2, &lambda);
    }

    #[test]
    fn dense_random_k3() {
        let g = gnq(12, 0.9, 4).unwrap();
        let base = BigUint::from(12u32).pow(6);
        let mut lambda: Vec<BigUint> = (0..12u32).map(|i| &base + (i * 7919) % 1000).collect();
        let s: BigUint = lambda.iter().sum();
        let fix = (3u32 - (&s % 3u32).to_u32().unwrap()) % 3;
        lambda[0] += fix;
        check_exact(&g, 3, &lambda);
    }

    #[test]
    fn indivisible_total_is_rejected() {
        let l = BigUint::from(1000u32);
        assert!(integer_clique_weights(&Graph::complete(3), 3, &[l.clone(), l.clone(), l + 1u32], None).is_err());
    }
}
