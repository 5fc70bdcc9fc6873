//! Entropy and concentration instrumentation for tripartite graphs and
//! their sparsifications. Entropies are in nats. Distributions over
//! embeddings are computed by exact counting; only the final logarithm is
//! floating point.

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{count_embeddings, triangle_distribution};
use crate::graph::{Edge, TripartiteGraph, Vertex, VertexTuple};
use crate::regularity::transversal_triangles;
use crate::{par, seed};

const SUM_TOLERANCE: f64 = 1e-9;

fn validate(dist: &[f64]) -> Result<()> {
    if dist.is_empty() {
        return Err(Error::InvalidDistribution("empty support".into()));
    }
    if let Some(p) = dist.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::InvalidDistribution(format!("probability {p}")));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    Ok(())
}

/// `−Σ p log p`, with `0 log 0 = 0`.
pub fn shannon_entropy(dist: &[f64]) -> Result<f64> {
    validate(dist)?;
    Ok(dist.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum())
}

/// `h(Y | X)` for a joint law given as rows `P[X = x, Y = ·]`.
pub fn conditional_entropy(joint: &[Vec<f64>]) -> Result<f64> {
    let flat: Vec<f64> = joint.iter().flatten().copied().collect();
    validate(&flat)?;
    Ok(joint
        .iter()
        .map(|row| {
            let px: f64 = row.iter().sum();
            if px == 0.0 {
                return 0.0;
            }
            row.iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| -p * (p / px).ln())
                .sum::<f64>()
        })
        .sum())
}

/// `H(n, p, d) = log((pd)³n²)`.
pub fn benchmark_h(n: usize, p: f64, d: f64) -> Result<f64> {
    if n == 0 || !(p > 0.0 && p <= 1.0) || !(d > 0.0 && d <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "benchmark needs n ≥ 1 and p, d in (0, 1], got n = {n}, p = {p}, d = {d}"
        )));
    }
    Ok(3.0 * (p * d).ln() + 2.0 * (n as f64).ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearUniform {
    /// `|J| / |S|`.
    pub j_fraction: f64,
    /// `P[J]`.
    pub j_mass: f64,
    pub pass: bool,
}

/// `J = {x : (1−β)/|S| ≤ p(x) ≤ (1+β)/|S|}`; passes iff `|J| ≥ (1−β)|S|`
/// and `P[J] ≥ 1 − β`.
pub fn near_uniform_check(dist: &[f64], beta: f64) -> Result<NearUniform> {
    validate(dist)?;
    let s = dist.len() as f64;
    let (lo, hi) = ((1.0 - beta) / s, (1.0 + beta) / s);
    let (count, mass) = dist
        .iter()
        .filter(|&&p| lo <= p && p <= hi)
        .fold((0usize, 0.0), |(c, m), &p| (c + 1, m + p));
    let j_fraction = count as f64 / s;
    Ok(NearUniform {
        j_fraction,
        j_mass: mass,
        pass: count as f64 >= (1.0 - beta) * s && mass >= 1.0 - beta - SUM_TOLERANCE,
    })
}

/// Entropy floor `log|S| − β⁴/2000` above which a law on `S` is near
/// uniform at level `β`.
pub fn near_uniform_entropy_floor(support: usize, beta: f64) -> f64 {
    (support as f64).ln() - beta.powi(4) / 2000.0
}

/// Removal list `û` plus an optional extra vertex, validated.
fn removal(g: &TripartiteGraph, avoid: &VertexTuple, extra: &[Vertex]) -> Result<Vec<Vertex>> {
    let mut out = avoid.as_slice().to_vec();
    for &x in extra {
        g.graph().check_vertex(x)?;
        if out.contains(&x) {
            return Err(Error::InvalidArgument(format!("vertex {x} listed twice")));
        }
        out.push(x);
    }
    Ok(out)
}

fn psi_without(g: &TripartiteGraph, t: usize, remove: &[Vertex]) -> Result<BigUint> {
    let reduced = g.remove_vertices(remove);
    Ok(count_embeddings(&reduced.graph, t, &VertexTuple::empty(), None)?.value)
}

/// `ζ_v(w₁, w₂) = t·|Ψ^{t−1}(Γ − û − u − v − w₁ − w₂)|`.
pub fn zeta_weight(
    g: &TripartiteGraph,
    t: usize,
    avoid: &VertexTuple,
    u: Option<Vertex>,
    v: Vertex,
    e: Edge,
) -> Result<BigUint> {
    let (w1, w2) = e;
    let pv = {
        g.graph().check_vertex(v)?;
        g.part_of(v)
    };
    g.graph().check_vertex(w1)?;
    g.graph().check_vertex(w2)?;
    let parts = [pv, g.part_of(w1), g.part_of(w2)];
    if parts[0] == parts[1] || parts[0] == parts[2] || parts[1] == parts[2] {
        return Err(Error::InvalidArgument(format!(
            "{w1}, {w2} and {v} must lie in three different parts"
        )));
    }
    let mut extra: Vec<Vertex> = u.into_iter().collect();
    extra.extend([v, w1, w2]);
    let remove = removal(g, avoid, &extra)?;
    if t == 0 {
        return Ok(BigUint::zero());
    }
    Ok(BigUint::from(t) * psi_without(g, t - 1, &remove)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexEntropy {
    pub vertex: Vertex,
    /// `P[Y_v = 1]`.
    pub covered: f64,
    /// `h(ψ*_v | Y_v = 1)`; absent when `v` is never covered.
    pub entropy: Option<f64>,
    /// `log|tr_v|` over transversal triangles of the reduced graph.
    pub log_link: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Zero-based part examined.
    pub part: usize,
    pub benchmark: f64,
    pub beta: f64,
    pub eps: f64,
    pub vertices: Vec<VertexEntropy>,
    /// Fraction of profiled vertices with `h_v ≥ H − β`.
    pub lower_good: f64,
    /// Fraction with `h_v ≤ H + ε'`.
    pub upper_good: f64,
}

/// Per-vertex conditional entropies of the triangle through `v` under a
/// uniformly random embedding in `Ψ^t(Γ − û − u)`, for every `v` in the
/// part after `û` (other than `u`). `n`, `p`, `d` feed the benchmark `H`.
#[allow(clippy::too_many_arguments)]
pub fn entropy_profile(
    g: &TripartiteGraph,
    t: usize,
    avoid: &VertexTuple,
    u: Option<Vertex>,
    p: f64,
    d: f64,
    beta: f64,
    eps: f64,
) -> Result<EntropyReport> {
    let part = avoid.len();
    if part > 2 {
        return Err(Error::InvalidArgument("û has no part left to profile".into()));
    }
    if let Some(u) = u {
        g.graph().check_vertex(u)?;
        if g.part_of(u) != part {
            return Err(Error::InvalidArgument(format!("u = {u} is not in part {}", part + 1)));
        }
    }
    let remove = removal(g, avoid, &u.into_iter().collect::<Vec<_>>())?;
    let reduced = g.remove_vertices(&remove);
    let rg = &reduced.graph;
    let benchmark = benchmark_h(g.part_size(), p, d)?;
    let mut report = EntropyReport {
        part,
        benchmark,
        beta,
        eps,
        vertices: Vec::new(),
        lower_good: 0.0,
        upper_good: 0.0,
    };
    if t == 0 {
        return Ok(report);
    }
    if count_embeddings(rg, t, &VertexTuple::empty(), None)?.value.is_zero() {
        return Err(Error::EmptyEmbeddingSet);
    }
    let vs: Vec<Vertex> = g.part(part).filter(|v| Some(*v) != u).collect();
    let links = transversal_link_sizes(rg);
    let rows = par::map_range(vs.len(), |i| -> Result<VertexEntropy> {
        let v = vs[i];
        let rv = reduced.new_id(v).expect("profiled vertex survives");
        let dist = triangle_distribution(rg, t, &VertexTuple::empty(), rv)?;
        Ok(VertexEntropy {
            vertex: v,
            covered: dist.covered_probability().to_f64().unwrap_or(0.0),
            entropy: dist.conditional_entropy(),
            log_link: (links[rv] as f64).ln(),
        })
    });
    report.vertices = rows.into_iter().collect::<Result<_>>()?;
    let hs: Vec<f64> = report.vertices.iter().filter_map(|r| r.entropy).collect();
    if !report.vertices.is_empty() {
        let m = report.vertices.len() as f64;
        report.lower_good = hs.iter().filter(|&&h| h >= benchmark - beta).count() as f64 / m;
        report.upper_good = hs.iter().filter(|&&h| h <= benchmark + eps).count() as f64 / m;
    }
    Ok(report)
}

/// Number of transversal triangles at every vertex.
pub fn transversal_link_sizes(g: &TripartiteGraph) -> Vec<u64> {
    let gr = g.graph();
    let mut counts = vec![0u64; gr.n()];
    let v3 = g.part_set(2);
    for x in g.part(0) {
        let mut nx3 = gr.neighbors(x).clone();
        nx3.intersect_with(&v3);
        for y in gr.neighbors(x).ones().filter(|&y| g.part_of(y) == 1) {
            for z in gr.neighbors(y).intersection(&nx3) {
                counts[x] += 1;
                counts[y] += 1;
                counts[z] += 1;
            }
        }
    }
    counts
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdlReport {
    pub part: usize,
    /// `|Ψ^t_{û,u}| / |Ψ^t_û|` for each `u` of the part.
    pub ratios: Vec<(Vertex, f64)>,
    /// `(d/10)²(n − t)/n`.
    pub floor: f64,
    pub fraction_meeting: f64,
    /// `Σ_u |Ψ^t_{û,u}| = (n − t)|Ψ^t_û|`, checked exactly.
    pub identity_holds: bool,
}

/// Ratios of embedding counts when one more vertex of the next part is
/// avoided, against the local-distribution floor.
pub fn ldl_profile(g: &TripartiteGraph, t: usize, avoid: &VertexTuple, d: f64) -> Result<LdlReport> {
    let part = avoid.len();
    if part > 2 {
        return Err(Error::InvalidArgument("û has no part left to extend".into()));
    }
    let base = psi_without(g, t, avoid.as_slice())?;
    if base.is_zero() {
        return Err(Error::EmptyEmbeddingSet);
    }
    let n = g.part_size();
    let us: Vec<Vertex> = g.part(part).collect();
    let counts = par::map_range(us.len(), |i| {
        let mut rem = avoid.as_slice().to_vec();
        rem.push(us[i]);
        psi_without(g, t, &rem)
    });
    let counts: Vec<BigUint> = counts.into_iter().collect::<Result<_>>()?;
    let sum: BigUint = counts.iter().sum();
    let identity_holds = sum == BigUint::from(g.sizes()[part].saturating_sub(t)) * &base;
    let denom = BigInt::from(base);
    let ratios: Vec<(Vertex, f64)> = us
        .iter()
        .zip(&counts)
        .map(|(&u, c)| {
            let r = BigRational::new(BigInt::from(c.clone()), denom.clone());
            (u, r.to_f64().unwrap_or(f64::NAN))
        })
        .collect();
    let floor = (d / 10.0).powi(2) * (n.saturating_sub(t)) as f64 / n as f64;
    let meeting = ratios.iter().filter(|(_, r)| *r >= floor).count();
    Ok(LdlReport {
        part,
        fraction_meeting: meeting as f64 / ratios.len().max(1) as f64,
        ratios,
        floor,
        identity_holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationCheck {
    pub name: String,
    pub predicted: f64,
    /// Worst observed value for the check.
    pub observed: f64,
    pub tolerance: f64,
    pub exceptions: usize,
    pub allowed_exceptions: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub checks: Vec<ConcentrationCheck>,
    pub pass: bool,
}

fn random_subset(rng: &mut ChaCha8Rng, from: &[Vertex]) -> Vec<Vertex> {
    use rand::Rng;
    let size = rng.random_range(1..=from.len());
    let mut idx = rand::seq::index::sample(rng, from.len(), size).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| from[i]).collect()
}

/// Triangle-count concentration in a sparsified tripartite graph `Γ_p` with
/// base density `d` and parts of size `n`:
///
/// * `subsets`: sampled `X_i ⊆ V^i` have `(pd)³|X₁||X₂||X₃| ± ε'p³n³`
///   transversal triangles;
/// * `vertex`: in each part at most `ε'n` vertices have a triangle count
///   outside `(1 ± ε')(pd)³n²`;
/// * `cap`: every vertex lies in at most `10p³n²` triangles.
pub fn concentration_check(
    gp: &TripartiteGraph,
    d: f64,
    p: f64,
    eps: f64,
    subset_samples: usize,
    seed: u64,
) -> Result<ConcentrationReport> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&d) {
        return Err(Error::InvalidArgument(format!("p = {p}, d = {d} outside [0, 1]")));
    }
    let n = gp.part_size();
    let nf = n as f64;
    let pd3 = (p * d).powi(3);
    let mut checks = Vec::with_capacity(3);

    let parts: Vec<Vec<Vertex>> = (0..3).map(|i| gp.part(i).collect()).collect();
    let tol_a = eps * p.powi(3) * nf.powi(3);
    let deviations = par::map_range(subset_samples, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, s as u64));
        let x: Vec<Vec<Vertex>> = parts.iter().map(|p| random_subset(&mut rng, p)).collect();
        let predicted = pd3 * (x[0].len() * x[1].len() * x[2].len()) as f64;
        let actual = transversal_triangles(gp.graph(), [&x[0], &x[1], &x[2]]) as f64;
        (actual - predicted, predicted)
    });
    let worst = deviations
        .iter()
        .copied()
        .max_by(|a, b| a.0.abs().total_cmp(&b.0.abs()))
        .unwrap_or((0.0, 0.0));
    let bad_a = deviations.iter().filter(|(dev, _)| dev.abs() > tol_a).count();
    checks.push(ConcentrationCheck {
        name: "subsets".into(),
        predicted: worst.1,
        observed: worst.1 + worst.0,
        tolerance: tol_a,
        exceptions: bad_a,
        allowed_exceptions: 0,
        pass: bad_a == 0,
    });

    let links = transversal_link_sizes(gp);
    let target = pd3 * nf * nf;
    let allowed = (eps * nf).floor() as usize;
    let exceptions_per_part: Vec<usize> = (0..3)
        .map(|i| {
            gp.part(i)
                .filter(|&v| (links[v] as f64 - target).abs() > eps * target)
                .count()
        })
        .collect();
    let worst_link = links
        .iter()
        .map(|&c| c as f64)
        .max_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .unwrap_or(0.0);
    let max_exc = exceptions_per_part.iter().copied().max().unwrap_or(0);
    checks.push(ConcentrationCheck {
        name: "vertex".into(),
        predicted: target,
        observed: worst_link,
        tolerance: eps * target,
        exceptions: max_exc,
        allowed_exceptions: allowed,
        pass: max_exc <= allowed,
    });

    let cap = 10.0 * p.powi(3) * nf * nf;
    let max_link = links.iter().copied().max().unwrap_or(0) as f64;
    let over = links.iter().filter(|&&c| c as f64 > cap).count();
    checks.push(ConcentrationCheck {
        name: "cap".into(),
        predicted: cap,
        observed: max_link,
        tolerance: 0.0,
        exceptions: over,
        allowed_exceptions: 0,
        pass: over == 0,
    });
    let pass = checks.iter().all(|c| c.pass);
    Ok(ConcentrationReport { checks, pass })
}

/// Vertices of `part` whose transversal triangle count lies outside
/// `(1 ± ε')(pd)³n²`.
pub fn link_exceptions(gp: &TripartiteGraph, part: usize, p: f64, d: f64, eps: f64) -> FixedBitSet {
    let links = transversal_link_sizes(gp);
    let target = (p * d).powi(3) * (gp.part_size() as f64).powi(2);
    let mut out = FixedBitSet::with_capacity(gp.graph().n());
    out.extend(
        gp.part(part)
            .filter(|&v| (links[v] as f64 - target).abs() > eps * target),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_tripartite;
    use crate::graph::Graph;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert!(close(shannon_entropy(&[0.125; 8]).unwrap(), 8f64.ln()));
        assert!(close(shannon_entropy(&[0.5, 0.25, 0.25]).unwrap(), 1.5 * 2f64.ln()));
        assert!(shannon_entropy(&[0.5, 0.4]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn chain_rule() {
        let joint = vec![vec![0.1, 0.2, 0.1], vec![0.3, 0.0, 0.3]];
        let hxy = shannon_entropy(&joint.concat()).unwrap();
        let hx = shannon_entropy(&[0.4, 0.6]).unwrap();
        assert!((hxy - hx - conditional_entropy(&joint).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn benchmark_examples() {
        assert!(close(benchmark_h(7, 1.0, 1.0).unwrap(), 2.0 * 7f64.ln()));
        assert!(close(benchmark_h(10, 1.0, 1.0).unwrap(), 100f64.ln()));
        // (0.1·0.5)³·100² = 1.25
        assert!((benchmark_h(100, 0.1, 0.5).unwrap() - 1.25f64.ln()).abs() < 1e-12);
        assert!(benchmark_h(10, 0.0, 1.0).is_err());
    }

    #[test]
    fn near_uniform_examples() {
        let u = near_uniform_check(&[0.1; 10], 0.01).unwrap();
        assert!(u.pass && u.j_fraction == 1.0);
        let mut point = vec![0.0; 10];
        point[0] = 1.0;
        assert!(!near_uniform_check(&point, 0.1).unwrap().pass);
    }

    #[test]
    fn complete_tripartite_profiles() {
        let g = complete_tripartite(3, 3, 3);
        let r = entropy_profile(&g, 3, &VertexTuple::empty(), None, 1.0, 1.0, 0.1, 0.1).unwrap();
        assert_eq!(r.vertices.len(), 3);
        for v in &r.vertices {
            assert!((v.entropy.unwrap() - 2.0 * 3f64.ln()).abs() < 1e-9);
        }
        let empty = entropy_profile(&g, 0, &VertexTuple::empty(), None, 1.0, 1.0, 0.1, 0.1).unwrap();
        assert!(empty.vertices.is_empty());

        let l = ldl_profile(&g, 2, &VertexTuple::empty(), 1.0).unwrap();
        assert!(l.identity_holds);
        assert!(l.ratios.iter().all(|(_, r)| (r - 1.0 / 3.0).abs() < 1e-12));
        let l0 = ldl_profile(&g, 0, &VertexTuple::empty(), 1.0).unwrap();
        assert!(l0.ratios.iter().all(|(_, r)| *r == 1.0));
    }

    #[test]
    fn zeta_sums_to_rooted_count() {
        let g = complete_tripartite(3, 3, 3);
        // K_{3,3,3}, t = 2, v = 0: Σ_e ζ = |Ψ²| − |Ψ²(Γ − v)|
        let total: BigUint = g
            .graph()
            .triangle_link(0)
            .unwrap()
            .into_iter()
            .map(|e| zeta_weight(&g, 2, &VertexTuple::empty(), None, 0, e).unwrap())
            .sum();
        let all = psi_without(&g, 2, &[]).unwrap();
        let without = psi_without(&g, 2, &[0]).unwrap();
        assert_eq!(total, all - without);
        assert!(zeta_weight(&g, 2, &VertexTuple::empty(), None, 0, (1, 3)).is_err());
    }

    #[test]
    fn concentration_extremes() {
        let g = complete_tripartite(6, 6, 6);
        let r = concentration_check(&g, 1.0, 1.0, 0.1, 20, 1).unwrap();
        assert_eq!(r.checks[1].observed, 36.0);
        assert!(r.checks[0].pass && r.checks[1].pass);
        let e = TripartiteGraph::new(Graph::empty(18), [6, 6, 6]).unwrap();
        let r = concentration_check(&e, 1.0, 0.0, 0.1, 20, 1).unwrap();
        assert!(r.checks[0].pass);
    }
}
