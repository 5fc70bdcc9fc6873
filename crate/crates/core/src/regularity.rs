//! Density, ε-regularity and super-regularity of vertex-set pairs, plus the
//! trimming and exact-density procedures built on them.
//!
//! A pair `(A, B)` is ε-regular when every `X ⊆ A`, `Y ⊆ B` with
//! `|X| ≥ ε|A|`, `|Y| ≥ ε|B|` has `|d(X, Y) − d(A, B)| < ε`. Verdicts always
//! report the measured density `d(A, B)`; whether that meets some target
//! `d` (exactly, or at least) is left to the caller.

use fixedbitset::FixedBitSet;
use log::warn;
use num_rational::Ratio;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::seed;
use crate::sparsify::subsample_exact;

/// Largest side for which [`RegularityMode::Exact`] is accepted.
pub const EXACT_SIDE_CAP: usize = 16;
pub const DEFAULT_SAMPLES: usize = 500;

/// How sampled checks draw their test sets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubsetSizes {
    /// Uniform over all qualifying subsets.
    #[default]
    Uniform,
    /// Uniform among subsets of the smallest qualifying size.
    Minimum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularityMode {
    Exact,
    Sampled {
        samples: usize,
        seed: u64,
        sizes: SubsetSizes,
    },
}

impl RegularityMode {
    pub fn sampled(samples: usize, seed: u64) -> Self {
        RegularityMode::Sampled {
            samples,
            seed,
            sizes: SubsetSizes::Uniform,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    Exact,
    Sampled,
    /// Every cross-degree is at least `(1 − ε²)` of the other side.
    DenseFastPath,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
    pub density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub pass: bool,
    pub mode: CheckMode,
    /// `d(A, B)`.
    pub density: f64,
    pub eps: f64,
    /// Minimum cross-degree fraction demanded, for super-regularity checks.
    pub delta: Option<f64>,
    /// Subset pair whose density deviates by at least ε.
    pub witness: Option<Witness>,
    /// Vertex whose cross-degree is below `δ` times the other side.
    pub low_degree: Option<(Vertex, usize)>,
}

fn check_pair(g: &Graph, a: &[Vertex], b: &[Vertex]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("empty side in vertex pair".into()));
    }
    let mut seen = FixedBitSet::with_capacity(g.n());
    for &v in a.iter().chain(b) {
        g.check_vertex(v)?;
        if seen.put(v) {
            return Err(Error::InvalidArgument(format!("vertex {v} repeated in pair")));
        }
    }
    Ok(())
}

fn to_set(n: usize, vs: &[Vertex]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.extend(vs.iter().copied());
    s
}

/// `e(X, Y)` for disjoint `X`, `Y`.
pub fn cross_edges(g: &Graph, x: &[Vertex], y: &[Vertex]) -> usize {
    let ys = to_set(g.n(), y);
    x.iter().map(|&v| g.degree_into(v, &ys)).sum()
}

/// `e(X, Y) / (|X||Y|)`.
pub fn density(g: &Graph, x: &[Vertex], y: &[Vertex]) -> Result<Ratio<u64>> {
    check_pair(g, x, y)?;
    Ok(Ratio::new(cross_edges(g, x, y) as u64, (x.len() * y.len()) as u64))
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Smallest `s ≥ 1` with `s ≥ ε·size`.
pub fn min_subset_size(eps: f64, size: usize) -> usize {
    let target = eps * size as f64;
    let mut s = target.ceil().max(1.0) as usize;
    while s > 1 && (s - 1) as f64 >= target {
        s -= 1;
    }
    s.min(size)
}

/// `|e_xy·|A||B| − e_ab·|X||Y|| ≥ ε·|X||Y||A||B|`, evaluated without
/// dividing.
fn deviates(e_xy: usize, x: usize, y: usize, e_ab: usize, a: usize, b: usize, eps: f64) -> bool {
    let lhs = (e_xy as i128 * (a * b) as i128 - e_ab as i128 * (x * y) as i128).unsigned_abs();
    lhs as f64 >= eps * (x * y * a * b) as f64
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} outside (0, 1]")));
    }
    Ok(())
}

/// Checks whether `(A, B)` is ε-regular.
///
/// Exact mode enumerates every qualifying `X ⊆ A`; for fixed `X` and `|Y|`
/// the extreme densities come from the `|Y|` vertices of `B` with the most
/// and fewest neighbours in `X`, so the search over `Y` is a sort.
/// Sampled mode can only prove irregularity.
pub fn check_regular_pair(
    g: &Graph,
    a: &[Vertex],
    b: &[Vertex],
    eps: f64,
    mode: RegularityMode,
) -> Result<RegularityVerdict> {
    check_pair(g, a, b)?;
    check_eps(eps)?;
    let e_ab = cross_edges(g, a, b);
    let density = e_ab as f64 / (a.len() * b.len()) as f64;
    let (mode_used, witness) = match mode {
        RegularityMode::Exact => {
            if a.len() > EXACT_SIDE_CAP || b.len() > EXACT_SIDE_CAP {
                return Err(Error::CapExceeded(format!(
                    "exact regularity check needs sides ≤ {EXACT_SIDE_CAP}, got {} and {}",
                    a.len(),
                    b.len()
                )));
            }
            (CheckMode::Exact, exact_witness(g, a, b, e_ab, eps))
        }
        RegularityMode::Sampled { samples, seed, sizes } => (
            CheckMode::Sampled,
            sampled_witness(g, a, b, e_ab, eps, samples, seed, sizes),
        ),
    };
    Ok(RegularityVerdict {
        pass: witness.is_none(),
        mode: mode_used,
        density,
        eps,
        delta: None,
        witness,
        low_degree: None,
    })
}

fn exact_witness(g: &Graph, a: &[Vertex], b: &[Vertex], e_ab: usize, eps: f64) -> Option<Witness> {
    let (na, nb) = (a.len(), b.len());
    let min_x = min_subset_size(eps, na);
    let min_y = min_subset_size(eps, nb);
    // adj[i] = neighbours of a[i] in B as a bitmask over B's indices
    let adj: Vec<u32> = a
        .iter()
        .map(|&u| {
            b.iter()
                .enumerate()
                .filter(|&(_, &w)| g.has_edge(u, w))
                .fold(0u32, |m, (j, _)| m | (1 << j))
        })
        .collect();
    let mut order: Vec<usize> = (0..nb).collect();
    let mut deg = vec![0usize; nb];
    for xmask in 1u32..(1u32 << na) {
        let sx = xmask.count_ones() as usize;
        if sx < min_x {
            continue;
        }
        deg.iter_mut().for_each(|d| *d = 0);
        let mut bits = xmask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut row = adj[i];
            while row != 0 {
                deg[row.trailing_zeros() as usize] += 1;
                row &= row - 1;
            }
        }
        // descending degree, lowest index first on ties
        order.sort_by(|&i, &j| deg[j].cmp(&deg[i]).then(i.cmp(&j)));
        let (mut top, mut bottom) = (0usize, 0usize);
        for s in 1..=nb {
            top += deg[order[s - 1]];
            bottom += deg[order[nb - s]];
            if s < min_y {
                continue;
            }
            let pick = if deviates(top, sx, s, e_ab, na, nb, eps) {
                Some(order[..s].to_vec())
            } else if deviates(bottom, sx, s, e_ab, na, nb, eps) {
                Some(order[nb - s..].to_vec())
            } else {
                None
            };
            if let Some(mut ys) = pick {
                ys.sort_unstable();
                let x: Vec<Vertex> = (0..na).filter(|&i| xmask >> i & 1 == 1).map(|i| a[i]).collect();
                let y: Vec<Vertex> = ys.into_iter().map(|j| b[j]).collect();
                let e = if deviates(top, sx, s, e_ab, na, nb, eps) {
                    top
                } else {
                    bottom
                };
                return Some(Witness {
                    density: e as f64 / (sx * s) as f64,
                    x,
                    y,
                });
            }
        }
    }
    None
}

/// Distribution of `|X|` making `X` uniform over qualifying subsets.
fn size_distribution(size: usize, min: usize) -> WeightedIndex<f64> {
    // C(size, s) relative to the central coefficient; tails underflow to 0
    let mid = size / 2;
    let mut w = vec![0.0f64; size + 1];
    w[mid] = 1.0;
    for s in mid + 1..=size {
        w[s] = w[s - 1] * (size - s + 1) as f64 / s as f64;
    }
    for s in (0..mid).rev() {
        w[s] = w[s + 1] * (s + 1) as f64 / (size - s) as f64;
    }
    for x in w.iter_mut().take(min) {
        *x = 0.0;
    }
    if w.iter().all(|&x| x == 0.0) {
        w[min] = 1.0;
    }
    WeightedIndex::new(&w).expect("non-negative weights with positive total")
}

fn random_subset(rng: &mut ChaCha8Rng, from: &[Vertex], size: usize) -> Vec<Vertex> {
    let mut idx = rand::seq::index::sample(rng, from.len(), size).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| from[i]).collect()
}

#[allow(clippy::too_many_arguments)]
fn sampled_witness(
    g: &Graph,
    a: &[Vertex],
    b: &[Vertex],
    e_ab: usize,
    eps: f64,
    samples: usize,
    seed: u64,
    sizes: SubsetSizes,
) -> Option<Witness> {
    let (na, nb) = (a.len(), b.len());
    let (min_x, min_y) = (min_subset_size(eps, na), min_subset_size(eps, nb));
    let dist = match sizes {
        SubsetSizes::Uniform => Some((size_distribution(na, min_x), size_distribution(nb, min_y))),
        SubsetSizes::Minimum => None,
    };
    let trial = |i: usize| -> Option<Witness> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, i as u64));
        let (sx, sy) = match &dist {
            Some((dx, dy)) => (dx.sample(&mut rng), dy.sample(&mut rng)),
            None => (min_x, min_y),
        };
        let x = random_subset(&mut rng, a, sx);
        let y = random_subset(&mut rng, b, sy);
        let e = cross_edges(g, &x, &y);
        deviates(e, sx, sy, e_ab, na, nb, eps).then(|| Witness {
            density: e as f64 / (sx * sy) as f64,
            x,
            y,
        })
    };
    crate::par::first_some(samples, trial)
}

/// Every cross-degree is at least `(1 − ε²)` times the other side, which
/// makes the pair ε-regular with minimum degree fraction `1 − ε² − ε`.
pub fn dense_fast_path(g: &Graph, a: &[Vertex], b: &[Vertex], eps: f64) -> Result<bool> {
    check_pair(g, a, b)?;
    let floor = 1.0 - eps * eps;
    Ok(min_cross_degree_fraction(g, a, b).0 >= floor)
}

/// Minimum of `deg(v; other)/|other|` over both sides, with a minimiser.
fn min_cross_degree_fraction(g: &Graph, a: &[Vertex], b: &[Vertex]) -> (f64, Vertex, usize) {
    let (sa, sb) = (to_set(g.n(), a), to_set(g.n(), b));
    let mut best = (f64::INFINITY, 0, 0);
    for (side, other, size) in [(a, &sb, b.len()), (b, &sa, a.len())] {
        for &v in side {
            let d = g.degree_into(v, other);
            let f = d as f64 / size as f64;
            if f < best.0 {
                best = (f, v, d);
            }
        }
    }
    best
}

/// ε-regularity plus `deg(v; B) ≥ δ|B|` for `v ∈ A` and symmetrically.
pub fn check_super_regular(
    g: &Graph,
    a: &[Vertex],
    b: &[Vertex],
    eps: f64,
    delta: f64,
    mode: RegularityMode,
) -> Result<RegularityVerdict> {
    check_pair(g, a, b)?;
    check_eps(eps)?;
    let (frac, v, d) = min_cross_degree_fraction(g, a, b);
    let density = ratio_f64(density(g, a, b)?);
    if frac >= 1.0 - eps * eps && delta <= 1.0 - eps * eps - eps {
        return Ok(RegularityVerdict {
            pass: true,
            mode: CheckMode::DenseFastPath,
            density,
            eps,
            delta: Some(delta),
            witness: None,
            low_degree: None,
        });
    }
    let mut verdict = check_regular_pair(g, a, b, eps, mode)?;
    verdict.delta = Some(delta);
    if frac < delta {
        verdict.pass = false;
        verdict.low_degree = Some((v, d));
    }
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrimResult {
    pub parts: Vec<Vec<Vertex>>,
    /// Low-degree vertices removed from each part before padding.
    pub low_degree_removed: Vec<usize>,
    /// Sampled check of every pair at `(2ε, d − kε)`.
    pub verdicts: Vec<((usize, usize), RegularityVerdict)>,
    pub pass: bool,
}

/// Trims each of `k` equal parts of size `n` to exactly `⌈(1 − kε)n⌉`
/// vertices, first removing vertices with fewer than `(d − ε)n` neighbours
/// in some other part, then the lowest total cross-degree vertices.
pub fn trim_to_super_regular(
    g: &Graph,
    parts: &[Vec<Vertex>],
    eps: f64,
    d: f64,
    samples: usize,
    seed: u64,
) -> Result<TrimResult> {
    let k = parts.len();
    if k < 2 {
        return Err(Error::InvalidArgument("need at least two parts".into()));
    }
    let n = parts[0].len();
    if parts.iter().any(|p| p.len() != n) || n == 0 {
        return Err(Error::InvalidArgument(
            "parts must be non-empty and equal in size".into(),
        ));
    }
    check_eps(eps)?;
    if eps > 1.0 / (2 * k) as f64 {
        return Err(Error::Precondition(format!("eps = {eps} exceeds 1/(2k)")));
    }
    for i in 0..k {
        for j in i + 1..k {
            check_pair(g, &parts[i], &parts[j])?;
        }
    }
    let sets: Vec<FixedBitSet> = parts.iter().map(|p| to_set(g.n(), p)).collect();
    let keep = ((1.0 - k as f64 * eps) * n as f64 - 1e-9).ceil() as usize;
    let drop = n - keep;
    let floor = (d - eps) * n as f64;

    let mut trimmed = Vec::with_capacity(k);
    let mut low_removed = Vec::with_capacity(k);
    for (i, part) in parts.iter().enumerate() {
        let degs: Vec<Vec<usize>> = part
            .iter()
            .map(|&v| (0..k).filter(|&j| j != i).map(|j| g.degree_into(v, &sets[j])).collect())
            .collect();
        let low: Vec<usize> = (0..n)
            .filter(|&t| degs[t].iter().any(|&x| (x as f64) < floor))
            .collect();
        if low.len() > drop {
            return Err(Error::Precondition(format!(
                "part {i} has {} vertices below (d − ε)n toward another part, more than the {drop} allowed",
                low.len()
            )));
        }
        let mut removed = FixedBitSet::with_capacity(n);
        removed.extend(low.iter().copied());
        let mut rest: Vec<usize> = (0..n).filter(|&t| !removed.contains(t)).collect();
        rest.sort_by_key(|&t| (degs[t].iter().sum::<usize>(), part[t]));
        removed.extend(rest.into_iter().take(drop - low.len()));
        let mut kept: Vec<Vertex> = (0..n).filter(|&t| !removed.contains(t)).map(|t| part[t]).collect();
        kept.sort_unstable();
        trimmed.push(kept);
        low_removed.push(low.len());
    }

    let mut verdicts = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let v = check_super_regular(
                g,
                &trimmed[i],
                &trimmed[j],
                (2.0 * eps).min(1.0),
                d - k as f64 * eps,
                RegularityMode::sampled(samples, seed::mix(&[seed, i as u64, j as u64])),
            )?;
            verdicts.push(((i, j), v));
        }
    }
    let pass = verdicts.iter().all(|(_, v)| v.pass);
    Ok(TrimResult {
        parts: trimmed,
        low_degree_removed: low_removed,
        verdicts,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleEstimate {
    pub predicted: f64,
    pub actual: u64,
    /// `10εn³`.
    pub tolerance: f64,
    pub pass: bool,
}

/// Exact count of triangles meeting `X_1`, `X_2`, `X_3` once each.
pub fn transversal_triangles(g: &Graph, x: [&[Vertex]; 3]) -> u64 {
    let n = g.n();
    let s2 = to_set(n, x[1]);
    let s3 = to_set(n, x[2]);
    let mut total = 0u64;
    for &u in x[0] {
        let mut n2 = g.neighbors(u).clone();
        n2.intersect_with(&s2);
        let mut n3 = g.neighbors(u).clone();
        n3.intersect_with(&s3);
        for v in n2.ones() {
            total += g.neighbors(v).intersection(&n3).count() as u64;
        }
    }
    total
}

/// Compares the transversal triangle count on `X_1, X_2, X_3` with
/// `d₁₂d₁₃d₂₃|X₁||X₂||X₃|`, allowing `10εn³` for part size `n`.
pub fn triangle_estimate(
    g: &Graph,
    x: [&[Vertex]; 3],
    densities: [f64; 3],
    eps: f64,
    part_size: usize,
) -> Result<TriangleEstimate> {
    check_eps(eps)?;
    for xi in x {
        if (xi.len() as f64) < eps * part_size as f64 {
            return Err(Error::Precondition(format!(
                "|X_i| = {} below ε·n = {}",
                xi.len(),
                eps * part_size as f64
            )));
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        check_pair(g, x[i], x[j])?;
    }
    let [d12, d13, d23] = densities;
    let predicted = d12 * d13 * d23 * (x[0].len() * x[1].len() * x[2].len()) as f64;
    let actual = transversal_triangles(g, x);
    let tolerance = 10.0 * eps * (part_size as f64).powi(3);
    Ok(TriangleEstimate {
        predicted,
        actual,
        tolerance,
        pass: (actual as f64 - predicted).abs() <= tolerance,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactDensityResult {
    /// Spanning graph holding only the kept `V_1`–`V_2` edges.
    pub graph: Graph,
    pub edge_count: usize,
    /// `|E_Y|`: edges at low-degree vertices, all kept.
    pub protected: usize,
    pub low_degree: [Vec<Vertex>; 2],
    pub min_cross_degree: usize,
}

/// Thins the bipartite graph between `V_1` and `V_2` (both of size `n`) to
/// exactly `dn²` edges: edges at vertices of degree at most `(d' − ε²)n`
/// (`d'` the current density) are all kept, the rest are subsampled
/// uniformly.
pub fn exact_density_subgraph(
    g: &Graph,
    v1: &[Vertex],
    v2: &[Vertex],
    d: f64,
    eps: f64,
    seed: u64,
) -> Result<ExactDensityResult> {
    check_pair(g, v1, v2)?;
    check_eps(eps)?;
    let n = v1.len();
    if v2.len() != n {
        return Err(Error::InvalidArgument("parts must have equal size".into()));
    }
    let target_f = d * (n * n) as f64;
    let target = target_f.round();
    if (target_f - target).abs() > 1e-6 || target < 0.0 {
        return Err(Error::Precondition(format!(
            "d·n² = {target_f} is not a natural number"
        )));
    }
    let target = target as usize;
    if d < 4.0 * eps {
        return Err(Error::Precondition(format!("d = {d} below 4ε")));
    }
    let (s1, s2) = (to_set(g.n(), v1), to_set(g.n(), v2));
    let cross: Vec<Edge> = v1
        .iter()
        .flat_map(|&u| {
            g.neighbors(u)
                .intersection(&s2)
                .map(move |w| (u.min(w), u.max(w)))
                .collect::<Vec<_>>()
        })
        .collect();
    let d_cur = cross.len() as f64 / (n * n) as f64;
    if d_cur < d {
        return Err(Error::Precondition(format!("density {d_cur} below target {d}")));
    }
    let (frac, _, _) = min_cross_degree_fraction(g, v1, v2);
    if frac < d - eps * eps {
        warn!("exact_density_subgraph: minimum cross-degree fraction {frac:.3} below d − ε²");
    }
    let limit = (d_cur - eps * eps) * n as f64;
    let low = |side: &[Vertex], other: &FixedBitSet| -> Vec<Vertex> {
        side.iter()
            .copied()
            .filter(|&v| g.degree_into(v, other) as f64 <= limit)
            .collect()
    };
    let y = [low(v1, &s2), low(v2, &s1)];
    let mut in_y = FixedBitSet::with_capacity(g.n());
    in_y.extend(y[0].iter().chain(&y[1]).copied());
    let (protected, free): (Vec<Edge>, Vec<Edge>) = cross
        .into_iter()
        .partition(|&(a, b)| in_y.contains(a) || in_y.contains(b));
    if protected.len() > target {
        return Err(Error::Precondition(format!(
            "{} edges at low-degree vertices exceed d·n² = {target}",
            protected.len()
        )));
    }
    let mut kept = subsample_exact(&free, target - protected.len(), seed)?;
    kept.extend_from_slice(&protected);
    let graph = Graph::from_edges(g.n(), kept.iter().copied())?;
    let (_, _, min_deg) = min_cross_degree_fraction(&graph, v1, v2);
    Ok(ExactDensityResult {
        edge_count: kept.len(),
        protected: protected.len(),
        low_degree: y,
        min_cross_degree: min_deg,
        graph,
    })
}
