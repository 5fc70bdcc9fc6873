//! Fractional `K_k`-factor packing LP, its covering dual, and integer
//! clique weightings with exact per-vertex sums.

pub mod integer;
pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use simplex::{LinearProgram, LpStatus, Relation};

pub use integer::{even_walk, integer_clique_weights, Hypotheses, IntegerWeighting};

/// Clique count above which the LPs refuse to build a tableau.
pub const CLIQUE_CAP: usize = 5000;

/// Tolerance for duality and for declaring a fractional factor.
pub const VALUE_TOLERANCE: f64 = 1e-6;

/// `ω: K_k(G) → ℝ≥0`, indexed like `cliques`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CliqueWeighting {
    pub cliques: Vec<Vec<Vertex>>,
    pub weights: Vec<f64>,
}

impl CliqueWeighting {
    /// `Σ_{K∋u} ω(K)` for every vertex.
    pub fn vertex_sums(&self, n: usize) -> Vec<f64> {
        let mut s = vec![0.0; n];
        for (c, w) in self.cliques.iter().zip(&self.weights) {
            for &v in c {
                s[v] += w;
            }
        }
        s
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `c: V → ℝ≥0`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VertexCover(pub Vec<f64>);

impl VertexCover {
    /// Smallest clique total `min_Q Σ_{v∈Q} c(v)`; `∞` without cliques.
    pub fn min_clique_total(&self, cliques: &[Vec<Vertex>]) -> f64 {
        cliques
            .iter()
            .map(|q| q.iter().map(|&v| self.0[v]).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpOutcome {
    Optimal,
    InfeasibleDemand,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpOutcome,
    pub objective: f64,
    pub weighting: CliqueWeighting,
    pub cover: VertexCover,
    pub duality_gap: f64,
    /// Packing value equals `Σ demand / k`, so every vertex constraint is
    /// tight.
    pub fractional_factor: bool,
}

fn cliques_capped(g: &Graph, k: usize) -> Result<Vec<Vec<Vertex>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("clique size k = {k} < 2")));
    }
    let cliques = g.cliques(k);
    if cliques.len() > CLIQUE_CAP {
        return Err(Error::CapExceeded(format!(
            "{} cliques of size {k} (cap {CLIQUE_CAP})",
            cliques.len()
        )));
    }
    Ok(cliques)
}

fn lp_failure(status: LpStatus) -> Error {
    Error::Lp(format!("{status:?}").to_lowercase())
}

/// `max Σω(K)` subject to `Σ_{K∋u} ω(K) ≤ demand(u)`, `ω ≥ 0`.
pub fn solve_packing_lp(g: &Graph, k: usize, demand: Option<&[f64]>) -> Result<LpResult> {
    let n = g.n();
    let demand: Vec<f64> = match demand {
        Some(d) if d.len() != n => {
            return Err(Error::InvalidArgument(format!(
                "demand has {} entries for {n} vertices",
                d.len()
            )))
        }
        Some(d) => d.to_vec(),
        None => vec![1.0; n],
    };
    let cliques = cliques_capped(g, k)?;
    if demand.iter().any(|&d| d < 0.0 || !d.is_finite()) {
        return Ok(LpResult {
            status: LpOutcome::InfeasibleDemand,
            objective: f64::NAN,
            weighting: CliqueWeighting {
                cliques,
                weights: Vec::new(),
            },
            cover: VertexCover(vec![0.0; n]),
            duality_gap: f64::NAN,
            fractional_factor: false,
        });
    }
    let mut lp = LinearProgram::new(vec![1.0; cliques.len()]);
    for u in 0..n {
        let row = cliques.iter().map(|c| if c.contains(&u) { 1.0 } else { 0.0 }).collect();
        lp.add_row(row, Relation::Le, demand[u]);
    }
    let sol = simplex::solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(lp_failure(sol.status));
    }
    let cover = VertexCover(sol.duals.iter().map(|y| y.max(0.0)).collect());
    let dual_value: f64 = cover.0.iter().zip(&demand).map(|(c, d)| c * d).sum();
    let target = demand.iter().sum::<f64>() / k as f64;
    Ok(LpResult {
        status: LpOutcome::Optimal,
        objective: sol.objective,
        duality_gap: (sol.objective - dual_value).abs(),
        fractional_factor: (sol.objective - target).abs() <= VALUE_TOLERANCE,
        weighting: CliqueWeighting {
            cliques,
            weights: sol.x,
        },
        cover,
    })
}

/// `min Σ c(v)` subject to `Σ_{v∈Q} c(v) ≥ 1` for every `k`-clique `Q`.
pub fn solve_covering_lp(g: &Graph, k: usize) -> Result<LpResult> {
    let n = g.n();
    let cliques = cliques_capped(g, k)?;
    let mut lp = LinearProgram::new(vec![-1.0; n]);
    for q in &cliques {
        let mut row = vec![0.0; n];
        for &v in q {
            row[v] = 1.0;
        }
        lp.add_row(row, Relation::Ge, 1.0);
    }
    let sol = simplex::solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(lp_failure(sol.status));
    }
    let objective = -sol.objective;
    let weights: Vec<f64> = sol.duals.iter().map(|y| (-y).max(0.0)).collect();
    let dual_value: f64 = weights.iter().sum();
    Ok(LpResult {
        status: LpOutcome::Optimal,
        objective,
        duality_gap: (objective - dual_value).abs(),
        fractional_factor: (objective - n as f64 / k as f64).abs() <= VALUE_TOLERANCE,
        weighting: CliqueWeighting { cliques, weights },
        cover: VertexCover(sol.x),
    })
}

/// Rescaling step on a fractional cover: with `c_min = min c(v) < 1/k` and
/// `μ = 1/(1 − k·c_min)`, returns `c'(v) = 1/k + μ(c(v) − 1/k)`.
///
/// `c'` vanishes at the minimiser, keeps every clique covered, and has
/// strictly smaller total whenever `Σc < n/k`.
pub fn rescale_cover(c: &[f64], k: usize) -> Result<Vec<f64>> {
    let kf = k as f64;
    let c_min = c.iter().copied().fold(f64::INFINITY, f64::min);
    if !(c_min >= 0.0 && c_min < 1.0 / kf) {
        return Err(Error::Precondition(format!(
            "rescaling needs 0 ≤ min c < 1/k, got {c_min}"
        )));
    }
    let mu = 1.0 / (1.0 - kf * c_min);
    Ok(c.iter().map(|&x| 1.0 / kf + mu * (x - 1.0 / kf)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_tripartite, hsz_extremal};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= VALUE_TOLERANCE
    }

    #[test]
    fn packing_examples() {
        let r = solve_packing_lp(&Graph::complete(3), 3, None).unwrap();
        assert!(close(r.objective, 1.0) && close(r.weighting.weights[0], 1.0));
        assert!(r.fractional_factor);

        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let r = solve_packing_lp(&c5, 2, None).unwrap();
        assert!(close(r.objective, 2.5));
        assert!(r.weighting.weights.iter().all(|&w| close(w, 0.5)));

        let r = solve_packing_lp(&hsz_extremal(6, 3).unwrap(), 3, None).unwrap();
        assert!(r.objective < 2.0 - VALUE_TOLERANCE);
        assert!(!r.fractional_factor);

        let r = solve_packing_lp(complete_tripartite(3, 3, 3).graph(), 3, None).unwrap();
        assert!(close(r.objective, 3.0));
    }

    #[test]
    fn covering_examples() {
        let r = solve_covering_lp(&Graph::complete(3), 3).unwrap();
        assert!(close(r.objective, 1.0));
        for n in 2..8 {
            let r = solve_covering_lp(&Graph::complete(n), 2).unwrap();
            assert!(close(r.objective, n as f64 / 2.0));
        }
        let g = hsz_extremal(6, 3).unwrap();
        let p = solve_packing_lp(&g, 3, None).unwrap();
        let c = solve_covering_lp(&g, 3).unwrap();
        assert!(close(p.objective, c.objective));
        assert!(p.duality_gap <= VALUE_TOLERANCE && c.duality_gap <= VALUE_TOLERANCE);
        assert!(c.cover.min_clique_total(&c.weighting.cliques) >= 1.0 - VALUE_TOLERANCE);
    }

    #[test]
    fn demand_feasibility() {
        let g = Graph::complete(3);
        let r = solve_packing_lp(&g, 3, Some(&[1.0, -1.0, 1.0])).unwrap();
        assert_eq!(r.status, LpOutcome::InfeasibleDemand);
        let r = solve_packing_lp(&g, 3, Some(&[2.0, 2.0, 2.0])).unwrap();
        assert!(close(r.objective, 2.0) && r.fractional_factor);
        assert!(solve_packing_lp(&g, 3, Some(&[1.0])).is_err());
    }

    #[test]
    fn rescale_examples() {
        let cliques = hsz_extremal(6, 3).unwrap().cliques(3);
        let c = vec![0.05, 0.05, 0.05, 0.5, 0.5, 0.5];
        assert!(VertexCover(c.clone()).min_clique_total(&cliques) >= 1.0);
        let r = rescale_cover(&c, 3).unwrap();
        assert!(r[0].abs() < 1e-12);
        let cov = VertexCover(r.clone());
        assert!(cov.min_clique_total(&cliques) >= 1.0 - 1e-12);
        assert!(r.iter().sum::<f64>() < c.iter().sum::<f64>());
        assert!(rescale_cover(&[0.4, 0.4, 0.4], 3).is_err());
    }
}
