//! Browser demo: sample a graph, sparsify it, look for a triangle factor,
//! trace a success-rate curve and solve the fractional packing LP.
//!
//! Each export returns a JSON string. The plain functions behind the
//! exports are what the native tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use trifactor::exact::{find_triangle_factor_with_budget, SearchBudget, SearchOutcome};
use trifactor::experiment::trial_seed;
use trifactor::generators::Family;
use trifactor::hsz::verify_hsz;
use trifactor::io::GraphFile;
use trifactor::lp::solve_packing_lp;
use trifactor::seed::derive;
use trifactor::sparsify::sparsify;
use trifactor::Graph;

/// Search nodes per solve; the browser has no clock to time out on.
pub const NODE_BUDGET: u64 = 2_000_000;
/// Largest vertex count the demo accepts.
pub const MAX_VERTICES: usize = 90;

#[derive(Debug, Serialize)]
pub struct Instance {
    pub vertices: usize,
    /// Part sizes for tripartite families.
    pub parts: Option<[usize; 3]>,
    pub base_edges: usize,
    pub edges: Vec<[usize; 2]>,
    /// `null` when no factor exists; `"budget"` status when undecided.
    pub factor: Option<Vec<[usize; 3]>>,
    pub status: &'static str,
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub p: f64,
    pub successes: usize,
    pub decided: usize,
}

#[derive(Debug, Serialize)]
pub struct Fractional {
    pub vertices: usize,
    pub k: usize,
    pub objective: f64,
    /// `n / k`, the value of a perfect fractional factor.
    pub perfect: f64,
    pub fractional_factor: bool,
    pub min_degree: usize,
    pub integral_matching: usize,
}

/// Maps the single demo parameter onto the family's own knob.
pub fn family(tag: &str, param: f64) -> Result<Family, String> {
    let k = (param >= 2.0).then_some(param as usize);
    Family::from_tag(tag, k, Some(param), Some(param), Some(param), None).map_err(|e| e.to_string())
}

fn build(tag: &str, n: usize, param: f64, seed: u64) -> Result<GraphFile, String> {
    let fam = family(tag, param)?;
    if fam.vertex_count(n) > MAX_VERTICES {
        return Err(format!("at most {MAX_VERTICES} vertices in the demo"));
    }
    fam.build(n, seed).map_err(|e| e.to_string())
}

fn solve(g: &Graph) -> SearchOutcome<Vec<[usize; 3]>> {
    if !g.n().is_multiple_of(3) {
        return SearchOutcome::Infeasible;
    }
    match find_triangle_factor_with_budget(g, SearchBudget::nodes(NODE_BUDGET)) {
        SearchOutcome::Found(m) => SearchOutcome::Found(m.triangles().iter().map(|t| t.vertices()).collect()),
        SearchOutcome::Infeasible => SearchOutcome::Infeasible,
        SearchOutcome::BudgetExhausted => SearchOutcome::BudgetExhausted,
    }
}

pub fn sample_instance(tag: &str, n: usize, param: f64, p: f64, seed: u64) -> Result<Instance, String> {
    let file = build(tag, n, param, derive(seed, 0))?;
    let parts = match &file {
        GraphFile::Tripartite(t) => Some(t.sizes()),
        GraphFile::General(_) => None,
    };
    let g = file.graph();
    let gp = sparsify(g, p, derive(seed, 1)).map_err(|e| e.to_string())?;
    let (factor, status) = match solve(&gp) {
        SearchOutcome::Found(f) => (Some(f), "factor"),
        SearchOutcome::Infeasible => (None, "none"),
        SearchOutcome::BudgetExhausted => (None, "budget"),
    };
    Ok(Instance {
        vertices: g.n(),
        parts,
        base_edges: g.m(),
        edges: gp.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        factor,
        status,
    })
}

/// Success counts on `steps + 1` evenly spaced values of `p`, reusing the
/// same base graphs and edge uniforms at every `p`.
pub fn success_curve(
    tag: &str,
    n: usize,
    param: f64,
    trials: usize,
    steps: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>, String> {
    if trials == 0 || steps == 0 {
        return Err("trials and steps must be positive".into());
    }
    let fam = family(tag, param)?;
    let bases = (0..trials)
        .map(|i| {
            let s = trial_seed(seed, &fam, n, i);
            build(tag, n, param, derive(s, 0)).map(|f| (f.into_graph(), derive(s, 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    // monotone coupling: a success at p stays a success above p
    let mut succeeds_from = vec![f64::INFINITY; trials];
    let mut points = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let p = j as f64 / steps as f64;
        let (mut successes, mut decided) = (0, 0);
        for (i, (g, s)) in bases.iter().enumerate() {
            if succeeds_from[i] <= p {
                successes += 1;
                decided += 1;
                continue;
            }
            let gp = sparsify(g, p, *s).map_err(|e| e.to_string())?;
            match solve(&gp) {
                SearchOutcome::Found(_) => {
                    succeeds_from[i] = p;
                    successes += 1;
                    decided += 1;
                }
                SearchOutcome::Infeasible => decided += 1,
                SearchOutcome::BudgetExhausted => {}
            }
        }
        points.push(CurvePoint { p, successes, decided });
    }
    Ok(points)
}

pub fn fractional(tag: &str, n: usize, param: f64, k: usize, seed: u64) -> Result<Fractional, String> {
    let g = build(tag, n, param, seed)?.into_graph();
    let lp = solve_packing_lp(&g, k, None).map_err(|e| e.to_string())?;
    let hsz = verify_hsz(&g, k);
    Ok(Fractional {
        vertices: g.n(),
        k,
        objective: lp.objective,
        perfect: g.n() as f64 / k as f64,
        fractional_factor: lp.fractional_factor,
        min_degree: hsz.min_degree,
        integral_matching: hsz.matching_size,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sampleInstance)]
pub fn sample_instance_js(family: &str, n: usize, param: f64, p: f64, seed: u32) -> Result<String, JsError> {
    to_js(sample_instance(family, n, param, p, seed as u64))
}

#[wasm_bindgen(js_name = successCurve)]
pub fn success_curve_js(
    family: &str,
    n: usize,
    param: f64,
    trials: usize,
    steps: usize,
    seed: u32,
) -> Result<String, JsError> {
    to_js(success_curve(family, n, param, trials, steps, seed as u64))
}

#[wasm_bindgen(js_name = fractionalFactor)]
pub fn fractional_js(family: &str, n: usize, param: f64, k: usize, seed: u32) -> Result<String, JsError> {
    to_js(fractional(family, n, param, k, seed as u64))
}
