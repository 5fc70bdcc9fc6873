use std::fmt::Write as _;
use std::time::Instant;

use log::warn;
use serde::{Deserialize, Serialize};

use super::{trial_seed, TrialBudget};
use crate::error::{Error, Result};
use crate::exact::{find_triangle_factor_with_budget, SearchBudget, SearchOutcome};
use crate::generators::Family;
use crate::graph::Graph;
use crate::sparsify::{check_probability, sparsify};
use crate::{par, seed};

/// Bisection stops once the bracket is this narrow.
pub const RESOLUTION: f64 = 1.0 / 1024.0;

pub const CSV_HEADER: &str = "family,n,p,trials,successes,mean_runtime_ms";

/// Threshold estimates are withheld above this timeout fraction.
const MAX_TIMEOUT_FRACTION: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialOutcome {
    Success,
    Failure,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub outcome: TrialOutcome,
    pub runtime_ms: f64,
}

/// Aggregate over the trials at one `(n, p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub n: usize,
    pub p: f64,
    /// Trials that finished; timeouts are excluded.
    pub trials: usize,
    pub successes: usize,
    pub timeouts: usize,
    pub mean_runtime_ms: f64,
    pub records: Vec<TrialRecord>,
}

impl ThresholdPoint {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            f64::NAN
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: Family,
    pub ns: Vec<usize>,
    pub ps: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub budget: TrialBudget,
    /// Whether the CSV carries wall-clock means; off for reproducible output.
    pub record_runtime: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub family: String,
    /// Sorted by `(n, p)`.
    pub points: Vec<ThresholdPoint>,
    pub record_runtime: bool,
    pub warnings: Vec<String>,
}

/// `C* = p*·m^{2/3}(log m)^{−1/3}` for `m` vertices.
pub fn normalized_constant(p: f64, m: usize) -> f64 {
    let m = m as f64;
    p * m.powf(2.0 / 3.0) * m.ln().powf(-1.0 / 3.0)
}

/// Base graphs and sparsification seeds of a trial batch, with the outcomes
/// implied so far by monotonicity in `p`.
struct TrialBatch {
    graphs: Vec<Graph>,
    seeds: Vec<u64>,
    /// Smallest `p` known to succeed.
    succeeds_from: Vec<f64>,
    /// Largest `p` known to fail.
    fails_up_to: Vec<f64>,
}

impl TrialBatch {
    fn new(family: &Family, n: usize, trials: usize, base: u64) -> Result<Self> {
        let built = par::map_range(trials, |i| {
            let s = trial_seed(base, family, n, i);
            family
                .build(n, seed::derive(s, 0))
                .map(|f| (f.into_graph(), seed::derive(s, 1)))
        });
        let mut graphs = Vec::with_capacity(trials);
        let mut seeds = Vec::with_capacity(trials);
        for b in built {
            let (g, s) = b?;
            graphs.push(g);
            seeds.push(s);
        }
        Ok(TrialBatch {
            graphs,
            seeds,
            succeeds_from: vec![f64::INFINITY; trials],
            fails_up_to: vec![f64::NEG_INFINITY; trials],
        })
    }

    fn run_one(&self, i: usize, p: f64, budget: TrialBudget) -> TrialRecord {
        let start = Instant::now();
        let outcome = if self.succeeds_from[i] <= p {
            TrialOutcome::Success
        } else if self.fails_up_to[i] >= p {
            TrialOutcome::Failure
        } else {
            solve_trial(&self.graphs[i], p, self.seeds[i], budget)
        };
        TrialRecord {
            seed: self.seeds[i],
            outcome,
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }

    fn evaluate(&mut self, n: usize, p: f64, budget: TrialBudget) -> ThresholdPoint {
        let records = par::map_range(self.graphs.len(), |i| self.run_one(i, p, budget));
        for (i, r) in records.iter().enumerate() {
            match r.outcome {
                TrialOutcome::Success => self.succeeds_from[i] = self.succeeds_from[i].min(p),
                TrialOutcome::Failure => self.fails_up_to[i] = self.fails_up_to[i].max(p),
                TrialOutcome::Timeout => {}
            }
        }
        aggregate(n, p, records)
    }
}

fn solve_trial(g: &Graph, p: f64, sparsify_seed: u64, budget: TrialBudget) -> TrialOutcome {
    if !g.n().is_multiple_of(3) {
        return TrialOutcome::Failure;
    }
    let gp = sparsify(g, p, sparsify_seed).expect("p validated by caller");
    let search = SearchBudget {
        max_nodes: budget.max_nodes,
        deadline: budget.timeout.map(|t| Instant::now() + t),
    };
    match find_triangle_factor_with_budget(&gp, search) {
        SearchOutcome::Found(_) => TrialOutcome::Success,
        SearchOutcome::Infeasible => TrialOutcome::Failure,
        SearchOutcome::BudgetExhausted => TrialOutcome::Timeout,
    }
}

fn aggregate(n: usize, p: f64, records: Vec<TrialRecord>) -> ThresholdPoint {
    let timeouts = records.iter().filter(|r| r.outcome == TrialOutcome::Timeout).count();
    let successes = records.iter().filter(|r| r.outcome == TrialOutcome::Success).count();
    let finished: Vec<&TrialRecord> = records.iter().filter(|r| r.outcome != TrialOutcome::Timeout).collect();
    let mean_runtime_ms = if finished.is_empty() {
        0.0
    } else {
        finished.iter().map(|r| r.runtime_ms).sum::<f64>() / finished.len() as f64
    };
    ThresholdPoint {
        n,
        p,
        trials: finished.len(),
        successes,
        timeouts,
        mean_runtime_ms,
        records,
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    Ok(())
}

/// Success rates of the exact triangle-factor solver on sparsified family
/// members over the grid `ns × ps`.
pub fn threshold_sweep(config: &SweepConfig) -> Result<ThresholdResult> {
    check_trials(config.trials)?;
    for &p in &config.ps {
        check_probability(p)?;
    }
    let mut ns = config.ns.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut ps = config.ps.clone();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    let mut points = Vec::with_capacity(ns.len() * ps.len());
    let mut warnings = Vec::new();
    for &n in &ns {
        let mut batch = TrialBatch::new(&config.family, n, config.trials, config.seed)?;
        for &p in &ps {
            // fresh solves so that runtimes are real
            batch.succeeds_from.fill(f64::INFINITY);
            batch.fails_up_to.fill(f64::NEG_INFINITY);
            let point = batch.evaluate(n, p, config.budget);
            if point.timeouts > 0 {
                let w = format!(
                    "n = {n}, p = {p}: {} of {} trials timed out and are excluded",
                    point.timeouts, config.trials
                );
                warn!("{w}");
                warnings.push(w);
            }
            points.push(point);
        }
    }
    Ok(ThresholdResult {
        family: config.family.tag().to_string(),
        points,
        record_runtime: config.record_runtime,
        warnings,
    })
}

/// CSV rows `family,n,p,trials,successes,mean_runtime_ms`; the runtime
/// column is left empty unless runtimes are recorded.
pub fn sweep_csv(result: &ThresholdResult) -> String {
    let mut out = String::with_capacity(64 * (result.points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for pt in &result.points {
        let runtime = if result.record_runtime {
            format!("{:.3}", pt.mean_runtime_ms)
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            result.family, pt.n, pt.p, pt.trials, pt.successes, runtime
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub family: String,
    pub n: usize,
    /// Total vertex count `m`.
    pub vertices: usize,
    pub trials: usize,
    pub target: f64,
    /// Midpoint of the final bracket.
    pub p_star: f64,
    pub bracket: (f64, f64),
    pub c_star: f64,
    /// `(p, successes, finished trials)` in evaluation order.
    pub evaluations: Vec<(f64, usize, usize)>,
    pub timeouts: usize,
    /// False when too many trials timed out for the estimate to be trusted.
    pub reported: bool,
}

/// Bisection for the retention probability at which the success rate
/// crosses `target`, down to a bracket of width [`RESOLUTION`].
pub fn estimate_threshold(
    family: &Family,
    n: usize,
    trials: usize,
    target: f64,
    seed: u64,
    budget: TrialBudget,
) -> Result<ThresholdEstimate> {
    check_trials(trials)?;
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::InvalidArgument(format!("target {target} outside (0, 1]")));
    }
    let mut batch = TrialBatch::new(family, n, trials, seed)?;
    let mut evaluations = Vec::new();
    let mut timeouts = 0;
    let mut eval = |batch: &mut TrialBatch, p: f64| -> f64 {
        let pt = batch.evaluate(n, p, budget);
        evaluations.push((p, pt.successes, pt.trials));
        timeouts += pt.timeouts;
        if pt.trials == 0 {
            0.0
        } else {
            pt.rate()
        }
    };
    let top = eval(&mut batch, 1.0);
    if top < target {
        return Err(Error::NotBracketable { rate: top, target });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if eval(&mut batch, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let total_runs = evaluations.len() * trials;
    let fraction = timeouts as f64 / total_runs as f64;
    if fraction >= MAX_TIMEOUT_FRACTION {
        warn!("estimate_threshold: {:.1}% of trial runs timed out", 100.0 * fraction);
    }
    let p_star = 0.5 * (lo + hi);
    let vertices = family.vertex_count(n);
    Ok(ThresholdEstimate {
        family: family.tag().to_string(),
        n,
        vertices,
        trials,
        target,
        p_star,
        bracket: (lo, hi),
        c_star: normalized_constant(p_star, vertices),
        evaluations,
        timeouts,
        reported: fraction < MAX_TIMEOUT_FRACTION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(family: Family, ps: Vec<f64>) -> ThresholdResult {
        threshold_sweep(&SweepConfig {
            family,
            ns: vec![3],
            ps,
            trials: 5,
            seed: 9,
            budget: TrialBudget::unlimited(),
            record_runtime: false,
        })
        .unwrap()
    }

    #[test]
    fn extremes_of_p() {
        let r = sweep(Family::CompleteTripartite, vec![1.0, 0.0]);
        assert_eq!(r.points[0].p, 0.0);
        assert_eq!(r.points[0].successes, 0);
        assert_eq!(r.points[1].successes, 5);
        assert_eq!(
            sweep_csv(&r),
            "family,n,p,trials,successes,mean_runtime_ms\n\
             complete_tripartite,3,0,5,0,\n\
             complete_tripartite,3,1,5,5,\n"
        );
    }

    #[test]
    fn edgeless_is_not_bracketable() {
        let e = estimate_threshold(&Family::Edgeless, 9, 3, 0.5, 1, TrialBudget::unlimited());
        assert!(matches!(e, Err(Error::NotBracketable { .. })));
    }

    #[test]
    fn complete_tripartite_threshold_below_one() {
        let e = estimate_threshold(&Family::CompleteTripartite, 4, 20, 0.5, 1, TrialBudget::unlimited()).unwrap();
        assert!(e.p_star < 1.0);
        assert!(e.bracket.1 - e.bracket.0 <= RESOLUTION);
        assert!(e.reported);
    }

    #[test]
    fn normalized_constant_value() {
        let c = normalized_constant(0.5, 20);
        assert!((c - 0.5 * (20f64).powf(2.0 / 3.0) / (20f64).ln().cbrt()).abs() < 1e-12);
    }
}
