mod scenario;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;
use trifactor::diagnostics::{concentration_check, entropy_profile, ldl_profile};
use trifactor::exact::{
    count_clique_factors, count_embeddings, find_clique_factor_with_budget, SearchBudget, SearchOutcome,
};
use trifactor::experiment::{
    estimate_threshold, run, sweep_csv, threshold_sweep, SweepConfig, TrialBudget, SCHEMA_VERSION,
};
use trifactor::generators::{Family, PlantedMode};
use trifactor::io::{format_graph_file, read_graph, write_atomic, GraphFile};
use trifactor::lp::{integer_clique_weights, solve_packing_lp};
use trifactor::matching::{
    cover_special_vertices, greedy_triangle_matching, match_cover, match_cover_help, MatchCoverInput,
};
use trifactor::regularity::{
    check_regular_pair, check_super_regular, density, exact_density_subgraph, triangle_estimate, RegularityMode,
    DEFAULT_SAMPLES,
};
use trifactor::sparsify::{sparsify, sparsify_tripartite};
use trifactor::{TripartiteGraph, VertexTuple};

use scenario::{parse_demand, parse_integer_demand, parse_parts, parse_scenario};

#[derive(Parser)]
#[command(
    name = "trifactor",
    version,
    about = "Triangle factors in dense graphs and their random subgraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct FamilyArgs {
    /// complete_tripartite, hsz_extremal, nash_williams, gnq,
    /// superreg_tripartite, planted_sparse or edgeless.
    #[arg(long)]
    family: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Planted mode: one or two.
    #[arg(long)]
    mode: Option<String>,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family> {
        let mode = self.mode.as_deref().map(str::parse::<PlantedMode>).transpose()?;
        Ok(Family::from_tag(&self.family, self.k, self.q, self.d, self.tau, mode)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from a generator family.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Keep each edge independently with probability p.
    Sparsify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether a K_k-factor exists, or count them.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        count: bool,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Count partial triangle-factor embeddings of a tripartite graph.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: usize,
        /// Comma-separated vertices to avoid, one per part in order.
        #[arg(long, value_delimiter = ',')]
        avoid: Vec<usize>,
        /// Count embeddings whose first triangle uses this vertex.
        #[arg(long)]
        root: Option<usize>,
    },
    /// Fractional K_k packing and its dual cover.
    Lp {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// `vertex value` per line; missing vertices default to 1.
        #[arg(long)]
        demand: Option<PathBuf>,
        /// Integer weights with exact vertex sums instead of the LP.
        #[arg(long)]
        integer: bool,
    },
    /// Compare the largest K_k-matching with the minimum-degree bound.
    Hsz {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Run a randomized triangle-matching procedure on G_p.
    Match {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        mu: Option<f64>,
        scenario: Option<PathBuf>,
    },
    /// Regularity checks on parts listed one per line.
    Reg {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        parts: PathBuf,
        #[arg(long, value_enum)]
        check: RegCheck,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long)]
        d: Option<f64>,
        /// Enumerate every subset pair (sides of at most 16 vertices).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graph output for `exactdensity`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy and concentration diagnostics on a tripartite graph.
    Diag {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        check: DiagCheck,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, value_delimiter = ',')]
        avoid: Vec<usize>,
        #[arg(long)]
        root: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        d: f64,
        #[arg(long, default_value_t = 0.1)]
        beta: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Threshold sweep over a p grid (CSV) or bisection for p* (JSON).
    Threshold {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Sweep these p values instead of bisecting.
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0.5)]
        target: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Per-trial timeout; 0 disables it.
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
        #[arg(long)]
        record_runtime: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every experiment in a config file.
    Run { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Greedy,
    Vtxcover,
    Matchcover,
    Help,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegCheck {
    Regular,
    Super,
    Triangles,
    Exactdensity,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagCheck {
    Entropy,
    Ldl,
    Concentration,
}

fn print_json<T: Serialize>(buf: &mut String, kind: &str, value: &T) -> Result<()> {
    let doc = json!({ "schema": SCHEMA_VERSION, "kind": kind, "report": value });
    writeln!(buf, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

fn tripartite(path: &Path) -> Result<TripartiteGraph> {
    match load(path)? {
        GraphFile::Tripartite(t) => Ok(t),
        GraphFile::General(_) => bail!("{} is not a tripartite graph file", path.display()),
    }
}

fn load(path: &Path) -> Result<GraphFile> {
    read_graph(path).with_context(|| format!("reading {}", path.display()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn budget(max_nodes: Option<u64>, timeout_ms: u64) -> TrialBudget {
    TrialBudget {
        max_nodes,
        timeout: (timeout_ms > 0).then(|| Duration::from_millis(timeout_ms)),
    }
}

fn execute(command: Command, buf: &mut String) -> Result<()> {
    match command {
        Command::Generate { family, n, seed, out } => {
            let file = family.family()?.build(n, seed)?;
            write_atomic(&out, format_graph_file(&file).as_bytes())?;
        }
        Command::Sparsify { input, p, seed, out } => {
            let file = match load(&input)? {
                GraphFile::General(g) => GraphFile::General(sparsify(&g, p, seed)?),
                GraphFile::Tripartite(t) => GraphFile::Tripartite(sparsify_tripartite(&t, p, seed)?),
            };
            write_atomic(&out, format_graph_file(&file).as_bytes())?;
        }
        Command::Solve {
            input,
            count,
            k,
            max_nodes,
        } => {
            let g = load(&input)?.into_graph();
            if count {
                writeln!(buf, "{}", count_clique_factors(&g, k))?;
            } else {
                let budget = max_nodes.map_or(SearchBudget::unlimited(), SearchBudget::nodes);
                let verdict = match find_clique_factor_with_budget(&g, k, budget) {
                    SearchOutcome::Found(_) => "FACTOR",
                    SearchOutcome::Infeasible => "NONE",
                    SearchOutcome::BudgetExhausted => bail!("node budget exhausted"),
                };
                writeln!(buf, "{verdict}")?;
            }
        }
        Command::Count { input, t, avoid, root } => {
            let g = tripartite(&input)?;
            let avoid = VertexTuple::new(&g, avoid)?;
            writeln!(buf, "{}", count_embeddings(&g, t, &avoid, root)?.value)?;
        }
        Command::Lp {
            input,
            k,
            demand,
            integer,
        } => {
            let g = load(&input)?.into_graph();
            let text = demand.as_deref().map(read_text).transpose()?;
            if integer {
                let default = BigUint::from(g.n()).pow(2 * k as u32) * k;
                let lambda = parse_integer_demand(text.as_deref().unwrap_or(""), g.n(), &default)?;
                let w = integer_clique_weights(&g, k, &lambda, None)?;
                let total: BigUint = w.weights.iter().sum();
                writeln!(buf, "total {total}")?;
                for (c, x) in w.cliques.iter().zip(&w.weights).filter(|(_, x)| **x != BigUint::ZERO) {
                    writeln!(buf, "{} {x}", join(c))?;
                }
            } else {
                let demand = text.as_deref().map(|t| parse_demand(t, g.n(), 1.0)).transpose()?;
                let r = solve_packing_lp(&g, k, demand.as_deref())?;
                writeln!(buf, "objective {}", r.objective)?;
                writeln!(buf, "fractional_factor {}", r.fractional_factor)?;
                for (c, x) in r
                    .weighting
                    .cliques
                    .iter()
                    .zip(&r.weighting.weights)
                    .filter(|(_, x)| **x > 0.0)
                {
                    writeln!(buf, "{} {x}", join(c))?;
                }
            }
        }
        Command::Hsz { input, k } => {
            let g = load(&input)?.into_graph();
            print_json(buf, "hsz", &trifactor::hsz::verify_hsz(&g, k))?;
        }
        Command::Match {
            algo,
            input,
            p,
            seed,
            mu,
            scenario,
        } => {
            let g = load(&input)?.into_graph();
            let sc = scenario.as_deref().map(read_text).transpose()?;
            let sc = parse_scenario(sc.as_deref().unwrap_or(""))?;
            let mu = mu.or(sc.mu).unwrap_or(0.05);
            match algo {
                Algo::Greedy => {
                    let gp = sparsify(&g, p, seed)?;
                    let m = greedy_triangle_matching(&gp, None);
                    print_json(buf, "greedy", &m)?;
                }
                Algo::Vtxcover => {
                    let r = cover_special_vertices(&g, p, &sc.specials, &sc.quotas, mu, seed)?;
                    print_json(buf, "vtxcover", &r)?;
                }
                Algo::Matchcover => {
                    let counts = sc.counts.unwrap_or([0, 0]);
                    let input = match (&sc.sets[..], &sc.edge_sets[..]) {
                        ([x1, x2, x3], [e]) => MatchCoverInput::One {
                            sets: [x1.clone(), x2.clone(), x3.clone()],
                            edges: e.clone(),
                            counts,
                        },
                        ([s1, s2], [e1, e2]) => MatchCoverInput::Two {
                            sets: [s1.clone(), s2.clone()],
                            edges: [e1.clone(), e2.clone()],
                            counts,
                        },
                        _ => bail!("matchcover needs 3 sets and 1 edge set, or 2 sets and 2 edge sets"),
                    };
                    print_json(buf, "matchcover", &match_cover(&g, p, &input, mu, seed)?)?;
                }
                Algo::Help => {
                    print_json(buf, "help", &match_cover_help(&g, p, &sc.targets, mu, seed)?)?;
                }
            }
        }
        Command::Reg {
            input,
            parts,
            check,
            eps,
            delta,
            d,
            exact,
            samples,
            seed,
            out,
        } => {
            let g = load(&input)?.into_graph();
            let parts = parse_parts(&read_text(&parts)?)?;
            let mode = if exact {
                RegularityMode::Exact
            } else {
                RegularityMode::sampled(samples, seed)
            };
            let need = |k: usize| -> Result<()> {
                if parts.len() != k {
                    bail!("this check needs {k} parts, the parts file has {}", parts.len());
                }
                Ok(())
            };
            match check {
                RegCheck::Regular => {
                    need(2)?;
                    print_json(
                        buf,
                        "regular",
                        &check_regular_pair(&g, &parts[0], &parts[1], eps, mode)?,
                    )?;
                }
                RegCheck::Super => {
                    need(2)?;
                    let v = check_super_regular(&g, &parts[0], &parts[1], eps, delta, mode)?;
                    print_json(buf, "super", &v)?;
                }
                RegCheck::Triangles => {
                    need(3)?;
                    let mut dens = [0.0; 3];
                    for (slot, (i, j)) in dens.iter_mut().zip([(0, 1), (0, 2), (1, 2)]) {
                        let r = density(&g, &parts[i], &parts[j])?;
                        *slot = *r.numer() as f64 / *r.denom() as f64;
                    }
                    let size = parts.iter().map(Vec::len).max().unwrap_or(0);
                    let x = [&parts[0][..], &parts[1][..], &parts[2][..]];
                    print_json(buf, "triangles", &triangle_estimate(&g, x, dens, eps, size)?)?;
                }
                RegCheck::Exactdensity => {
                    need(2)?;
                    let d = d.context("exactdensity needs --d")?;
                    let r = exact_density_subgraph(&g, &parts[0], &parts[1], d, eps, seed)?;
                    if let Some(out) = out {
                        write_atomic(&out, format_graph_file(&GraphFile::General(r.graph.clone())).as_bytes())?;
                    }
                    let summary = json!({
                        "edge_count": r.edge_count,
                        "protected": r.protected,
                        "low_degree": r.low_degree,
                        "min_cross_degree": r.min_cross_degree,
                    });
                    print_json(buf, "exactdensity", &summary)?;
                }
            }
        }
        Command::Diag {
            input,
            check,
            t,
            avoid,
            root,
            p,
            d,
            beta,
            eps,
            samples,
            seed,
        } => {
            let g = tripartite(&input)?;
            let avoid = VertexTuple::new(&g, avoid)?;
            match check {
                DiagCheck::Entropy => {
                    let r = entropy_profile(&g, t, &avoid, root, p, d, beta, eps)?;
                    print_json(buf, "entropy", &r)?;
                }
                DiagCheck::Ldl => print_json(buf, "ldl", &ldl_profile(&g, t, &avoid, d)?)?,
                DiagCheck::Concentration => {
                    let gp = sparsify_tripartite(&g, p, seed)?;
                    print_json(
                        buf,
                        "concentration",
                        &concentration_check(&gp, d, p, eps, samples, seed)?,
                    )?;
                }
            }
        }
        Command::Threshold {
            family,
            n,
            p,
            trials,
            target,
            seed,
            max_nodes,
            timeout_ms,
            record_runtime,
            out,
        } => {
            let family = family.family()?;
            let budget = budget(max_nodes, timeout_ms);
            let text = if p.is_empty() {
                let estimates = n
                    .iter()
                    .map(|&n| estimate_threshold(&family, n, trials, target, seed, budget))
                    .collect::<trifactor::Result<Vec<_>>>()?;
                let doc = json!({ "schema": SCHEMA_VERSION, "kind": "threshold", "estimates": estimates });
                serde_json::to_string_pretty(&doc)? + "\n"
            } else {
                let result = threshold_sweep(&SweepConfig {
                    family,
                    ns: n,
                    ps: p,
                    trials,
                    seed,
                    budget,
                    record_runtime,
                })?;
                for w in &result.warnings {
                    log::warn!("{w}");
                }
                sweep_csv(&result)
            };
            match out {
                Some(path) => write_atomic(&path, text.as_bytes())?,
                None => buf.push_str(&text),
            }
        }
        Command::Run { config } => {
            let summary = run(&config)?;
            for w in &summary.warnings {
                log::warn!("{w}");
            }
            for path in &summary.outputs {
                writeln!(buf, "{}", path.display())?;
            }
        }
    }
    Ok(())
}

fn join(c: &[usize]) -> String {
    c.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let mut out = String::new();
    let result = execute(Cli::parse().command, &mut out);
    // A closed pipe downstream is not an error.
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
