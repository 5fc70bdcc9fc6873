//! Line-oriented experiment configuration.
//!
//! ```text
//! # comment
//! [sweep]
//! family = superreg_tripartite
//! d = 0.8
//! n = 5, 7
//! p = 0.25, 0.5, 1
//! trials = 20
//! seed = 1
//! output = sweep.csv
//!
//! [threshold]
//! family = complete_tripartite
//! n = 4
//! trials = 50
//!
//! [counts]
//! n = 9
//! q = 0.8
//! trials = 100
//! ```
//!
//! `[sweep]` writes the threshold CSV; `[threshold]` and `[counts]` write
//! JSON reports. Relative output paths resolve against the config file's
//! directory.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;
use serde_json::json;

use super::{
    estimate_threshold, factor_count_experiment, sweep_csv, threshold_sweep, SweepConfig, TrialBudget, SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::generators::{Family, PlantedMode};
use crate::io::{content_lines, write_atomic};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Experiment {
    Sweep {
        config: SweepConfig,
        output: Option<PathBuf>,
    },
    Threshold {
        family: Family,
        ns: Vec<usize>,
        trials: usize,
        target: f64,
        seed: u64,
        budget: TrialBudget,
        output: Option<PathBuf>,
    },
    Counts {
        n: usize,
        q: f64,
        trials: usize,
        seed: u64,
        output: Option<PathBuf>,
    },
}

impl Experiment {
    fn kind(&self) -> &'static str {
        match self {
            Experiment::Sweep { .. } => "sweep",
            Experiment::Threshold { .. } => "threshold",
            Experiment::Counts { .. } => "counts",
        }
    }

    fn output(&self) -> Option<&Path> {
        match self {
            Experiment::Sweep { output, .. }
            | Experiment::Threshold { output, .. }
            | Experiment::Counts { output, .. } => output.as_deref(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiments: Vec<Experiment>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunSummary {
    pub outputs: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

const KEYS: &[(&str, &[&str])] = &[
    (
        "sweep",
        &[
            "family",
            "k",
            "q",
            "d",
            "tau",
            "mode",
            "n",
            "p",
            "trials",
            "seed",
            "max_nodes",
            "timeout_ms",
            "record_runtime",
            "output",
        ],
    ),
    (
        "threshold",
        &[
            "family",
            "k",
            "q",
            "d",
            "tau",
            "mode",
            "n",
            "trials",
            "target",
            "seed",
            "max_nodes",
            "timeout_ms",
            "output",
        ],
    ),
    ("counts", &["n", "q", "trials", "seed", "output"]),
];

struct Section {
    kind: String,
    line: usize,
    values: HashMap<String, (usize, String)>,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl Section {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.values.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| err(line, format!("invalid value `{v}` for `{key}`"))),
        }
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| err(self.line, format!("[{}] needs `{key}`", self.kind)))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let (line, v) = self
            .raw(key)
            .ok_or_else(|| err(self.line, format!("[{}] needs `{key}`", self.kind)))?;
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| err(line, format!("invalid entry `{s}` in `{key}`")))
            })
            .collect()
    }

    fn family(&self) -> Result<Family> {
        let (line, tag) = self
            .raw("family")
            .ok_or_else(|| err(self.line, format!("[{}] needs `family`", self.kind)))?;
        let mode = match self.raw("mode") {
            None => None,
            Some((l, m)) => Some(PlantedMode::from_str(m).map_err(|e| err(l, e.to_string()))?),
        };
        Family::from_tag(
            tag,
            self.get("k")?,
            self.get("q")?,
            self.get("d")?,
            self.get("tau")?,
            mode,
        )
        .map_err(|e| err(line, e.to_string()))
    }

    fn budget(&self) -> Result<TrialBudget> {
        let mut b = TrialBudget {
            max_nodes: self.get("max_nodes")?,
            ..TrialBudget::default()
        };
        if let Some(ms) = self.get::<u64>("timeout_ms")? {
            b.timeout = (ms > 0).then(|| Duration::from_millis(ms));
        }
        Ok(b)
    }

    fn build(&self) -> Result<Experiment> {
        let output = self.get::<String>("output")?.map(PathBuf::from);
        let trials: usize = self.require("trials")?;
        if trials == 0 {
            return Err(err(
                self.raw("trials").map_or(self.line, |r| r.0),
                "trials must be at least 1",
            ));
        }
        let seed = self.get("seed")?.unwrap_or(0);
        Ok(match self.kind.as_str() {
            "sweep" => {
                let ps: Vec<f64> = self.list("p")?;
                if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                    return Err(err(self.raw("p").unwrap().0, format!("p = {p} outside [0, 1]")));
                }
                Experiment::Sweep {
                    config: SweepConfig {
                        family: self.family()?,
                        ns: self.list("n")?,
                        ps,
                        trials,
                        seed,
                        budget: self.budget()?,
                        record_runtime: self.get("record_runtime")?.unwrap_or(false),
                    },
                    output,
                }
            }
            "threshold" => Experiment::Threshold {
                family: self.family()?,
                ns: self.list("n")?,
                trials,
                target: self.get("target")?.unwrap_or(0.5),
                seed,
                budget: self.budget()?,
                output,
            },
            _ => Experiment::Counts {
                n: self.require("n")?,
                q: self.require("q")?,
                trials,
                seed,
                output,
            },
        })
    }
}

/// Parses a config; errors carry 1-based line numbers.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut sections: Vec<Section> = Vec::new();
    for (line, content) in content_lines(text) {
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, "unterminated section header"))?
                .trim();
            if !KEYS.iter().any(|(k, _)| *k == name) {
                return Err(err(line, format!("unknown experiment kind `{name}`")));
            }
            sections.push(Section {
                kind: name.to_string(),
                line,
                values: HashMap::new(),
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let section = sections
            .last_mut()
            .ok_or_else(|| err(line, "key outside of any section"))?;
        let allowed = KEYS.iter().find(|(k, _)| *k == section.kind).unwrap().1;
        if !allowed.contains(&key) {
            return Err(err(line, format!("unknown key `{key}` in [{}]", section.kind)));
        }
        if section
            .values
            .insert(key.to_string(), (line, value.to_string()))
            .is_some()
        {
            return Err(err(line, format!("duplicate key `{key}`")));
        }
    }
    Ok(ExperimentConfig {
        experiments: sections.iter().map(Section::build).collect::<Result<_>>()?,
    })
}

fn json_bytes(value: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s.into_bytes()
}

/// Runs every experiment and writes its output atomically under `base_dir`.
pub fn run_config(config: &ExperimentConfig, base_dir: &Path) -> Result<RunSummary> {
    let mut summary = RunSummary::default();
    for (i, exp) in config.experiments.iter().enumerate() {
        let ext = if matches!(exp, Experiment::Sweep { .. }) {
            "csv"
        } else {
            "json"
        };
        let path = base_dir.join(
            exp.output()
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from(format!("{}-{i}.{ext}", exp.kind()))),
        );
        let bytes = match exp {
            Experiment::Sweep { config, .. } => {
                let result = threshold_sweep(config)?;
                summary.warnings.extend(result.warnings.iter().cloned());
                sweep_csv(&result).into_bytes()
            }
            Experiment::Threshold {
                family,
                ns,
                trials,
                target,
                seed,
                budget,
                ..
            } => {
                let estimates = ns
                    .iter()
                    .map(|&n| estimate_threshold(family, n, *trials, *target, *seed, *budget))
                    .collect::<Result<Vec<_>>>()?;
                for e in estimates.iter().filter(|e| !e.reported) {
                    summary
                        .warnings
                        .push(format!("n = {}: too many timeouts, estimate withheld", e.n));
                }
                json_bytes(&json!({
                    "schema": SCHEMA_VERSION,
                    "kind": "threshold",
                    "estimates": estimates,
                }))
            }
            Experiment::Counts { n, q, trials, seed, .. } => {
                let report = factor_count_experiment(*n, *q, *trials, *seed)?;
                json_bytes(&json!({
                    "schema": SCHEMA_VERSION,
                    "kind": "counts",
                    "report": report,
                }))
            }
        };
        write_atomic(&path, &bytes)?;
        summary.outputs.push(path);
    }
    Ok(summary)
}

/// Reads, parses and runs a config file.
pub fn run(path: &Path) -> Result<RunSummary> {
    let text = fs::read_to_string(path)?;
    let config = parse_config(&text)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    run_config(&config, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_kinds() {
        let c = parse_config(
            "# demo\n[sweep]\nfamily = superreg_tripartite\nd = 0.7\nn = 5, 7\np = 0.5,1\ntrials = 3\n\
             [threshold]\nfamily = gnq\nq = 0.9\nn = 6\ntrials = 4\ntimeout_ms = 0\n[counts]\nn = 9\nq = 0.5\ntrials = 2\n",
        )
        .unwrap();
        assert_eq!(c.experiments.len(), 3);
        match &c.experiments[0] {
            Experiment::Sweep { config, .. } => {
                assert_eq!(config.family, Family::SuperregTripartite { d: 0.7 });
                assert_eq!(config.ns, vec![5, 7]);
                assert_eq!(config.budget, TrialBudget::default());
            }
            e => panic!("{e:?}"),
        }
        match &c.experiments[1] {
            Experiment::Threshold { budget, target, .. } => {
                assert_eq!(budget.timeout, None);
                assert_eq!(*target, 0.5);
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_config("[sweep]\nfamily = petersen\nn = 3\np = 1\ntrials = 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse_config("\n[sweep]\nn = 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse_config("n = 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_config("[counts]\nn = 9\nbogus = 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_config("[plot]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_config_runs_to_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let c = parse_config("# nothing\n").unwrap();
        let s = run_config(&c, dir.path()).unwrap();
        assert!(s.outputs.is_empty());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }
}
