use std::fs;
use std::path::Path;

use trifactor::experiment::{parse_config, run_config, Experiment};
use trifactor::experiment::{threshold_sweep, TrialOutcome};

const GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");

#[test]
fn sweep_reproduces_checked_in_csv() {
    let text = fs::read_to_string(Path::new(GOLDEN).join("sweep.cfg")).unwrap();
    let config = parse_config(&text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let summary = run_config(&config, dir.path()).unwrap();
    assert_eq!(summary.outputs.len(), 1);
    let fresh = fs::read(&summary.outputs[0]).unwrap();
    let expected = fs::read(Path::new(GOLDEN).join("sweep.csv")).unwrap();
    assert_eq!(String::from_utf8(fresh).unwrap(), String::from_utf8(expected).unwrap());
}

#[test]
fn each_trial_is_monotone_in_p() {
    let text = fs::read_to_string(Path::new(GOLDEN).join("sweep.cfg")).unwrap();
    let Experiment::Sweep { config, .. } = &parse_config(&text).unwrap().experiments[0] else {
        panic!("expected a sweep");
    };
    let result = threshold_sweep(config).unwrap();
    for &n in &config.ns {
        let rows: Vec<_> = result.points.iter().filter(|pt| pt.n == n).collect();
        for pair in rows.windows(2) {
            assert!(pair[0].p < pair[1].p);
            for (lo, hi) in pair[0].records.iter().zip(&pair[1].records) {
                assert_eq!(lo.seed, hi.seed);
                if lo.outcome == TrialOutcome::Success {
                    assert_eq!(hi.outcome, TrialOutcome::Success, "n = {n}, seed {}", lo.seed);
                }
            }
        }
    }
}
