use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn trifactor(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trifactor"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(dir: &Path, args: &[&str]) -> String {
    let out = trifactor(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn generate_then_solve_and_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    stdout_ok(
        d,
        &[
            "generate",
            "--family",
            "complete_tripartite",
            "--n",
            "3",
            "--out",
            "k.txt",
        ],
    );
    assert!(fs::read_to_string(d.join("k.txt"))
        .unwrap()
        .starts_with("tripartite 3 3 3 27\n"));
    assert_eq!(stdout_ok(d, &["solve", "--in", "k.txt"]), "FACTOR\n");
    // 3!·3! ways to pair the parts
    assert_eq!(stdout_ok(d, &["solve", "--in", "k.txt", "--count"]), "36\n");
    assert_eq!(stdout_ok(d, &["count", "--in", "k.txt", "--t", "3"]), "216\n");

    stdout_ok(d, &["generate", "--family", "edgeless", "--n", "6", "--out", "e.txt"]);
    assert_eq!(stdout_ok(d, &["solve", "--in", "e.txt"]), "NONE\n");
}

#[test]
fn sparsify_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    stdout_ok(
        d,
        &["generate", "--family", "gnq", "--q", "1", "--n", "12", "--out", "g.txt"],
    );
    for out in ["a.txt", "b.txt"] {
        stdout_ok(
            d,
            &["sparsify", "--in", "g.txt", "--p", "0.4", "--seed", "9", "--out", out],
        );
    }
    assert_eq!(fs::read(d.join("a.txt")).unwrap(), fs::read(d.join("b.txt")).unwrap());
}

#[test]
fn lp_and_hsz_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    stdout_ok(
        d,
        &[
            "generate",
            "--family",
            "complete_tripartite",
            "--n",
            "2",
            "--out",
            "k.txt",
        ],
    );
    let lp = stdout_ok(d, &["lp", "--in", "k.txt"]);
    let objective: f64 = lp
        .lines()
        .next()
        .unwrap()
        .strip_prefix("objective ")
        .unwrap()
        .parse()
        .unwrap();
    assert!((objective - 2.0).abs() < 1e-9, "{lp}");
    assert!(lp.contains("fractional_factor true"));

    let hsz: serde_json::Value = serde_json::from_str(&stdout_ok(d, &["hsz", "--in", "k.txt"])).unwrap();
    assert_eq!(hsz["schema"], 1);
    assert_eq!(hsz["report"]["pass"], true);
}

#[test]
fn threshold_sweep_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "threshold",
        "--family",
        "complete_tripartite",
        "--n",
        "3",
        "--p",
        "0,1",
        "--trials",
        "4",
    ];
    let a = stdout_ok(d, &args);
    assert_eq!(
        a,
        "family,n,p,trials,successes,mean_runtime_ms\n\
         complete_tripartite,3,0,4,0,\n\
         complete_tripartite,3,1,4,4,\n"
    );
    assert_eq!(a, stdout_ok(d, &args));
}

#[test]
fn run_reports_parse_errors_with_lines() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("empty.cfg"), "# nothing to do\n").unwrap();
    assert_eq!(stdout_ok(d, &["run", "empty.cfg"]), "");

    fs::write(
        d.join("bad.cfg"),
        "[sweep]\nfamily = petersen\nn = 3\np = 1\ntrials = 2\n",
    )
    .unwrap();
    let out = trifactor(d, &["run", "bad.cfg"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn match_with_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    stdout_ok(
        d,
        &["generate", "--family", "gnq", "--q", "1", "--n", "30", "--out", "k.txt"],
    );
    fs::write(
        d.join("sc.txt"),
        "special 0 : 1 2, 3 4\nspecial 5 : 6 7\nquota 10 11 12\n",
    )
    .unwrap();
    let r: serde_json::Value = serde_json::from_str(&stdout_ok(
        d,
        &["match", "--algo", "vtxcover", "--in", "k.txt", "--p", "1", "sc.txt"],
    ))
    .unwrap();
    assert_eq!(r["kind"], "vtxcover");
    assert_eq!(r["report"]["repeat_reveals"], 0);
    assert_eq!(r["report"]["matching"]["triangles"].as_array().unwrap().len(), 2);
}

#[test]
fn missing_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = trifactor(dir.path(), &["solve", "--in", "nope.txt"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.txt"));
}
