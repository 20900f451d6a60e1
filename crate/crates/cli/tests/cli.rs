use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn cutset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cutset-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

/// Data rows of a CSV report, skipping `#` lines and the header.
fn rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

fn column(text: &str, name: &str) -> Vec<String> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let i = r
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == name)
        .expect("column present");
    rows(text).into_iter().map(|row| row[i].clone()).collect()
}

fn ratio(s: &str) -> (i64, i64) {
    let (a, b) = s.split_once('/').unwrap();
    (a.parse().unwrap(), b.parse().unwrap())
}

#[test]
fn verify_single_suite_passes() {
    let o = cutset(&["verify", "--suite", "rmbalance", "--samples", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("# seed=7"));
    assert_eq!(column(&out, "passed"), vec!["true"]);
}

#[test]
fn input_errors_exit_2() {
    let bad = scratch("bad-density.json", "{\"breakpoints\": [\"0/1\"");
    let o = cutset(&[
        "verify",
        "--suite",
        "level-set",
        "--density",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("density"));
    assert_eq!(
        cutset(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cutset(&["regrade", "--target", "(1,3]"]).status.code(),
        Some(2)
    );
    assert_eq!(cutset(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn regrade_targets() {
    let o = cutset(&[
        "regrade", "--target", "(1,2]", "--target", "(0,1]", "--target", "(1,3/2]",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(column(&out, "sigma"), vec!["1/2", "0/1", "0/1"]);
    assert_eq!(column(&out, "alpha")[0], "(1,3/2]");
    assert_eq!(column(&out, "lambda_star")[0], "3/2");
}

#[test]
fn regrade_sweep_is_strictly_increasing() {
    let o = cutset(&["regrade", "--grid", "1/8"]);
    assert_eq!(o.status.code(), Some(0));
    let sigmas: Vec<(i64, i64)> = column(&stdout(&o), "sigma")
        .iter()
        .map(|s| ratio(s))
        .collect();
    assert_eq!(sigmas.len(), 17);
    assert_eq!(sigmas[0], (-1, 1));
    assert_eq!(*sigmas.last().unwrap(), (1, 1));
    assert!(sigmas.windows(2).all(|w| w[0].0 * w[1].1 < w[1].0 * w[0].1));
}

#[test]
fn regrade_finite_lattices_check_every_chain() {
    for lattice in ["boolean:4", "partition:4", "subspace:2:3"] {
        let o = cutset(&["regrade", "--lattice", lattice]);
        assert_eq!(o.status.code(), Some(0), "{lattice}");
        assert!(stdout(&o).contains("# grading_on_every_chain=true"));
    }
    let not_cutset = scratch(
        "not-cutset.json",
        r#"{"type":"explicit","elements":[[1],[2,3]]}"#,
    );
    let o = cutset(&[
        "regrade",
        "--lattice",
        "boolean:3",
        "--cutset",
        not_cutset.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counterexample_is_deterministic() {
    let a = cutset(&["counterexample"]);
    let b = cutset(&["counterexample"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.contains("-1/2"));
    let u = stdout(&cutset(&[
        "counterexample",
        "--uniform",
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&u).unwrap();
    let defect = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["quantity"].as_str().unwrap().starts_with("defect"));
    assert_eq!(defect.expect("defect row")["value"], "0/1");
}

#[test]
fn limit_tables() {
    let o = cutset(&["limit", "--target", "(0,1/3]"]);
    assert_eq!(o.status.code(), Some(0));
    let d = column(&stdout(&o), "distance_to_target");
    let (a, b) = ratio(d.last().unwrap());
    assert!(100 * a < b);
    let dyadic = stdout(&cutset(&["limit", "--target", "(1/4,3/4]"]));
    assert!(column(&dyadic, "distance_to_target")[1..]
        .iter()
        .all(|x| x == "0/1"));
    assert_eq!(
        cutset(&["limit", "--target", "(0,1/3]", "--levels", "2,3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_output_and_out_file() {
    let path = std::env::temp_dir().join(format!("cutset-cli-{}-verify.json", std::process::id()));
    let o = cutset(&[
        "verify",
        "--suite",
        "counterexample",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["config"]["suite"], "counterexample");
    assert_eq!(v["rows"][0]["passed"], true);
    assert!(v["summary"].is_object());
}
