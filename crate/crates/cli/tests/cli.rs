use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hexfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexfold"))
        .args(args)
        .output()
        .expect("failed to spawn binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against the golden file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn construct(dir: &tempfile::TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = hexfold(&all);
    assert!(o.status.success(), "construct {args:?} failed: {}", stderr(&o));
    path
}

#[test]
fn tables_match_golden() {
    let o = hexfold(&["tables"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_golden("tables.txt", &text);
    assert!(text.contains("    12     63     5.25     63  nm n=3 m=4"));
    assert!(text.contains("     4     24     6.00     24  2nm n=1 m=2"));
    assert!(text.contains("    84    930    11.07    930  nm n=3 m=28"));
}

#[test]
fn tables_are_deterministic() {
    assert_eq!(hexfold(&["tables"]).stdout, hexfold(&["tables"]).stdout);
}

#[test]
fn bound_command() {
    let o = hexfold(&["bound", "--b", "1"]);
    assert!(o.status.success());
    let line = stdout(&o).lines().find(|l| l.starts_with("bound")).unwrap().to_string();
    let v: f64 = line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!((v - 4.36).abs() <= 0.005);
    assert_eq!(hexfold(&["bound", "--b", "0.5"]).status.code(), Some(2));
    assert_eq!(hexfold(&["bound", "--b", "abc"]).status.code(), Some(2));
}

#[test]
fn construct_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(&dir, "nm.json", &["--method", "nm", "--b", "1", "--n", "2", "--m", "3"]);
    let spec: serde_json::Value = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!((spec["j"].as_u64(), spec["k"].as_u64()), (Some(6), Some(35)));
    let p = construct(&dir, "f7.json", &["--method", "fold7"]);
    let spec: serde_json::Value = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!((spec["j"].as_u64(), spec["k"].as_u64()), (Some(7), Some(37)));
}

#[test]
fn construct_usage_errors() {
    for args in [
        vec!["construct", "--method", "density", "--b", "1", "--n", "3"],
        vec!["construct", "--method", "nm", "--b", "1", "--n", "2"],
        vec!["construct", "--method", "2nm", "--n", "2", "--m", "2"],
        vec!["construct", "--method", "fold2", "--b", "2"],
        vec!["construct", "--method", "hexagons"],
    ] {
        assert_eq!(hexfold(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn construct_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("f2.svg");
    let o = hexfold(&["construct", "--method", "fold2", "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(svg).unwrap();
    assert!(text.contains(r#"version="1.1""#) && text.contains("clipPath") && text.contains("#d62728"));
    // stdout carries the spec when --out is absent
    assert!(json(&o)["layers"].is_array());
}

#[test]
fn verify_builtins_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 7] = [
        ("c7", &["--method", "classic7"]),
        ("f2", &["--method", "fold2"]),
        ("f3", &["--method", "fold3"]),
        ("f7", &["--method", "fold7"]),
        ("nm", &["--method", "nm", "--b", "1", "--n", "2", "--m", "2"]),
        ("2nm", &["--method", "2nm", "--b", "1", "--n", "1", "--m", "2"]),
        ("g12", &["--method", "nm", "--b", "2", "--n", "3", "--m", "3"]),
    ];
    for (name, args) in cases {
        let p = construct(&dir, name, args);
        let o = hexfold(&["verify", "--spec", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert_eq!(json(&o)["valid"], true);
    }
}

#[test]
fn corrupted_spec_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(&dir, "c7.json", &["--method", "classic7"]);
    let mut spec: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    // cell (1, 0) takes the colour of its neighbour (0, 0)
    spec["layers"][0]["labels"][1] = spec["layers"][0]["labels"][0].clone();
    fs::write(&p, serde_json::to_string(&spec).unwrap()).unwrap();
    let o = hexfold(&["verify", "--spec", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report = json(&o);
    assert_eq!(report["valid"], false);
    let v = report["findings"].as_array().unwrap().iter().find(|f| f["status"] == "VIOLATION").unwrap();
    assert!(v["witness"].is_array());
}

#[test]
fn verify_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"version\": 1}").unwrap();
    assert_eq!(hexfold(&["verify", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(hexfold(&["verify", "--spec", "/nonexistent/spec.json"]).status.code(), Some(2));
}

#[test]
fn sampled_zero_samples() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(&dir, "f3.json", &["--method", "fold3"]);
    let o = hexfold(&["verify", "--spec", p.to_str().unwrap(), "--mode", "sampled", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pairs_checked"], 0);
}

#[test]
fn sampled_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = construct(&dir, "f2.json", &["--method", "fold2"]);
    let args = ["verify", "--spec", p.to_str().unwrap(), "--mode", "sampled", "--samples", "50000", "--seed", "7"];
    let (a, b) = (hexfold(&args), hexfold(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

fn random_csv(n: usize, seed: u64) -> String {
    // small LCG; positions only need to be spread over the 10 x 10 window
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 10.0
    };
    let mut s = String::from("id,x,y\n");
    for i in 0..n {
        s.push_str(&format!("t{i},{},{}\n", next(), next()));
    }
    s
}

#[test]
fn schedule_random_transmitters() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tx.csv");
    fs::write(&csv, random_csv(200, 11)).unwrap();
    let o = hexfold(&["schedule", "--positions", csv.to_str().unwrap(), "--method", "nm", "--n", "3", "--m", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = json(&o);
    assert!((s["cycle_length"].as_f64().unwrap() - 100.0 / 9.0).abs() < 1e-12);
    assert_eq!(s["slots"].as_object().unwrap().len(), 200);
    assert!(s["slots"]["t0"].as_array().unwrap().len() == 9);
}

#[test]
fn schedule_range_scaling() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tx.csv");
    fs::write(&csv, "id,x,y\na,0,0\nb,10,0\nc,20,0\n").unwrap();
    let o = hexfold(&["schedule", "--positions", csv.to_str().unwrap(), "--range", "10"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("3 transmitters, 1 conflicts"));
}

#[test]
fn schedule_empty_csv() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("empty.csv", ""), ("header.csv", "id,x,y\n")] {
        let csv = dir.path().join(name);
        fs::write(&csv, text).unwrap();
        let o = hexfold(&["schedule", "--positions", csv.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(json(&o)["slots"].as_object().unwrap().is_empty());
    }
}

#[test]
fn schedule_input_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("dup.csv", "id,x,y\na,0,0\na,1,1\n", "duplicate"),
        ("num.csv", "id,x,y\na,0,0\nb,zero,1\n", "line 3"),
        ("cols.csv", "id,x,y\na,0,0\nb,1\n", "line 3"),
        ("head.csv", "name,x,y\na,0,0\n", "line 1"),
    ];
    for (name, text, needle) in cases {
        let csv = dir.path().join(name);
        fs::write(&csv, text).unwrap();
        let o = hexfold(&["schedule", "--positions", csv.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(needle), "{name}: {}", stderr(&o));
    }
}

#[test]
fn schedule_rejects_narrow_colouring() {
    let dir = tempfile::tempdir().unwrap();
    let spec = construct(&dir, "f3.json", &["--method", "fold3"]);
    let csv = dir.path().join("tx.csv");
    fs::write(&csv, "id,x,y\na,0,0\n").unwrap();
    let o = hexfold(&["schedule", "--positions", csv.to_str().unwrap(), "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
