use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obembed")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(run(args).stdout).unwrap()
}

fn emit(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut full = args.to_vec();
    full.extend(["--emit", &path]);
    assert_eq!(code(&full), 0, "{full:?}");
    path
}

#[test]
fn classify_examples() {
    let out = stdout(&["classify", "--genus", "2", "--word", "b1 a1 c1 a2"]);
    assert!(out.contains("type1: yes") && out.contains("torelli: no"), "{out}");
    let out = stdout(&["classify", "--genus", "3", "--word", ""]);
    assert!(out.contains("type1: yes") && out.contains("torelli: yes") && out.contains("free rank 6"), "{out}");
    let out = stdout(&["classify", "--genus", "2", "--word", "b2"]);
    assert!(out.contains("type1: no") && out.contains("caveat:") && out.contains("not a proof"), "{out}");

    let out = stdout(&["classify", "--genus", "3", "--word", "e1 e2^-1"]);
    assert!(out.contains("torelli: yes") && out.contains("Z^6") && out.contains("not a homology sphere"), "{out}");

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["classify", "--genus", "1", "--word", "a1 b1", "--json"])).unwrap();
    assert_eq!(json["h1"]["free_rank"], 0);
    assert_eq!(json["type1"], true);
}

#[test]
fn catalog_examples() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["catalog", "xi-n", "--n", "2"])).unwrap();
    assert_eq!(json["nodes"].as_array().unwrap().len(), 2);
    assert_eq!(json["monodromy"], "s1^-1 s2^-1");
    let json: serde_json::Value = serde_json::from_str(&stdout(&["catalog", "rp3"])).unwrap();
    assert_eq!(json["monodromy"], "s1^2");
    assert_eq!(code(&["catalog", "ustilovsky", "--m", "2", "--k", "3"]), 0);
    assert_eq!(code(&["catalog", "std-sphere", "--n", "3"]), 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = emit(dir.path(), "good.json", &["embed", "thm1", "--n", "1", "--k", "2", "--l", "1"]);
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"source\": 3}").unwrap();
    let junk = junk.to_str().unwrap();
    let missing = dir.path().join("missing.json");
    let missing = missing.to_str().unwrap();

    let cases: &[(&[&str], i32)] = &[
        // success
        (&["classify", "--genus", "2", "--word", "a1 c1"], 0),
        (&["embed", "thm1", "--n", "2", "--k", "-1", "--l", "1"], 0),
        (&["embed", "surface", "--genus", "2", "--word", "a1 c1"], 0),
        (&["catalog", "xi-n", "--n", "3"], 0),
        (&["verify", &good, "--samples", "100"], 0),
        (&["--help"], 0),
        // semantic failures
        (&["embed", "surface", "--genus", "2", "--word", "b2"], 1),
        (&["embed", "surface", "--genus", "3", "--word", "a1 b2^-1"], 1),
        // usage and parse failures
        (&[], 2),
        (&["frobnicate"], 2),
        (&["classify", "--genus", "2"], 2),
        (&["classify", "--genus", "2", "--word", "a1 ^"], 2),
        (&["classify", "--genus", "2", "--word", "zz"], 2),
        (&["classify", "--genus", "0", "--word", ""], 2),
        (&["classify", "--word", "a1"], 2),
        (&["classify", "--genus", "2", "--word", "a1", "--bogus"], 2),
        (&["embed", "thm1", "--n", "0", "--k", "1", "--l", "1"], 2),
        (&["embed", "thm1", "--n", "1", "--k", "x", "--l", "1"], 2),
        (&["embed", "thm1", "--n", "1", "--k", "1", "--l", "1", "--eps", "0"], 2),
        (&["embed", "type1", "--input", missing], 2),
        (&["embed", "surface", "--genus", "2", "--word", "q1"], 2),
        (&["catalog", "ustilovsky", "--m", "2", "--k", "4"], 2),
        (&["catalog", "ustilovsky", "--m", "1", "--k", "3"], 2),
        (&["catalog", "xi-n", "--n", "0"], 2),
        (&["catalog", "nope"], 2),
        (&["verify", &good, "--samples", "0"], 2),
        (&["verify", &good, "--tol", "-1"], 2),
        (&["verify", &good, "--tol", "bogus=1"], 2),
        (&["verify", junk], 2),
        (&["verify", missing], 2),
    ];
    for (args, want) in cases {
        assert_eq!(code(args), *want, "{args:?}");
    }
}

#[test]
fn tampered_certificate_fails_obligation_a() {
    let dir = tempfile::tempdir().unwrap();
    let path = emit(dir.path(), "c.json", &["embed", "thm1", "--n", "1", "--k", "2", "--l", "1"]);
    let mut cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let m0 = cert["params"]["eps"].as_f64().unwrap().min(cert["params"]["delta"].as_f64().unwrap()) / 2.0;
    cert["schedule"][0]["steps"][2]["support"] = m0.into();
    std::fs::write(&path, cert.to_string()).unwrap();
    let report = dir.path().join("r.json");
    let out = run(&["verify", &path, "--samples", "100", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let failed: Vec<&str> = r["obligations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|o| o["status"] == "fail")
        .map(|o| o["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["a:m0-support"]);
}

#[test]
fn round_trips_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let xi = dir.path().join("xi.json");
    std::fs::write(&xi, stdout(&["catalog", "xi-n", "--n", "2"])).unwrap();
    let certs = [
        emit(dir.path(), "t.json", &["embed", "thm1", "--n", "2", "--k", "-1", "--l", "1"]),
        emit(dir.path(), "x.json", &["embed", "type1", "--input", xi.to_str().unwrap()]),
        emit(dir.path(), "s.json", &["embed", "surface", "--genus", "2", "--word", "a1 c1^-1 b1"]),
    ];
    for c in &certs {
        let a = run(&["verify", c, "--samples", "150", "--seed", "5", "--json"]);
        assert_eq!(a.status.code(), Some(0), "{c}");
        let written = std::fs::read_to_string(format!("{c}.report.json")).unwrap();
        let b = run(&["verify", c, "--samples", "150", "--seed", "5", "--json"]);
        assert_eq!(a.stdout, b.stdout);
        let printed: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(printed, serde_json::from_str::<serde_json::Value>(&written).unwrap());
    }
    let a = stdout(&["embed", "thm1", "--n", "1", "--k", "1", "--l", "2", "--json"]);
    assert_eq!(a, stdout(&["embed", "thm1", "--n", "1", "--k", "1", "--l", "2", "--json"]));
}
