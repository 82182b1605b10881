use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.display().to_string()
}

fn scdr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scdr")).args(args).env_remove("SCDR_CUTOFF").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bracket_and_normalize_examples() {
    for (args, want) in [
        (vec!["bracket", "[B1 _ Psi1]"], "1"),
        (vec!["bracket", "[B1 _ B1]"], "0"),
        (vec!["bracket", "[S(B1) _ Psi1]"], "chi"),
        (vec!["normalize", ":vac B1:"], "B1"),
        (vec!["normalize", ":Psi1 S(B1): + :S(B1) Psi1:"], "0"),
        (vec!["normalize", "S(S(B1))"], "T B1"),
    ] {
        let o = scdr(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o).trim_end(), want, "{args:?}");
    }
}

#[test]
fn bracket_json_has_terms() {
    let o = scdr(&["--format", "json", "bracket", "[S(B1) _ Psi1]"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["terms"][0]["lambda"], 0);
    assert_eq!(v["terms"][0]["chi"], true);
    assert_eq!(v["terms"][0]["coefficient"], "1");
}

#[test]
fn verify_examples() {
    let o = scdr(&["verify", "ns", "--metric", "flat", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ns: PASS, c = 6, exact\n");
    let o = scdr(&["verify", "n4", "--dim", "4", "--flat-quaternionic", "--cutoff", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n4: PASS, c = 12"));
    let o = scdr(&["verify", "coordchange", "--change", &data("quad1d.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("guaranteed through degree"));
}

#[test]
fn curved_metric_and_negative_control() {
    let m = data("curved1d.json");
    let o = scdr(&["--format", "json", "verify", "ns", "--metric", &m, "--change", &m]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["central_charge"], "3");
    assert!(v[0]["guaranteed_degree"].as_i64().unwrap() >= 4);
    let o = scdr(&["verify", "ns", "--metric", &m, "--change", &m, "--drop-g-term"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("H covariance: FAIL"));
}

#[test]
fn cutoff_comes_from_env_then_file() {
    let m = data("curved1d.json");
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_scdr"));
        c.env_remove("SCDR_CUTOFF");
        if let Some(e) = env {
            c.env("SCDR_CUTOFF", e);
        }
        let mut args = vec!["--format", "json", "verify", "ns", "--metric", m.as_str()];
        args.extend_from_slice(extra);
        let o = c.args(&args).output().unwrap();
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v[0]["guaranteed_degree"].as_i64().unwrap()
    };
    assert_eq!(run(None, &[]), 4);
    assert_eq!(run(Some("6"), &[]), 2);
    assert_eq!(run(Some("6"), &["--cutoff", "10"]), 6);
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "verify", "jacobi", "--samples", "20", "--seed", "7", "--dim", "2"];
    let a = scdr(&args);
    let b = scdr(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let n = ["normalize", ":f{\"1\": \"1/2\"} :Psi1 S(B1)::"];
    assert_eq!(scdr(&n).stdout, scdr(&n).stdout);
}

#[test]
fn errors_have_exit_code_two() {
    let o = scdr(&["normalize", ":B1 Psi1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at offset"));
    let o = scdr(&["--format", "json", "bracket", "[B1 + Psi1 _ B1]"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["error"].as_str().unwrap().contains("homogeneous"));
    let o = scdr(&["verify", "n2", "--dim", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = scdr(&["verify", "n2", "--dim", "2", "--scalar-ring", "rational"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tensor_files_and_vector_fields() {
    let o = scdr(&["verify", "n2", "--metric", &data("flat2c.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("c = 6"));
    let o = scdr(&["verify", "vectorfields", "--field", "{\"2\": \"1\"}", "--field", "{\"0\": \"1\", \"3\": \"-2\"}"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = scdr(&["verify", "components", "--dim", "2", "--extension", "n2", "--cutoff", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
