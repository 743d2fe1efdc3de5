use std::process::{Command, Output};

fn stringc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stringc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(stringc(&["verify", "T8#1", "--n", "14"]).status.code(), Some(0));
    assert_eq!(stringc(&["verify", "T8#5", "--n", "14"]).status.code(), Some(1));
    assert_eq!(stringc(&["instantiate", "T7#25", "--n", "14", "--x", "1"]).status.code(), Some(2));
    assert_eq!(stringc(&["instantiate", "T7#25", "--n", "14", "--i", "2"]).status.code(), Some(2));
    assert_eq!(stringc(&["instantiate", "T4#1", "--n", "16"]).status.code(), Some(2));
    assert_eq!(stringc(&["verify", "--all", "--n", "12"]).status.code(), Some(2));
    assert_eq!(stringc(&["instantiate", "T99#1", "--n", "14"]).status.code(), Some(2));
    assert_eq!(stringc(&["search", "--ambient", "sym6-deg10"]).status.code(), Some(2));
    assert_eq!(stringc(&["search", "--ambient", "nope"]).status.code(), Some(2));
    assert_eq!(stringc(&["verify", "--n", "14"]).status.code(), Some(2));
    assert_eq!(stringc(&["verify", "T8#1", "--all", "--n", "14"]).status.code(), Some(2));
    assert_eq!(stringc(&["schlafli", "T8#1", "--n", "14", "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn domain_messages() {
    let o = stringc(&["instantiate", "T7#25", "--n", "14", "--x", "1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("x even required"));
    let o = stringc(&["instantiate", "T4#1", "--n", "16"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n/2 odd"));
}

#[test]
fn verify_is_reproducible() {
    let a = stringc(&["verify", "--all", "--n", "14", "--no-timing", "--format", "json", "--jobs", "4"]);
    let b = stringc(&["verify", "--all", "--n", "14", "--no-timing", "--format", "json", "--jobs", "1"]);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 51);
    let failed: Vec<&str> =
        reports.iter().filter(|r| r["status"] == "FAIL").map(|r| r["instance"].as_str().unwrap()).collect();
    assert_eq!(failed, ["T8#5", "T8#6", "T8#7"]);
}

#[test]
fn schlafli_and_dual() {
    let o = stringc(&["schlafli", "REP2N#2", "--n", "7"]);
    assert_eq!(stdout(&o).trim(), "{4,6,3,3}");
    let g = stdout(&stringc(&["instantiate", "REP2N#2", "--n", "7"]));
    let mut child = Command::new(env!("CARGO_BIN_EXE_stringc"))
        .args(["dual", "--input", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(g.as_bytes()).unwrap();
    let dual = child.wait_with_output().unwrap();
    assert!(dual.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dual.prg");
    std::fs::write(&path, &dual.stdout).unwrap();
    let o = stringc(&["schlafli", "--input", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "{3,3,6,4}");
}

#[test]
fn formats_and_output_file() {
    let dot = stdout(&stringc(&["instantiate", "T4#1", "--n", "14", "--format", "dot"]));
    assert!(dot.starts_with("graph") && dot.contains("--"));
    let json = stdout(&stringc(&["instantiate", "T4#1", "--n", "14", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["vertices"], 14);
    assert_eq!(v["rank"], 8);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.prg");
    let o = stringc(&["instantiate", "T4#1", "--n", "14", "--output", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&stringc(&["instantiate", "T4#1", "--n", "14"])));
}

#[test]
fn parameter_sweep() {
    let o = stringc(&["verify", "T7#25", "--n", "14", "--no-timing"]);
    let text = stdout(&o);
    assert!(o.status.success());
    assert!(text.lines().count() >= 2);
    assert!(text.lines().all(|l| l.starts_with("PASS T7#25 x=")), "{text}");
}

#[test]
fn search_text() {
    let o = stringc(&["search", "--ambient", "alt5-deg6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let symbols: Vec<&str> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(symbols, ["{3,5}", "{5,5}"]);
    assert!(text.contains("order=60"));
}

#[test]
fn catalog_listing() {
    let text = stdout(&stringc(&["catalog"]));
    assert!(text.lines().any(|l| l.starts_with("T6#17 ") && l.contains("param=i")));
    let v: serde_json::Value = serde_json::from_str(&stdout(&stringc(&["catalog", "--format", "json"]))).unwrap();
    assert_eq!(v.as_array().unwrap().len(), text.lines().count());
    assert_eq!(text.lines().count(), 41);
}
