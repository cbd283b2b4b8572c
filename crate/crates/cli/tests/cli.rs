use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paleylab"))
        .args(args)
        .current_dir(dir)
        .env("PALEYLAB_CACHE", dir.join("cache"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn field_info_reports_modulus_and_generator() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["field", "info", "3", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["modulus"], "x^2 + 1");
    assert_eq!(v["generator"], 4);
    let by_q = run(dir.path(), &["field", "info", "--q", "9"]);
    assert_eq!(by_q.stdout, o.stdout);
}

#[test]
fn field_table_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["field", "table", "3", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("index,poly,log,trace"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn dimacs_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["graph", "export", "gp", "9", "4", "--dimacs", "out.col"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("out.col")).unwrap();
    assert_eq!(text.lines().next(), Some("p edge 9 9"));

    let solved = run(dir.path(), &["clique", "solve", "--dimacs", "out.col"]);
    let v: serde_json::Value = serde_json::from_slice(&solved.stdout).unwrap();
    assert_eq!(v["omega"], 3);
}

#[test]
fn verify_main_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "main", "--q", "9,25,49,81", "--out", "rep"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("main.json"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rep/main.json")).unwrap()).unwrap();
    assert_eq!(v["totals"]["failed"], 0);
    assert_eq!(v["parameters"]["q"], serde_json::json!([9, 25, 49, 81]));
}

#[test]
fn verify_reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["verify", "inequalities", "--trials", "50", "--seed", "7", "--out", "a"]);
    run(dir.path(), &["verify", "inequalities", "--trials", "50", "--seed", "7", "--out", "b", "--jobs", "2"]);
    let a = std::fs::read(dir.path().join("a/inequalities.json")).unwrap();
    let b = std::fs::read(dir.path().join("b/inequalities.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["no-such-verb"]).status.code(), Some(2));
    assert_eq!(run(d, &["graph", "build", "gp", "25", "5"]).status.code(), Some(2));
    assert_eq!(run(d, &["clique", "solve", "gp", "81", "5", "--cap", "10"]).status.code(), Some(3));
    assert_eq!(run(d, &["verify", "fourier", "--q", "81", "--d", "5"]).status.code(), Some(3));
    let non_clique = run(d, &["clique", "check", "gp", "9", "4", "--set", "0,1,3"]);
    assert_eq!(non_clique.status.code(), Some(1));
    assert_eq!(run(d, &["clique", "check", "gp", "9", "4", "--set", "0,1,2"]).status.code(), Some(0));
}

#[test]
fn character_and_bound_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = run(d, &["char", "gauss", "--q", "25", "--d", "3"]);
    assert_eq!(g.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&g.stdout).unwrap();
    assert_eq!(v["gauss_sum"], "15:[5,0,0,0,0,0,0,0]");
    assert!(v["closed_forms"].as_array().unwrap().iter().all(|c| c["matches"] == true));
    let s: serde_json::Value = serde_json::from_slice(&run(d, &["char", "supersingular", "3", "8"]).stdout).unwrap();
    assert_eq!(s["supersingular"], false);
    let t: serde_json::Value = serde_json::from_slice(&run(d, &["clique", "t5bound", "7", "49", "3"]).stdout).unwrap();
    assert_eq!(t["bound"], 4);
    let pure: serde_json::Value =
        serde_json::from_slice(&run(d, &["char", "pure", "--q", "9", "--d", "8"]).stdout).unwrap();
    assert!(pure["purity"]["pure"].is_boolean());
}

#[test]
fn peisert_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let pec = run(d, &["peisert", "pec", "9", "--set", "0,1,2"]);
    assert_eq!(pec.status.code(), Some(0));
    let scan = run(d, &["peisert", "scan", "81", "--format", "csv"]);
    assert_eq!(scan.status.code(), Some(0));
    let text = stdout(&scan);
    assert_eq!(text.lines().next(), Some("h,criterion,direct,agree"));
    assert_eq!(text.lines().count(), 79);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}
