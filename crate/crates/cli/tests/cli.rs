use std::path::Path;
use std::process::{Command, Output};

fn flagstar(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagstar"))
        .current_dir(dir)
        .env_remove("FLAGSTAR_WORKERS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(flagstar(d, &["generate", "icosahedron", "-o", "ico.cplx"]).status.success());
    let ok = flagstar(d, &["verify", "ico.cplx", "--oracle"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["fns"]["is_fns"], true);
    assert_eq!(v["oracle_agrees"], true);

    assert!(flagstar(d, &["generate", "cross-polytope", "--n", "3", "-o", "oct.cplx"]).status.success());
    assert_eq!(flagstar(d, &["verify", "oct.cplx"]).status.code(), Some(1));

    std::fs::write(d.join("bad.cplx"), "dim 1\nvertices 2\n0\n1\nfacets 1\n0 x\n").unwrap();
    let bad = flagstar(d, &["verify", "bad.cplx"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("line 6"), "{}", stderr(&bad));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(flagstar(d, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(flagstar(d, &["encode", "--k", "2", "--perm", "1,1"]).status.code(), Some(2));
    assert_eq!(flagstar(d, &["encode", "--k", "3", "--perm", "1,2"]).status.code(), Some(2));
    assert_eq!(flagstar(d, &["bounds", "--x", "49"]).status.code(), Some(2));
    assert_eq!(flagstar(d, &["generate", "cycle"]).status.code(), Some(2));
    assert_eq!(flagstar(d, &["stats", "missing.cplx"]).status.code(), Some(2));
    std::fs::write(d.join("cfg.json"), r#"{"seed": 1, "k": 2, "output_dir": "out", "bogus": 1}"#).unwrap();
    assert_eq!(flagstar(d, &["pipeline", "cfg.json"]).status.code(), Some(2));
    let bad_workers = Command::new(env!("CARGO_BIN_EXE_flagstar"))
        .env("FLAGSTAR_WORKERS", "many")
        .args(["bounds", "--x", "50"])
        .output()
        .unwrap();
    assert_eq!(bad_workers.status.code(), Some(2));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = flagstar(dir.path(), &["generate", "row", "--n", "2"]);
    let b = flagstar(dir.path(), &["--workers", "3", "generate", "row", "--n", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("dim 3\nvertices 226\n"));
}

#[test]
fn glue_and_handle_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    flagstar(d, &["generate", "cell600", "-o", "c.cplx"]);
    let g = flagstar(d, &["glue", "c.cplx", "c.cplx", "--v", "0", "--u", "0", "--reversing", "-o", "s.cplx"]);
    assert!(g.status.success(), "{}", stderr(&g));
    assert!(stderr(&g).contains("orientation sign -1"));
    let s = flagstar(d, &["stats", "s.cplx"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&s)).unwrap();
    assert_eq!(v["f_vector"], serde_json::json!([226, 1386, 2320, 1160]));
    assert_eq!(v["euler_characteristic"], 0);
    assert_eq!(v["fns"], true);

    flagstar(d, &["generate", "row", "--n", "3", "-o", "r.cplx"]);
    // Vertex 0 of the first copy is a free end; copy 3 vertex 13 lies at distance at least 7.
    let h =
        flagstar(d, &["handle", "r.cplx", "--v", "c1/0", "--u", "c3/13", "--enforce-fns", "--json", "-o", "h.json"]);
    assert!(h.status.success(), "{}", stderr(&h));
    assert_eq!(flagstar(d, &["verify", "h.json"]).status.code(), Some(0));
    let near = flagstar(d, &["handle", "r.cplx", "--v", "c1/0", "--u", "c1/1", "--enforce-fns"]);
    assert_eq!(near.status.code(), Some(1));
}

#[test]
fn encode_then_decode() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cal = flagstar(d, &["calibrate", "--base-row", "4", "-o", "thr.json"]);
    assert!(cal.status.success(), "{}", stderr(&cal));
    let enc = flagstar(
        d,
        &["encode", "--k", "2", "--perm", "2,1", "--base-row", "4", "-o", "t.cplx", "--roles", "t.roles.json"],
    );
    assert!(enc.status.success(), "{}", stderr(&enc));
    let roles: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("t.roles.json")).unwrap()).unwrap();
    assert_eq!(roles["sigma"], serde_json::json!([2, 1]));
    let dec = flagstar(d, &["decode", "t.cplx", "--k", "2", "--thresholds", "thr.json", "--report", "rep.json"]);
    assert!(dec.status.success(), "{}", stderr(&dec));
    assert_eq!(stdout(&dec).trim(), "2,1");
    assert!(d.join("rep.json").exists());
}
