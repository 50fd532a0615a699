use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgeom"))
        .args(args)
        .env_remove("PGEOM_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("stderr is a JSON error object");
    v["error"]["kind"].as_str().unwrap().to_string()
}

fn make(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut full = vec!["make"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let o = pgeom(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn make_writes_loadable_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let path = make(
        dir.path(),
        "fano.json",
        &["--family", "pg", "--m", "3", "--q", "2"],
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let g = pgeom::io::geometry_from_str(&text).unwrap();
    assert_eq!(
        g,
        pgeom::make_pg(3, &pgeom::FieldSpec::new(2).unwrap()).unwrap()
    );
    let o = pgeom(&["critical", &path]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn contains_exit_codes_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let host = make(
        dir.path(),
        "host.json",
        &["--family", "g", "--m", "3", "--q", "3", "--c", "2"],
    );
    let line = make(
        dir.path(),
        "line.json",
        &["--family", "ag", "--m", "2", "--q", "3"],
    );
    let full_line = make(
        dir.path(),
        "pg.json",
        &["--family", "pg", "--m", "2", "--q", "3"],
    );
    let affine = make(
        dir.path(),
        "ag.json",
        &["--family", "ag", "--m", "3", "--q", "3"],
    );

    let o = pgeom(&["contains", &host, &line]);
    assert_eq!(o.status.code(), Some(0));
    let w: pgeom::EmbeddingWitness = serde_json::from_str(stdout(&o).trim()).unwrap();
    let load =
        |p: &str| pgeom::io::geometry_from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert!(pgeom::verify_witness(&load(&host), &load(&line), &w));

    let o = pgeom(&["contains", &affine, &full_line]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not-contained");

    let det = pgeom(&["--deterministic", "contains", &host, &line]);
    let par = pgeom(&["--threads", "2", "contains", &host, &line]);
    assert_eq!(stdout(&det), stdout(&par));
}

#[test]
fn extremal_and_density() {
    let dir = tempfile::tempdir().unwrap();
    let line = make(
        dir.path(),
        "line.json",
        &["--family", "pg", "--m", "2", "--q", "2"],
    );
    let o = pgeom(&["extremal", &line, "--n", "3"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 4);
    assert_eq!(v["status"], "exact");
    assert_eq!(v["witness"]["points"].as_array().unwrap().len(), 4);

    let o = pgeom(&["extremal", &line, "--n", "4", "--max-nodes", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "lower-bound");

    let csv = dir.path().join("d.csv");
    let o = pgeom(&[
        "density",
        &line,
        "--n-min",
        "2",
        "--n-max",
        "4",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,ex,total,density_num,density_den,limit_num,limit_den,status"
    );
    assert_eq!(
        &lines[1..],
        [
            "2,2,3,2,3,1,2,exact",
            "3,4,7,4,7,1,2,exact",
            "4,8,15,8,15,1,2,exact"
        ]
    );
}

#[test]
fn sparse_flat_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let g = make(
        dir.path(),
        "g.json",
        &["--family", "g", "--m", "3", "--q", "2", "--c", "1"],
    );
    let o = pgeom(&["sparse-flat", &g, "--m", "2", "--c", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 2);

    let fano = make(
        dir.path(),
        "fano.json",
        &["--family", "pg", "--m", "3", "--q", "2"],
    );
    let o = pgeom(&["sparse-flat", &fano, "--m", "2", "--c", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not-found");
}

#[test]
fn bounds_modes() {
    let o = pgeom(&["bounds", "--q", "2", "--m", "3", "--c", "1", "--eps", "1/4"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"]["kind"], "exact");
    assert_eq!(v["value"]["value"], "32");

    let o = pgeom(&[
        "bounds",
        "--q",
        "2",
        "--m",
        "3",
        "--c",
        "2",
        "--eps",
        "1/2",
        "--mode",
        "recursive",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"]["value"], "4");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 2);
    assert_eq!(
        (trace[0]["r"].as_u64(), trace[0]["t"].as_u64()),
        (Some(3), Some(4))
    );

    let o = pgeom(&["bounds", "--q", "2", "--m", "4", "--c", "3", "--eps", "1/4"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"]["kind"], "tower-symbolic");
}

#[test]
fn errors_are_json_with_exit_code_two() {
    let o = pgeom(&["make", "--family", "pg", "--m", "3", "--q", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "NotPrimePower");

    let o = pgeom(&["bounds", "--q", "3", "--m", "3", "--c", "1", "--eps", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "Unsupported");

    let o = pgeom(&["bounds", "--q", "2", "--m", "3", "--c", "1", "--eps", "0/1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "InvalidEpsilon");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"q":2,"p":2,"k":1,"modulus":[],"ambient":3,"points":[[0,0,0]]}"#,
    )
    .unwrap();
    let o = pgeom(&["critical", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = pgeom(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "Usage");

    assert_eq!(pgeom(&["--help"]).status.code(), Some(0));
}
