use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_contact-tensor"));
    cmd.env_remove("CONTACT_TENSOR_COLOR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn manifest(id: &str) -> String {
    repo(&format!("manifests/{id}.json"))
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn chart_example_report_is_inconsistent() {
    let r = json(&["report", &manifest("example41"), "--format", "json"]);
    let km = &r["classification"]["kappa_mu"];
    assert_eq!(km["status"], "inconsistent");
    assert_eq!(km["witness"]["pair"], serde_json::json!([1, 2]));
    assert_eq!(km["witness"]["component"], "e2");
    assert_eq!(r["curvature"]["R(e1,e2)e3"]["e2"], "-4/x");
    assert_eq!(r["connection"]["nabla_e2 e3"]["e1"], "2");
}

#[test]
fn kmu_flat_point() {
    let r = json(&[
        "report",
        &manifest("kmu"),
        "--set",
        "lambda=1",
        "--set",
        "mu=0",
        "--format",
        "json",
    ]);
    assert_eq!(r["classification"]["flat"], true);
    assert_eq!(
        r["classification"]["phi_recurrent"]["status"],
        "trivially_recurrent"
    );
    assert_eq!(r["bindings"]["lambda"], "1");
}

#[test]
fn sphere_constant_curvature() {
    let r = json(&["report", &manifest("sphere"), "--format", "json"]);
    assert_eq!(r["classification"]["constant_curvature"], "1");
    assert_eq!(r["classification"]["sasakian"]["holds"], true);
    assert_eq!(r["ricci"]["scalar"], "6");
}

#[test]
fn demo_outputs() {
    let r = json(&["demo", "example41", "--format", "json"]);
    assert_eq!(
        r["curvature"]["R(e1,e2)e3"],
        serde_json::json!({"e2": "-4/x"})
    );
    let r = json(&[
        "demo",
        "kmu",
        "--set",
        "lambda=1/2",
        "--set",
        "mu=0",
        "--format",
        "json",
    ]);
    assert_eq!(r["classification"]["kappa_mu"]["kappa"], "3/4");
    assert_eq!(r["structure"]["h_eigenvalue"], "1/2");
    let r = json(&["demo", "flat5", "--format", "json"]);
    assert_eq!(r["curvature"], serde_json::json!({}));
    assert_eq!(r["nabla_r"], serde_json::json!({}));
    assert_eq!(r["classification"]["contact_metric"], false);
    assert!(!r["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn symbolic_kmu_text_report() {
    let o = run(&["demo", "kmu"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.contains("(kappa,mu)-nullity     consistent  kappa = -lambda^2 + 1  mu = mu"),
        "{text}"
    );
    assert!(!text.contains('\x1b'));
    let colored = bin()
        .args(["demo", "sphere"])
        .env("CONTACT_TENSOR_COLOR", "1")
        .output()
        .unwrap();
    assert!(stdout(&colored).contains("\x1b[1mClassification\x1b[0m"));
    let plain = bin()
        .args(["demo", "sphere"])
        .env("CONTACT_TENSOR_COLOR", "0")
        .output()
        .unwrap();
    assert!(!stdout(&plain).contains('\x1b'));
}

#[test]
fn golden_reports() {
    for id in ["example41", "kmu", "sphere", "flat5"] {
        let got = stdout(&run(&["report", &manifest(id), "--format", "json"]));
        let path = repo(&format!("crates/cli/tests/golden/{id}.report.json"));
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &got).unwrap();
        }
        let want = std::fs::read_to_string(&path)
            .expect("golden file present; regenerate with UPDATE_GOLDEN=1");
        assert_eq!(got, want, "{id}");
    }
}

#[test]
fn checked_in_manifests_match_export() {
    for id in ["example41", "kmu", "sphere", "flat5"] {
        let exported = stdout(&run(&["export", id]));
        assert_eq!(
            exported,
            std::fs::read_to_string(manifest(id)).unwrap(),
            "{id}"
        );
    }
}

fn edited(id: &str, dir: &Path, f: impl FnOnce(&mut Value)) -> String {
    let mut v: Value =
        serde_json::from_str(&std::fs::read_to_string(manifest(id)).unwrap()).unwrap();
    f(&mut v);
    let path = dir.join(format!("{id}-edited.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn ingest_errors_are_exhaustive_and_located() {
    let dir = tempfile::tempdir().unwrap();
    let path = edited("kmu", dir.path(), |v| {
        v["phi"][1] = serde_json::json!(["0", "1"]);
        v["xi"][0] = serde_json::json!("2/x");
        v["metric"][2][2] = serde_json::json!("1 +");
    });
    let o = run(&["report", &path]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("3 problems"), "{err}");
    assert!(err.contains("phi[1]: expected 3 entries, found 2"), "{err}");
    assert!(err.contains("xi[0]: `2/x`: unknown symbol `x`"), "{err}");
    assert!(err.contains("metric[2][2]"), "{err}");
    // every issue carries line:column
    for line in err.lines().skip(1) {
        let pos = line.trim().split(": ").next().unwrap();
        assert!(pos.split(':').all(|n| n.parse::<usize>().is_ok()), "{line}");
    }
}

#[test]
fn json_syntax_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"schema_version\": 1,\n  \"name\": }").unwrap();
    let o = run(&["report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn jacobi_violation_is_fatal_unless_linting() {
    let dir = tempfile::tempdir().unwrap();
    let path = edited("kmu", dir.path(), |v| {
        v["frame"]["brackets"][2]["components"] = serde_json::json!(["2", "1", "0"]);
    });
    let o = run(&["report", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Jacobi identity fails on (e1,e2,e3)"));

    let o = run(&["report", &path, "--lint"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Jacobi"));
    let o = run(&["report", &path, "--lint", "--strict", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violations"][0]["severity"], "error");
}

#[test]
fn strict_mode() {
    assert_eq!(run(&["demo", "flat5", "--strict"]).status.code(), Some(2));
    assert_eq!(run(&["demo", "flat5"]).status.code(), Some(0));
    assert_eq!(run(&["demo", "kmu", "--strict"]).status.code(), Some(0));
    let o = run(&["report", &manifest("sphere"), "--lint"]);
    assert_eq!(stdout(&o), "sphere: no violations\n");
}

#[test]
fn usage_errors() {
    let o = run(&["demo", "torus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("available: example41, kmu, sphere, flat3, flat5"));
    assert_eq!(run(&["report"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["demo", "kmu", "--set", "nu=1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["demo", "kmu", "--set", "lambda=x"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["report", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_default_grid() {
    let o = run(&["sweep", &manifest("kmu")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 16);
    let recurrent: Vec<(&str, &str)> = rows
        .iter()
        .filter(|r| &r[col("phi_recurrent")] == "true")
        .map(|r| (&r[col("lambda")], &r[col("mu")]))
        .collect();
    assert_eq!(recurrent, vec![("1", "0")]);
    for r in &rows {
        assert_eq!(&r[col("locally_phi_symmetric")], "true");
        assert_eq!(&r[col("implication_chain")], "true");
        assert_eq!(&r[col("self_checks_passed")], "true");
    }
    // grid order: lambda-major
    let first: Vec<&str> = rows.iter().take(4).map(|r| &r[col("mu")]).collect();
    assert_eq!(first, ["-1", "0", "1", "2"]);
}

#[test]
fn sweep_custom_grid_json() {
    let args = [
        "sweep",
        &manifest("kmu"),
        "--lambda",
        "0,1/3",
        "--mu",
        "-2,1/2",
        "--format",
        "json",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&args).stdout, "deterministic");
    let rows: Vec<Value> = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["status"], "skipped");
    assert_eq!(rows[1]["status"], "skipped");
    assert_eq!(rows[2]["lambda"], "1/3");
    assert_eq!(rows[2]["mu"], "-2");
    assert_eq!(rows[2]["kappa"], "8/9");
    assert_eq!(run(&["sweep", &manifest("sphere")]).status.code(), Some(1));
    assert_eq!(
        run(&["sweep", &manifest("kmu"), "--mu", "a"]).status.code(),
        Some(1)
    );
}

#[test]
fn export_to_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&["export", "example41", "-o", p]).status.code(),
        Some(0)
    );
    let a = stdout(&run(&["report", p]));
    let b = stdout(&run(&["demo", "example41"]));
    assert_eq!(a, b);
}
