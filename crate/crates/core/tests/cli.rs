use std::path::Path;
use std::process::Command;

use fcon::cli::Envelope;
use fcon::fcon::matrix::rmat;
use fcon::fcon::Matrix;
use serde_json::{json, Value};
use tempfile::TempDir;

fn fcon(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fcon"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn envelope(stdout: &str) -> Envelope {
    serde_json::from_str(stdout).expect("stdout is an envelope")
}

fn diag_half() -> Matrix {
    rmat(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 2)]])
}

fn diagram(kind: Option<&str>, objects: &[&str], morphisms: &[Matrix]) -> String {
    let mut v = json!({ "objects": objects, "morphisms": morphisms });
    if let Some(k) = kind {
        v["kind"] = json!(k);
    }
    v.to_string()
}

#[test]
fn epi_colimit_has_one_dimensional_apex() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", &diagram(None, &["2", "2"], &[diag_half()]));
    let (code, out, _) = fcon(&["colimit", "--kind", "epis", "--input", &input]);
    assert_eq!(code, 0);
    let env = envelope(&out);
    assert!(env.passed && env.error.is_none());
    let colim = &env.report.unwrap()["colimit"];
    assert_eq!(colim["apex_dim"], "1");
    let gram: Matrix = serde_json::from_value(colim["apex_gram"].clone()).unwrap();
    assert_eq!(gram, Matrix::identity(1));
}

#[test]
fn kind_flag_must_match_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", &diagram(Some("epis"), &["2", "2"], &[diag_half()]));
    let (code, out, _) = fcon(&["colimit", "--kind", "monos", "--input", &input]);
    assert_eq!(code, 2);
    assert_eq!(envelope(&out).error.unwrap().kind, "input");
    let (code, _, _) = fcon(&["colimit", "--input", &input]);
    assert_eq!(code, 0);
}

#[test]
fn pair_counterexample_suite_passes() {
    let (code, out, _) = fcon(&["semifield", "--instance", "pairs", "--suite", "counterexample"]);
    assert_eq!(code, 0);
    let report = envelope(&out).report.unwrap();
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"infima_not_compatible") && names.contains(&"no_field_embedding"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.json", "{\"kind\": \"epis\",\n  \"objects\": [1,,]}");
    let (code, out, err) = fcon(&["colimit", "--input", &input]);
    assert_eq!(code, 2);
    let e = envelope(&out).error.unwrap();
    assert_eq!((e.kind.as_str(), e.line, e.column), ("parse", Some(2), Some(17)));
    assert!(err.contains("line 2, column 17"), "{err}");
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    assert_eq!(fcon(&["colimit", "--input", "/nonexistent/d.json"]).0, 2);
    assert_eq!(fcon(&["check-axioms", "--mutation", "no-such-thing"]).0, 2);
    assert_eq!(fcon(&["frobnicate"]).0, 2);
    assert_eq!(fcon(&["--help"]).0, 0);
}

#[test]
fn envelope_round_trips() {
    let (_, out, _) = fcon(&["reconstruct", "--field", "gaussian", "--samples", "20", "--seed", "3"]);
    let raw: Value = serde_json::from_str(&out).unwrap();
    let env = envelope(&out);
    assert_eq!(serde_json::to_value(&env).unwrap(), raw);
    assert_eq!(
        (env.tool.as_str(), env.schema.as_str(), env.command.as_str(), env.seed),
        ("fcon", "1", "reconstruct", 3)
    );
}

#[test]
fn axiom_runs_are_deterministic_apart_from_timings() {
    let strip = |out: &str| Envelope {
        timings: None,
        ..envelope(out)
    };
    let (code, a, _) = fcon(&["check-axioms", "--seed", "5"]);
    let (_, b, _) = fcon(&["check-axioms", "--seed", "5"]);
    assert_eq!(code, 0);
    assert!(envelope(&a).timings.is_some());
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn mutation_is_caught_with_exit_one() {
    let (code, out, _) = fcon(&["check-axioms", "--mutation", "lossy-tensor"]);
    assert_eq!(code, 1);
    let report = envelope(&out).report.unwrap();
    let failed: Vec<&Value> = report["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .collect();
    assert!(failed
        .iter()
        .any(|r| r["name"] == "separator" && r.get("witness").is_some()));
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) = fcon(&["semifield", "--instance", "qplus", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert!(envelope(&std::fs::read_to_string(Path::new(&path)).unwrap()).passed);
}
