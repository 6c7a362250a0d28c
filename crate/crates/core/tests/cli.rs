use std::path::Path;
use std::process::{Command, Output};

fn lejadiff(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lejadiff"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_then_diff_recovers_gradient() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&lejadiff(dir.path(), &["gen", "--n", "1000", "--out", "pts.txt"]));
    let text = std::fs::read_to_string(dir.path().join("pts.txt")).unwrap();
    assert_eq!(text.lines().count(), 1000);

    let out = stdout(&lejadiff(
        dir.path(),
        &["diff", "--input", "pts.txt", "--center", "0.5,0.5", "--radius", "0.5", "--degree", "10", "--nu", "(1,0)", "--fn", "f2"],
    ));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let est = doc["estimate"].as_f64().unwrap();
    let reference = doc["reference"].as_f64().unwrap();
    assert!((est - reference).abs() < 1e-9 * reference);
    assert_eq!(doc["report"]["format"], "lejadiff.diff-report");
    assert!(doc["report"]["diagnostics"]["lebesgue"].as_f64().unwrap() >= 1.0);
}

#[test]
fn diff_reads_sample_files() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&lejadiff(dir.path(), &["gen", "--dist", "random", "--n", "600", "--seed", "4", "--out", "pts.txt"]));
    let pts = std::fs::read_to_string(dir.path().join("pts.txt")).unwrap();
    let values: String = pts
        .lines()
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
            format!("{:e}\n", 3.0 * v[0] - 2.0 * v[1] * v[1])
        })
        .collect();
    std::fs::write(dir.path().join("vals.txt"), values).unwrap();
    let out = stdout(&lejadiff(
        dir.path(),
        &["diff", "--input", "pts.txt", "--values", "vals.txt", "--center", "0.4,0.6", "--radius", "0.4", "--degree", "4", "--nu", "(0,1)"],
    ));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((doc["estimate"].as_f64().unwrap() + 2.4).abs() < 1e-9);
    assert!(doc["reference"].is_null());
}

#[test]
fn stencil_reports_and_dumps_matrix() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&lejadiff(dir.path(), &["gen", "--n", "500", "--out", "pts.txt"]));
    let out = stdout(&lejadiff(
        dir.path(),
        &["stencil", "--input", "pts.txt", "--center", "0.5,0.5", "--radius", "0.5", "--degree", "3", "--dump-matrix", "v.txt"],
    ));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 10);
    assert_eq!(doc["pivot_magnitudes"].as_array().unwrap().len(), 10);
    let matrix = std::fs::read_to_string(dir.path().join("v.txt")).unwrap();
    let rows: Vec<&str> = matrix.lines().collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.split_whitespace().count() == 10));
    assert!(rows[0].split_whitespace().next().unwrap().starts_with("1.0000000000000000e0"));
}

#[test]
fn table2_marks_infeasible_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&lejadiff(dir.path(), &["table2", "--radii", "0.125", "--degrees", "5,10"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# schema=lejadiff.table2/1");
    assert!(lines.iter().any(|l| l.starts_with("1.25e-1,10,0,50,-,")));
}

#[test]
fn exit_codes_separate_configuration_from_numerical_failures() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&lejadiff(dir.path(), &["gen", "--n", "200", "--out", "pts.txt"]));
    let bad_flag = lejadiff(dir.path(), &["table1", "--format", "xml"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    let missing = lejadiff(dir.path(), &["stencil", "--input", "nope.txt", "--center", "0.5,0.5", "--radius", "0.5", "--degree", "2"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_radius = lejadiff(dir.path(), &["sweep", "--radii", "-1"]);
    assert_eq!(bad_radius.status.code(), Some(2));
    let too_few = lejadiff(dir.path(), &["stencil", "--input", "pts.txt", "--center", "0.5,0.5", "--radius", "0.1", "--degree", "6"]);
    assert_eq!(too_few.status.code(), Some(3));
}
