use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PROJECT_I: &str = "class,dit,rfc,wmc\nc1,1,10,7\nc2,3,9,3\nc3,2,21,1\nc4,2,3,9\nc5,1,1,7\n";

fn ckdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckdp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/corpus")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn project_i(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("I.csv");
    std::fs::write(&path, PROJECT_I).unwrap();
    path.display().to_string()
}

#[test]
fn analyze_replays_project_i() {
    let dir = tempfile::tempdir().unwrap();
    let out = ckdp(&[
        "analyze",
        "--input-format",
        "metrics-csv",
        "--output",
        "csv",
        &project_i(&dir),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "class,dit,rfc,wmc,dp_dit,dp_rfc,dp_wmc,c_dpr");
    assert_eq!(lines[1], "c1,1,10,7,10.63,1.12,7.31,6.14");
    assert_eq!(lines.last().unwrap(), &"PROJECT,,,,16.80,1.11,6.62,7.39");
    assert!(!body.contains("note:"));
    assert!(stderr(&out).contains("non-monotonic"));
}

#[test]
fn gate_exceeded_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = ckdp(&[
        "analyze",
        "--input-format",
        "metrics-csv",
        "--gate",
        "5.0",
        &project_i(&dir),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = ckdp(&[
        "analyze",
        "--input-format",
        "metrics-csv",
        "--gate",
        "50",
        &project_i(&dir),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().display().to_string();
    let out = ckdp(&["analyze", &empty]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no classes found"));

    let broken = dir.path().join("Bad.java");
    std::fs::write(&broken, "class {").unwrap();
    let out = ckdp(&["metrics", &broken.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("Bad.java") && stderr(&out).contains("1:7"),
        "{}",
        stderr(&out)
    );

    let out = ckdp(&["analyze", "/definitely/not/here"]);
    assert_eq!(out.status.code(), Some(2));

    let out = ckdp(&["analyze", "--gate", "0", &empty]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_report_has_model_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = ckdp(&[
        "analyze",
        "--input-format",
        "metrics-csv",
        "--model",
        "published",
        &project_i(&dir),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("Model: PUBLISHED\n"));
}

#[test]
fn metrics_on_corpus_and_dump_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("model.json");
    let out = ckdp(&[
        "metrics",
        &corpus().display().to_string(),
        "--dump-model",
        &dump.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let from_source = stdout(&out);
    assert!(from_source.starts_with("class,dit,rfc,wmc\nCircle,1,5,3\n"));
    assert!(from_source.contains("Square,3,7,4\n"));

    let out = ckdp(&[
        "metrics",
        "--input-format",
        "model-document",
        &dump.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), from_source);
}

#[test]
fn cyclomatic_mode() {
    let out = ckdp(&[
        "metrics",
        "--wmc-mode",
        "cyclomatic",
        &corpus().display().to_string(),
    ]);
    assert!(stdout(&out).contains("Logger,0,2,5\n"));
}

#[test]
fn calibrate_writes_model_usable_by_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("calibrated.json");
    let out = ckdp(&["calibrate", "--model-out", &model.display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    assert!(
        report.contains("DP_DIT") && report.contains("10.8000"),
        "{report}"
    );
    assert!(stderr(&out).contains("corrupted"));

    let out = ckdp(&[
        "analyze",
        "--input-format",
        "metrics-csv",
        "--output",
        "csv",
        "--model-file",
        &model.display().to_string(),
        &project_i(&dir),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).ends_with("PROJECT,,,,16.80,1.11,6.62,7.39\n"));
}

#[test]
fn calibrate_structured_output_parses() {
    let out = ckdp(&["calibrate", "--output", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    assert!(body.contains("\"divergence\"") && body.contains("\"fits\""));
    assert!(body.trim_start().starts_with('{') && body.trim_end().ends_with('}'));
}

#[test]
fn calibrate_rejects_bad_golden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    std::fs::write(&path, "wrong,header\n").unwrap();
    let out = ckdp(&["calibrate", "--golden", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
}
