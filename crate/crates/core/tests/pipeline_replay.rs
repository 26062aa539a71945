mod common;

use ckdp_core::golden::GoldenDataset;
use ckdp_core::pipeline::{run_analyze, run_metrics, AnalysisConfig, ExitStatus, InputFormat};
use ckdp_core::report::{render, render_metrics_csv, OutputFormat};

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn project_csv(g: &GoldenDataset, project: &str) -> String {
    let vectors: Vec<_> = g.rows_of(project).map(|r| r.metrics()).collect();
    render_metrics_csv(&vectors).replace('-', "_")
}

#[test]
fn golden_projects_replay_from_metrics_csv() {
    let g = GoldenDataset::embedded();
    let dir = tempfile::tempdir().unwrap();
    // Project IV's printed components are not derivable from its metrics.
    for project in ["I", "II", "III", "V"] {
        let path = write(&dir, &format!("{project}.csv"), &project_csv(&g, project));
        let config = AnalysisConfig {
            inputs: vec![path],
            input_format: InputFormat::MetricsCsv,
            ..AnalysisConfig::default()
        };
        let outcome = run_analyze(&config).unwrap();
        for (row, printed) in outcome.report.rows.iter().zip(g.rows_of(project)) {
            let got = row.profile.c_dpr;
            assert!(
                (got - printed.c_dpr).abs() <= 0.02,
                "{project}: {got} vs {}",
                printed.c_dpr
            );
        }
        let summary = g.projects.iter().find(|p| p.project == project).unwrap();
        let p_dpr = outcome.report.summary.p_dpr;
        assert!(
            (p_dpr - summary.p_dpr).abs() <= 0.02,
            "{project}: {p_dpr} vs {}",
            summary.p_dpr
        );
    }
}

#[test]
fn project_i_class_values_and_gate() {
    let g = GoldenDataset::embedded();
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "I.csv", &project_csv(&g, "I"));
    let config = AnalysisConfig {
        inputs: vec![path],
        input_format: InputFormat::MetricsCsv,
        ..AnalysisConfig::default()
    };
    let outcome = run_analyze(&config).unwrap();
    let c_dpr: Vec<f64> = outcome
        .report
        .rows
        .iter()
        .map(|r| r.profile.c_dpr)
        .collect();
    for (got, want) in c_dpr.iter().zip([6.14, 11.03, 6.57, 7.34, 5.87]) {
        assert!((got - want).abs() <= 0.02, "{got} vs {want}");
    }
    assert!((outcome.report.summary.p_dpr - 7.39).abs() <= 0.02);
    assert_eq!(outcome.status, ExitStatus::Success);

    let gated = AnalysisConfig {
        gate: Some(5.0),
        ..config
    };
    assert_eq!(
        run_analyze(&gated).unwrap().status,
        ExitStatus::GateExceeded
    );
}

#[test]
fn metrics_csv_round_trip_preserves_report() {
    let dir = tempfile::tempdir().unwrap();
    let source = AnalysisConfig {
        inputs: vec![common::fixtures().join("corpus")],
        ..AnalysisConfig::default()
    };
    let vectors = run_metrics(&source).unwrap();
    let path = write(&dir, "corpus.csv", &render_metrics_csv(&vectors));
    let replay = AnalysisConfig {
        inputs: vec![path],
        input_format: InputFormat::MetricsCsv,
        project_id: Some("corpus".into()),
        ..AnalysisConfig::default()
    };
    let direct = AnalysisConfig {
        project_id: Some("corpus".into()),
        ..source
    };
    let a = run_analyze(&direct).unwrap().report;
    let b = run_analyze(&replay).unwrap().report;
    assert_eq!(a, b);
    for format in [
        OutputFormat::Text,
        OutputFormat::Csv,
        OutputFormat::Structured,
    ] {
        assert_eq!(render(&a, format, 2), render(&b, format, 2));
    }
}

#[test]
fn report_rows_follow_model_classes() {
    let config = AnalysisConfig {
        inputs: vec![common::fixtures().join("corpus")],
        ..AnalysisConfig::default()
    };
    let report = run_analyze(&config).unwrap().report;
    assert_eq!(report.rows.len(), common::CORPUS_EXPECTED.len());
    assert_eq!(report.model_label, "CALIBRATED");
    let csv = render(&report, OutputFormat::Csv, 2);
    assert_eq!(csv.lines().count(), report.rows.len() + 2);
}
