//! Report assembly and rendering (text, CSV, structured JSON).

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::EstimationError;
use crate::estimation::{
    class_dpi, influence, project_dpi, threshold_flags, DefectProfile, Flag, Metric, ModelSet,
    ProjectProfile, ThresholdSet, RFC_NON_MONOTONIC_NOTE,
};
use crate::metrics::MetricVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Structured,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "structured" | "json" => Ok(OutputFormat::Structured),
            other => Err(format!(
                "unknown output format `{other}` (text, csv, structured)"
            )),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Text => "text",
            OutputFormat::Csv => "csv",
            OutputFormat::Structured => "structured",
        })
    }
}

/// Diagnostic influence percentages from the empirical bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Influence {
    pub dit: f64,
    pub rfc: f64,
    pub wmc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub metrics: MetricVector,
    pub profile: DefectProfile,
    pub flags: Vec<Flag>,
    pub influence: Influence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub model_label: String,
    pub rows: Vec<ReportRow>,
    pub summary: ProjectProfile,
    /// Diagnostics for the side channel; never part of a rendered body.
    #[serde(skip)]
    pub notes: Vec<String>,
}

pub fn build_report(
    vectors: &[MetricVector],
    model: &ModelSet,
    thresholds: &ThresholdSet,
    project_id: &str,
) -> Result<Report, EstimationError> {
    let summary = project_dpi(vectors, model, project_id)?;
    let mut notes = vec![RFC_NON_MONOTONIC_NOTE.to_string()];
    let rows: Vec<ReportRow> = vectors
        .iter()
        .map(|v| {
            let profile = class_dpi(v, model);
            for metric in &profile.clamped {
                let value = match metric {
                    Metric::Dit => v.dit,
                    Metric::Rfc => v.rfc,
                    Metric::Wmc => v.wmc,
                };
                notes.push(format!(
                    "class {}: {metric} = {value} lies outside the model domain and was clamped",
                    v.class_name
                ));
            }
            ReportRow {
                metrics: v.clone(),
                flags: threshold_flags(v, thresholds),
                influence: Influence {
                    dit: influence(Metric::Dit, f64::from(v.dit)).value,
                    rfc: influence(Metric::Rfc, f64::from(v.rfc)).value,
                    wmc: influence(Metric::Wmc, f64::from(v.wmc)).value,
                },
                profile,
            }
        })
        .collect();
    Ok(Report {
        model_label: model.label.to_string(),
        rows,
        summary,
        notes,
    })
}

/// Rounds half away from zero; `-0` prints as `0`.
pub fn round_to(value: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    let r = (value * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn fixed(value: f64, decimals: u32) -> String {
    format!("{:.*}", decimals as usize, round_to(value, decimals))
}

pub fn render(report: &Report, format: OutputFormat, decimals: u32) -> String {
    match format {
        OutputFormat::Text => render_text(report, decimals),
        OutputFormat::Csv => render_csv(report, decimals),
        OutputFormat::Structured => render_structured(report, decimals),
    }
}

pub const REPORT_CSV_HEADER: &str = "class,dit,rfc,wmc,dp_dit,dp_rfc,dp_wmc,c_dpr";

fn render_csv(report: &Report, d: u32) -> String {
    let mut out = String::new();
    out.push_str(REPORT_CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        let (m, p) = (&row.metrics, &row.profile);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            m.class_name,
            m.dit,
            m.rfc,
            m.wmc,
            fixed(p.dp_dit, d),
            fixed(p.dp_rfc, d),
            fixed(p.dp_wmc, d),
            fixed(p.c_dpr, d)
        );
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "PROJECT,,,,{},{},{},{}",
        fixed(s.mean_dp_dit, d),
        fixed(s.mean_dp_rfc, d),
        fixed(s.mean_dp_wmc, d),
        fixed(s.p_dpr, d)
    );
    out
}

fn render_text(report: &Report, d: u32) -> String {
    let name_width = report
        .rows
        .iter()
        .map(|r| r.metrics.class_name.len())
        .chain([7])
        .max()
        .unwrap_or(7);
    let s = &report.summary;
    let mut out = String::new();
    let _ = writeln!(out, "Model: {}", report.model_label);
    let _ = writeln!(out, "Project: {} ({} classes)", s.project_id, s.n);
    let _ = writeln!(
        out,
        "{:<name_width$} {:>5} {:>5} {:>5} {:>8} {:>8} {:>8} {:>8} {:>8}  FLAGS",
        "CLASS", "DIT", "RFC", "WMC", "DPDIT", "DPRFC", "DPWMC", "C-DPR", "P-DPR"
    );
    for row in &report.rows {
        let (m, p) = (&row.metrics, &row.profile);
        let flags: Vec<String> = row.flags.iter().map(ToString::to_string).collect();
        let line = format!(
            "{:<name_width$} {:>5} {:>5} {:>5} {:>8} {:>8} {:>8} {:>8} {:>8}  {}",
            m.class_name,
            m.dit,
            m.rfc,
            m.wmc,
            fixed(p.dp_dit, d),
            fixed(p.dp_rfc, d),
            fixed(p.dp_wmc, d),
            fixed(p.c_dpr, d),
            "",
            flags.join(", ")
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "{:<name_width$} {:>5} {:>5} {:>5} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "PROJECT",
        "",
        "",
        "",
        fixed(s.mean_dp_dit, d),
        fixed(s.mean_dp_rfc, d),
        fixed(s.mean_dp_wmc, d),
        "",
        fixed(s.p_dpr, d)
    );
    out
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct StructuredDocument {
    pub model: String,
    pub projects: Vec<StructuredProject>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct StructuredProject {
    pub id: String,
    pub classes: Vec<StructuredClass>,
    pub summary: StructuredSummary,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct StructuredClass {
    pub class: String,
    pub dit: u32,
    pub rfc: u32,
    pub wmc: u32,
    pub dp_dit: f64,
    pub dp_rfc: f64,
    pub dp_wmc: f64,
    pub c_dpr: f64,
    pub flags: Vec<String>,
    pub influence: Influence,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct StructuredSummary {
    pub n: usize,
    pub mean_dp_dit: f64,
    pub mean_dp_rfc: f64,
    pub mean_dp_wmc: f64,
    pub p_dpr: f64,
}

/// The structured form of a report with every real rounded to `d` decimals.
pub fn structured(report: &Report, d: u32) -> StructuredDocument {
    let s = &report.summary;
    StructuredDocument {
        model: report.model_label.clone(),
        projects: vec![StructuredProject {
            id: s.project_id.clone(),
            classes: report
                .rows
                .iter()
                .map(|r| StructuredClass {
                    class: r.metrics.class_name.clone(),
                    dit: r.metrics.dit,
                    rfc: r.metrics.rfc,
                    wmc: r.metrics.wmc,
                    dp_dit: round_to(r.profile.dp_dit, d),
                    dp_rfc: round_to(r.profile.dp_rfc, d),
                    dp_wmc: round_to(r.profile.dp_wmc, d),
                    c_dpr: round_to(r.profile.c_dpr, d),
                    flags: r.flags.iter().map(ToString::to_string).collect(),
                    influence: Influence {
                        dit: round_to(r.influence.dit, d),
                        rfc: round_to(r.influence.rfc, d),
                        wmc: round_to(r.influence.wmc, d),
                    },
                })
                .collect(),
            summary: StructuredSummary {
                n: s.n,
                mean_dp_dit: round_to(s.mean_dp_dit, d),
                mean_dp_rfc: round_to(s.mean_dp_rfc, d),
                mean_dp_wmc: round_to(s.mean_dp_wmc, d),
                p_dpr: round_to(s.p_dpr, d),
            },
        }],
    }
}

fn render_structured(report: &Report, d: u32) -> String {
    let mut text =
        serde_json::to_string_pretty(&structured(report, d)).expect("reports always serialize");
    text.push('\n');
    text
}

pub const METRICS_CSV_HEADER: &str = "class,dit,rfc,wmc";

pub fn render_metrics_csv(vectors: &[MetricVector]) -> String {
    let mut out = String::from(METRICS_CSV_HEADER);
    out.push('\n');
    for v in vectors {
        let _ = writeln!(out, "{},{},{},{}", v.class_name, v.dit, v.rfc, v.wmc);
    }
    out
}
