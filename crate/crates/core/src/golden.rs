//! Embedded golden data: per-class metrics with their printed defect-proneness
//! percentages for five projects, plus the printed project summaries.
//!
//! The class table is kept cell for cell. Project IV's DP_WMC column does not
//! follow from its own WMC values (it repeats project V's column), so those
//! cells carry `trust_wmc = corrupted` and are excluded from the WMC fit. The
//! rest of each project IV row is trusted, and its printed C-DPR is consistent
//! with its printed components.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::metrics::MetricVector;

const CLASSES_CSV: &str = include_str!("../data/golden_classes.csv");
const PROJECTS_CSV: &str = include_str!("../data/golden_projects.csv");

pub const GOLDEN_CLASSES_HEADER: &str =
    "project,class,dit,rfc,wmc,dp_dit,dp_rfc,dp_wmc,c_dpr,trust_wmc";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trust {
    Trusted,
    Corrupted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub project: String,
    #[serde(rename = "class")]
    pub class_index: u32,
    pub dit: u32,
    pub rfc: u32,
    pub wmc: u32,
    pub dp_dit: f64,
    pub dp_rfc: f64,
    pub dp_wmc: f64,
    pub c_dpr: f64,
    pub trust_wmc: Trust,
}

impl GoldenRow {
    pub fn metrics(&self) -> MetricVector {
        MetricVector::new(
            format!("{}-{}", self.project, self.class_index),
            self.dit,
            self.rfc,
            self.wmc,
        )
    }

    pub fn wmc_trusted(&self) -> bool {
        self.trust_wmc == Trust::Trusted
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenProject {
    pub project: String,
    pub mean_dp_dit: f64,
    pub mean_dp_rfc: f64,
    pub mean_dp_wmc: f64,
    pub p_dpr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenDataset {
    pub class_rows: Vec<GoldenRow>,
    /// Printed summary rows; empty for datasets read without them.
    pub projects: Vec<GoldenProject>,
}

impl GoldenDataset {
    pub fn embedded() -> Self {
        Self {
            class_rows: parse_rows(CLASSES_CSV, "golden_classes.csv")
                .expect("embedded golden class table parses"),
            projects: parse_rows(PROJECTS_CSV, "golden_projects.csv")
                .expect("embedded golden project table parses"),
        }
    }

    /// Reads a class table with header [`GOLDEN_CLASSES_HEADER`].
    pub fn from_classes_csv(text: &str, source: &str) -> Result<Self, Error> {
        check_header(text, GOLDEN_CLASSES_HEADER, source)?;
        Ok(Self {
            class_rows: parse_rows(text, source)?,
            projects: Vec::new(),
        })
    }

    pub fn project_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = Vec::new();
        for row in &self.class_rows {
            if !ids.contains(&row.project.as_str()) {
                ids.push(&row.project);
            }
        }
        ids
    }

    pub fn rows_of<'a>(&'a self, project: &'a str) -> impl Iterator<Item = &'a GoldenRow> + 'a {
        self.class_rows.iter().filter(move |r| r.project == project)
    }
}

pub(crate) fn check_header(text: &str, expected: &str, source: &str) -> Result<(), Error> {
    let header = text.lines().next().unwrap_or("").trim();
    if header == expected {
        Ok(())
    } else {
        Err(Error::Csv {
            path: source.to_string(),
            line: 1,
            message: format!("expected header `{expected}`, found `{header}`"),
        })
    }
}

pub(crate) fn parse_rows<T: for<'de> Deserialize<'de>>(
    text: &str,
    source: &str,
) -> Result<Vec<T>, Error> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .map(|row| {
            row.map_err(|e| Error::Csv {
                path: source.to_string(),
                line: e.position().map_or(0, |p| p.line() as usize),
                message: match e.kind() {
                    csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                    _ => e.to_string(),
                },
            })
        })
        .collect()
}
