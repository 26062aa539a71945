//! End-to-end orchestration: inputs → metrics → estimation → report.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, ModelError, Result};
use crate::estimation::{ModelSet, ThresholdSet};
use crate::frontend::{self, DEFAULT_EXTENSION};
use crate::golden::{check_header, parse_rows};
use crate::metrics::{compute_all, MetricVector, WmcMode};
use crate::model::{self, ClassDecl, ClassModel};
use crate::report::{build_report, OutputFormat, Report, METRICS_CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    Source,
    ModelDocument,
    MetricsCsv,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "source" => Ok(InputFormat::Source),
            "model-document" => Ok(InputFormat::ModelDocument),
            "metrics-csv" => Ok(InputFormat::MetricsCsv),
            other => Err(format!(
                "unknown input format `{other}` (source, model-document, metrics-csv)"
            )),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Source => "source",
            InputFormat::ModelDocument => "model-document",
            InputFormat::MetricsCsv => "metrics-csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ModelChoice {
    Published,
    #[default]
    Calibrated,
    File(PathBuf),
}

impl ModelChoice {
    pub fn load(&self) -> Result<ModelSet> {
        match self {
            ModelChoice::Published => Ok(ModelSet::published()),
            ModelChoice::Calibrated => Ok(ModelSet::calibrated()),
            ModelChoice::File(path) => {
                let text = read(path)?;
                ModelSet::from_document(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub inputs: Vec<PathBuf>,
    pub input_format: InputFormat,
    pub model_choice: ModelChoice,
    pub wmc_mode: WmcMode,
    pub output_format: OutputFormat,
    /// Fail (status 1) when the project index exceeds this percentage.
    pub gate: Option<f64>,
    pub round_decimals: u32,
    /// Source file extension used during directory discovery.
    pub extension: String,
    /// Defaults to the stem of a single input, else `project`.
    pub project_id: Option<String>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            input_format: InputFormat::default(),
            model_choice: ModelChoice::default(),
            wmc_mode: WmcMode::default(),
            output_format: OutputFormat::default(),
            gate: None,
            round_decimals: 2,
            extension: DEFAULT_EXTENSION.to_string(),
            project_id: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::Config("at least one input path is required".into()));
        }
        if let Some(g) = self.gate {
            if !(g > 0.0 && g <= 100.0) {
                return Err(Error::Config(format!("gate {g} must lie in (0, 100]")));
            }
        }
        if self.round_decimals > 12 {
            return Err(Error::Config("rounding is limited to 12 decimals".into()));
        }
        Ok(())
    }

    fn project_id(&self) -> String {
        if let Some(id) = &self.project_id {
            return id.clone();
        }
        match self.inputs.as_slice() {
            [single] => single
                .file_stem()
                .and_then(|s| s.to_str())
                .filter(|s| !s.is_empty())
                .unwrap_or("project")
                .to_string(),
            _ => "project".to_string(),
        }
    }
}

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    GateExceeded = 1,
    InputError = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub status: ExitStatus,
}

/// Metric vectors plus the class model they came from, when there is one.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub vectors: Vec<MetricVector>,
    pub model: Option<ClassModel>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Deserialize)]
struct MetricsRow {
    class: String,
    dit: u32,
    rfc: u32,
    wmc: u32,
}

/// Parses `class,dit,rfc,wmc` text. Class names must be identifiers and unique.
pub fn parse_metrics_csv(text: &str, source: &str) -> Result<Vec<MetricVector>> {
    check_header(text, METRICS_CSV_HEADER, source)?;
    let rows: Vec<MetricsRow> = parse_rows(text, source)?;
    let mut seen = BTreeSet::new();
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            let line = i + 2;
            if !model::is_identifier(&r.class) {
                return Err(Error::Csv {
                    path: source.to_string(),
                    line,
                    message: format!("`{}` is not a valid class name", r.class),
                });
            }
            if !seen.insert(r.class.clone()) {
                return Err(Error::Csv {
                    path: source.to_string(),
                    line,
                    message: format!("duplicate class `{}`", r.class),
                });
            }
            Ok(MetricVector::new(r.class, r.dit, r.rfc, r.wmc))
        })
        .collect()
}

fn load_documents(files: &[PathBuf]) -> Result<ClassModel> {
    let mut classes: Vec<ClassDecl> = Vec::new();
    let mut seen = BTreeSet::new();
    for path in files {
        let doc = model::ingest_model(&read(path)?).map_err(|source| Error::Ingest {
            path: path.clone(),
            source,
        })?;
        for class in doc.classes.into_values() {
            if !seen.insert(class.name.clone()) {
                return Err(Error::Ingest {
                    path: path.clone(),
                    source: ModelError::DuplicateClass(class.name.clone()),
                });
            }
            classes.push(class);
        }
    }
    if files.len() == 1 {
        // Already validated by ingestion.
        return Ok(ClassModel::from_classes(classes));
    }
    model::finalize(classes).map_err(|source| Error::Ingest {
        path: files.last().cloned().unwrap_or_default(),
        source,
    })
}

/// Runs the pipeline up to the metrics stage. Inputs are discovered and
/// sorted, so the result does not depend on argument order.
pub fn load(config: &AnalysisConfig) -> Result<Loaded> {
    config.validate()?;
    let loaded = match config.input_format {
        InputFormat::Source => {
            let files = frontend::discover_sources(&config.inputs, &config.extension)?;
            let model = frontend::model_from_files(&files)?;
            Loaded {
                vectors: compute_all(&model, config.wmc_mode),
                model: Some(model),
            }
        }
        InputFormat::ModelDocument => {
            let files = frontend::discover_sources(&config.inputs, "json")?;
            let model = load_documents(&files)?;
            Loaded {
                vectors: compute_all(&model, config.wmc_mode),
                model: Some(model),
            }
        }
        InputFormat::MetricsCsv => {
            let files = frontend::discover_sources(&config.inputs, "csv")?;
            let mut vectors = Vec::new();
            let mut seen = BTreeSet::new();
            for path in &files {
                let source = path.display().to_string();
                for v in parse_metrics_csv(&read(path)?, &source)? {
                    if !seen.insert(v.class_name.clone()) {
                        return Err(Error::Csv {
                            path: source,
                            line: 0,
                            message: format!(
                                "class `{}` appears in more than one file",
                                v.class_name
                            ),
                        });
                    }
                    vectors.push(v);
                }
            }
            Loaded {
                vectors,
                model: None,
            }
        }
    };
    if loaded.vectors.is_empty() {
        return Err(Error::NoClasses);
    }
    Ok(loaded)
}

pub fn run_metrics(config: &AnalysisConfig) -> Result<Vec<MetricVector>> {
    load(config).map(|l| l.vectors)
}

/// Full analysis. `Err` always means exit status 2.
pub fn run_analyze(config: &AnalysisConfig) -> Result<Outcome> {
    let model = config.model_choice.load()?;
    let loaded = load(config)?;
    analyze_vectors(&loaded.vectors, &model, config)
}

pub fn analyze_vectors(
    vectors: &[MetricVector],
    model: &ModelSet,
    config: &AnalysisConfig,
) -> Result<Outcome> {
    if vectors.is_empty() {
        return Err(Error::NoClasses);
    }
    let report = build_report(
        vectors,
        model,
        &ThresholdSet::default(),
        &config.project_id(),
    )?;
    let status = match config.gate {
        Some(gate) if report.summary.p_dpr > gate => ExitStatus::GateExceeded,
        _ => ExitStatus::Success,
    };
    Ok(Outcome { report, status })
}
