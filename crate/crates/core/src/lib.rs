//! Class-level design metrics (WMC, DIT, RFC) and a polynomial
//! defect-proneness model built on them.
//!
//! Pipeline: source or model document → [`ClassModel`] → [`MetricVector`]s →
//! [`DefectProfile`]s and a [`ProjectProfile`] → rendered report.

pub mod calibration;
pub mod error;
pub mod estimation;
pub mod frontend;
pub mod golden;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
pub use estimation::{
    class_dpi, project_dpi, threshold_flags, DefectProfile, Metric, ModelLabel, ModelSet,
    ProjectProfile, ThresholdSet, Weights,
};
pub use metrics::{compute_all, MetricVector, WmcMode};
pub use model::{ingest_model, serialize_model, ClassDecl, ClassModel, MethodDecl, MethodRef};
pub use pipeline::{
    run_analyze, run_metrics, AnalysisConfig, ExitStatus, InputFormat, ModelChoice, Outcome,
};
pub use report::{render, OutputFormat, Report};
