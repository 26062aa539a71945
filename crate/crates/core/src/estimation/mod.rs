//! Defect-proneness estimation: component polynomials per metric, their
//! weighted combination at class and project level, NASA-Rosenberg threshold
//! flags and the empirical influence bands.
//!
//! All percentages are carried at full precision; rounding happens only when
//! a report is rendered.

mod influence;
mod model_set;
mod poly;
mod thresholds;

use std::fmt;

use serde::Serialize;

pub use influence::{influence, knots, DIT_KNOTS, RFC_KNOTS, RFC_NON_MONOTONIC_NOTE, WMC_KNOTS};
pub use model_set::{ModelLabel, ModelSet, Weights, DIT_DOMAIN, RFC_DOMAIN, WMC_DOMAIN};
pub use poly::{Evaluation, PolynomialModel};
pub use thresholds::{threshold_flags, Flag, FlagLevel, Threshold, ThresholdSet};

use crate::error::EstimationError;
use crate::metrics::MetricVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Metric {
    Dit,
    Rfc,
    Wmc,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Dit, Metric::Rfc, Metric::Wmc];
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Dit => "DIT",
            Metric::Rfc => "RFC",
            Metric::Wmc => "WMC",
        })
    }
}

/// Per-class component percentages and their combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectProfile {
    pub class_name: String,
    pub dp_dit: f64,
    pub dp_rfc: f64,
    pub dp_wmc: f64,
    pub c_dpr: f64,
    /// Metrics whose value lay outside the polynomial domain and was clamped.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub clamped: Vec<Metric>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectProfile {
    pub project_id: String,
    pub class_profiles: Vec<DefectProfile>,
    pub mean_dp_dit: f64,
    pub mean_dp_rfc: f64,
    pub mean_dp_wmc: f64,
    pub p_dpr: f64,
    pub n: usize,
}

/// A root class (DIT 0) contributes nothing; otherwise the DIT cubic.
pub fn dp_dit(dit: u32, m: &ModelSet) -> Evaluation {
    if dit == 0 {
        return Evaluation {
            value: 0.0,
            clamped: false,
        };
    }
    m.dit_poly.eval(f64::from(dit))
}

pub fn dp_rfc(rfc: u32, m: &ModelSet) -> Evaluation {
    m.rfc_poly.eval(f64::from(rfc))
}

pub fn dp_wmc(wmc: u32, m: &ModelSet) -> Evaluation {
    m.wmc_poly.eval(f64::from(wmc))
}

pub fn class_dpi(v: &MetricVector, m: &ModelSet) -> DefectProfile {
    let d = dp_dit(v.dit, m);
    let r = dp_rfc(v.rfc, m);
    let w = dp_wmc(v.wmc, m);
    let clamped = [(Metric::Dit, d), (Metric::Rfc, r), (Metric::Wmc, w)]
        .into_iter()
        .filter(|(_, e)| e.clamped)
        .map(|(metric, _)| metric)
        .collect();
    DefectProfile {
        class_name: v.class_name.clone(),
        dp_dit: d.value,
        dp_rfc: r.value,
        dp_wmc: w.value,
        c_dpr: m.weights.combine(d.value, r.value, w.value),
        clamped,
    }
}

/// Project-level index: the weighted combination of the component means over
/// all `n` classes.
pub fn project_dpi(
    vectors: &[MetricVector],
    m: &ModelSet,
    project_id: &str,
) -> Result<ProjectProfile, EstimationError> {
    if vectors.is_empty() {
        return Err(EstimationError::EmptyProject);
    }
    let class_profiles: Vec<DefectProfile> = vectors.iter().map(|v| class_dpi(v, m)).collect();
    let n = class_profiles.len();
    let mean = |f: fn(&DefectProfile) -> f64| class_profiles.iter().map(f).sum::<f64>() / n as f64;
    let (mean_dp_dit, mean_dp_rfc, mean_dp_wmc) =
        (mean(|p| p.dp_dit), mean(|p| p.dp_rfc), mean(|p| p.dp_wmc));
    Ok(ProjectProfile {
        project_id: project_id.to_string(),
        p_dpr: m.weights.combine(mean_dp_dit, mean_dp_rfc, mean_dp_wmc),
        class_profiles,
        mean_dp_dit,
        mean_dp_rfc,
        mean_dp_wmc,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dp_dit_root_is_zero() {
        for m in [ModelSet::published(), ModelSet::calibrated()] {
            assert_eq!(
                dp_dit(0, &m),
                Evaluation {
                    value: 0.0,
                    clamped: false
                }
            );
        }
    }

    #[test]
    fn dp_dit_at_one() {
        assert!(close(dp_dit(1, &ModelSet::calibrated()).value, 10.63, 1e-9));
        // -1.55 + 16.86 - 35.3 + 30.67
        assert!(close(dp_dit(1, &ModelSet::published()).value, 10.68, 1e-9));
    }

    #[test]
    fn dp_dit_clamps_past_six() {
        let e = dp_dit(7, &ModelSet::calibrated());
        assert!(e.clamped);
        assert!(close(e.value, 80.23, 1e-9));
    }

    #[test]
    fn dp_rfc_points() {
        // 0.002*100 + 0.06*10 + 0.33
        assert!(close(dp_rfc(10, &ModelSet::published()).value, 1.13, 1e-12));
        assert!(close(dp_rfc(10, &ModelSet::calibrated()).value, 1.12, 0.02));
        assert!(close(
            dp_rfc(93, &ModelSet::calibrated()).value,
            23.89,
            0.05
        ));
    }

    #[test]
    fn dp_wmc_points() {
        let m = ModelSet::calibrated();
        assert!(close(dp_wmc(68, &m).value, 51.38, 0.005));
        assert!(close(dp_wmc(1, &m).value, 4.70, 0.005));
        assert!(close(dp_wmc(0, &m).value, 4.30, 1e-12));
        assert!(close(dp_wmc(7, &ModelSet::published()).value, 7.3107, 1e-9));
    }

    #[test]
    fn class_dpi_golden_rows() {
        let cal = ModelSet::calibrated();
        let p = class_dpi(&MetricVector::new("c1", 1, 10, 7), &cal);
        assert!(close(p.c_dpr, 6.14, 0.02));
        let p = class_dpi(&MetricVector::new("c7", 5, 78, 60), &cal);
        assert!(close(p.c_dpr, 43.83, 0.05));
        assert!(p.clamped.is_empty());
    }

    #[test]
    fn class_dpi_published_row() {
        // 0.25*10.68 + 0.37*1.13 + 0.38*7.3107 = 5.866166
        let p = class_dpi(&MetricVector::new("c1", 1, 10, 7), &ModelSet::published());
        assert!(close(p.c_dpr, 5.866166, 1e-9), "{}", p.c_dpr);
    }

    #[test]
    fn class_dpi_reports_clamps() {
        let p = class_dpi(
            &MetricVector::new("big", 9, 300, 150),
            &ModelSet::calibrated(),
        );
        assert_eq!(p.clamped, [Metric::Dit, Metric::Rfc, Metric::Wmc]);
    }

    #[test]
    fn project_single_class_equals_class() {
        let m = ModelSet::calibrated();
        let v = MetricVector::new("only", 2, 21, 1);
        let p = project_dpi(std::slice::from_ref(&v), &m, "solo").unwrap();
        assert_eq!(p.n, 1);
        assert!(close(p.p_dpr, class_dpi(&v, &m).c_dpr, 1e-12));
    }

    #[test]
    fn project_requires_classes() {
        assert_eq!(
            project_dpi(&[], &ModelSet::calibrated(), "empty").unwrap_err(),
            EstimationError::EmptyProject
        );
    }
}
