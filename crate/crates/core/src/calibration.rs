//! Coefficient recovery from golden data.
//!
//! Polynomials are fitted on a centred and scaled abscissa, `t = (x - mean) / spread`,
//! which keeps the ≤ 4×4 normal equations well conditioned; the result is expanded
//! back to the power basis in `x`. Systems are solved by Gaussian elimination with
//! partial pivoting.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::FitError;
use crate::estimation::{ModelLabel, ModelSet, Weights};
use crate::golden::GoldenDataset;
use crate::metrics::MetricVector;

/// Pivots below this fraction of the largest matrix entry count as zero.
const SINGULAR_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    ExactSolve,
    LeastSquares,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// Polynomial fits: highest power first. Weight fits: (dit, rfc, wmc).
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_abs_residual: f64,
    pub method: FitMethod,
}

impl FitReport {
    fn new(coefficients: Vec<f64>, residuals: Vec<f64>, method: FitMethod) -> Self {
        let max_abs_residual = residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        Self {
            coefficients,
            residuals,
            max_abs_residual,
            method,
        }
    }
}

/// Solves `a · x = b` in place.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, FitError> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(FitError::Singular("system matrix is zero".into()));
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() < SINGULAR_TOLERANCE * scale {
            return Err(FitError::Singular(format!(
                "no usable pivot in column {col}"
            )));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Exact solve when the design is square, normal equations otherwise.
fn solve_design(design: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, FitMethod), FitError> {
    let cols = design[0].len();
    if design.len() == cols {
        return Ok((solve(design.to_vec(), y.to_vec())?, FitMethod::ExactSolve));
    }
    let mut ata = vec![vec![0.0; cols]; cols];
    let mut aty = vec![0.0; cols];
    for (row, &yi) in design.iter().zip(y) {
        for i in 0..cols {
            aty[i] += row[i] * yi;
            for j in 0..cols {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    Ok((solve(ata, aty)?, FitMethod::LeastSquares))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().fold(0.0, |acc, c| acc * x + c)
}

/// Least-squares polynomial of the given degree through `points`; an exact
/// interpolation when there are exactly `degree + 1` points.
pub fn fit_polynomial(points: &[(f64, f64)], degree: usize) -> Result<FitReport, FitError> {
    let needed = degree + 1;
    if points.len() < needed {
        return Err(FitError::TooFewPoints {
            needed,
            got: points.len(),
        });
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mean = sorted.iter().map(|p| p.0).sum::<f64>() / sorted.len() as f64;
    let spread = sorted
        .iter()
        .fold(0.0_f64, |m, p| m.max((p.0 - mean).abs()));
    let spread = if spread > 0.0 { spread } else { 1.0 };

    let design: Vec<Vec<f64>> = sorted
        .iter()
        .map(|&(x, _)| {
            let t = (x - mean) / spread;
            (0..needed).map(|k| t.powi(k as i32)).collect()
        })
        .collect();
    let y: Vec<f64> = sorted.iter().map(|p| p.1).collect();
    let (centred, method) = solve_design(&design, &y).map_err(|e| match e {
        FitError::Singular(_) => {
            FitError::Singular("polynomial design is rank deficient (repeated x values?)".into())
        }
        other => other,
    })?;

    // Σ c_k ((x - mean)/spread)^k expanded into powers of x.
    let mut ascending = vec![0.0; needed];
    for (k, c) in centred.iter().enumerate() {
        let ck = c / spread.powi(k as i32);
        for (j, slot) in ascending.iter_mut().enumerate().take(k + 1) {
            *slot += ck * binomial(k, j) * (-mean).powi((k - j) as i32);
        }
    }
    let coefficients: Vec<f64> = ascending.into_iter().rev().collect();
    let residuals = points
        .iter()
        .map(|&(x, y)| y - horner(&coefficients, x))
        .collect();
    Ok(FitReport::new(coefficients, residuals, method))
}

/// Least-squares weights `(w_dit, w_rfc, w_wmc)` for `c_dpr ≈ w · (dp_dit, dp_rfc, dp_wmc)`,
/// without intercept.
pub fn fit_weights(rows: &[(f64, f64, f64, f64)]) -> Result<FitReport, FitError> {
    if rows.len() < 3 {
        return Err(FitError::TooFewPoints {
            needed: 3,
            got: rows.len(),
        });
    }
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| {
        [a.0, a.1, a.2, a.3]
            .iter()
            .zip([b.0, b.1, b.2, b.3].iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });

    let columns = ["dp_dit", "dp_rfc", "dp_wmc"];
    let norms: Vec<f64> = (0..3)
        .map(|j| {
            sorted
                .iter()
                .map(|r| [r.0, r.1, r.2][j].powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    if let Some(j) = norms.iter().position(|n| *n == 0.0) {
        return Err(FitError::Singular(format!(
            "column {} is identically zero",
            columns[j]
        )));
    }
    let design: Vec<Vec<f64>> = sorted
        .iter()
        .map(|r| vec![r.0 / norms[0], r.1 / norms[1], r.2 / norms[2]])
        .collect();
    let y: Vec<f64> = sorted.iter().map(|r| r.3).collect();
    let (scaled, method) = solve_design(&design, &y)
        .map_err(|_| FitError::Singular("weight design matrix is rank deficient".into()))?;
    let weights: Vec<f64> = scaled.iter().zip(&norms).map(|(u, n)| u / n).collect();
    let residuals = rows
        .iter()
        .map(|r| r.3 - (weights[0] * r.0 + weights[1] * r.1 + weights[2] * r.2))
        .collect();
    Ok(FitReport::new(weights, residuals, method))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Compared with the recovered model.
    Calibrated,
    /// Compared with the printed golden cell.
    Golden,
}

/// Largest disagreement of the published model with one reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceEntry {
    pub component: &'static str,
    pub reference: Reference,
    /// Where the largest gap occurs, e.g. `dit=6` or `V-8`.
    pub at: String,
    pub published: f64,
    pub reference_value: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub entries: Vec<DivergenceEntry>,
}

impl DivergenceReport {
    pub fn find(&self, component: &str, reference: Reference) -> Option<&DivergenceEntry> {
        self.entries
            .iter()
            .find(|e| e.component == component && e.reference == reference)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<9} {:<10} {:>8} {:>12} {:>12} {:>10}",
            "COMPONENT", "VERSUS", "AT", "PUBLISHED", "REFERENCE", "GAP"
        );
        for e in &self.entries {
            let versus = match e.reference {
                Reference::Calibrated => "calibrated",
                Reference::Golden => "golden",
            };
            let _ = writeln!(
                out,
                "{:<9} {:<10} {:>8} {:>12.4} {:>12.4} {:>10.4}",
                e.component, versus, e.at, e.published, e.reference_value, e.gap
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub model: ModelSet,
    pub dit_fit: FitReport,
    pub rfc_fit: FitReport,
    pub wmc_fit: FitReport,
    pub weight_fit: FitReport,
    pub divergence: DivergenceReport,
    pub notes: Vec<String>,
}

/// Fits every component of the model to the trusted golden cells and audits
/// the published coefficients against the result.
pub fn recover_calibrated(golden: &GoldenDataset) -> Result<Calibration, FitError> {
    let rows = &golden.class_rows;

    let mut dit_points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.dit >= 1)
        .map(|r| (f64::from(r.dit), r.dp_dit))
        .collect();
    dit_points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    dit_points.dedup();
    let rfc_points: Vec<(f64, f64)> = rows.iter().map(|r| (f64::from(r.rfc), r.dp_rfc)).collect();
    let wmc_points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.wmc_trusted())
        .map(|r| (f64::from(r.wmc), r.dp_wmc))
        .collect();
    let weight_rows: Vec<(f64, f64, f64, f64)> = rows
        .iter()
        .map(|r| (r.dp_dit, r.dp_rfc, r.dp_wmc, r.c_dpr))
        .collect();

    let dit_fit = fit_polynomial(&dit_points, 3)?;
    let rfc_fit = fit_polynomial(&rfc_points, 2)?;
    let wmc_fit = fit_polynomial(&wmc_points, 2)?;
    let weight_fit = fit_weights(&weight_rows)?;

    let model = ModelSet::with_domains(
        ModelLabel::Calibrated,
        dit_fit.coefficients.clone(),
        rfc_fit.coefficients.clone(),
        wmc_fit.coefficients.clone(),
        Weights {
            dit: weight_fit.coefficients[0],
            rfc: weight_fit.coefficients[1],
            wmc: weight_fit.coefficients[2],
        },
    );

    let mut notes = Vec::new();
    let excluded = rows.len() - wmc_points.len();
    if excluded > 0 {
        notes.push(format!(
            "excluded {excluded} corrupted DP_WMC cell(s) from the WMC fit"
        ));
    }

    let divergence = divergence(golden, &ModelSet::published(), &model);
    Ok(Calibration {
        model,
        dit_fit,
        rfc_fit,
        wmc_fit,
        weight_fit,
        divergence,
        notes,
    })
}

fn max_gap<I>(component: &'static str, reference: Reference, samples: I) -> Option<DivergenceEntry>
where
    I: IntoIterator<Item = (String, f64, f64)>,
{
    samples
        .into_iter()
        .map(|(at, published, reference_value)| DivergenceEntry {
            component,
            reference,
            at,
            published,
            reference_value,
            gap: (published - reference_value).abs(),
        })
        .fold(None, |best: Option<DivergenceEntry>, e| match best {
            Some(b) if b.gap >= e.gap => Some(b),
            _ => Some(e),
        })
}

/// Published model versus the calibrated model and versus the printed cells.
pub fn divergence(
    golden: &GoldenDataset,
    published: &ModelSet,
    calibrated: &ModelSet,
) -> DivergenceReport {
    use crate::estimation::{class_dpi, dp_dit, dp_rfc, dp_wmc};

    let rows = &golden.class_rows;
    let grid = |f: fn(&crate::golden::GoldenRow) -> u32, trusted_only: bool| {
        let mut xs: Vec<u32> = rows
            .iter()
            .filter(|r| !trusted_only || r.wmc_trusted())
            .map(f)
            .collect();
        xs.sort_unstable();
        xs.dedup();
        xs
    };
    let dit_grid: Vec<u32> = grid(|r| r.dit, false)
        .into_iter()
        .filter(|d| *d >= 1)
        .collect();
    let rfc_grid = grid(|r| r.rfc, false);
    let wmc_grid = grid(|r| r.wmc, true);

    let mut entries = Vec::new();
    let mut push = |e: Option<DivergenceEntry>| entries.extend(e);

    push(max_gap(
        "DP_DIT",
        Reference::Calibrated,
        dit_grid.iter().map(|&d| {
            (
                format!("dit={d}"),
                dp_dit(d, published).value,
                dp_dit(d, calibrated).value,
            )
        }),
    ));
    push(max_gap(
        "DP_DIT",
        Reference::Golden,
        rows.iter().filter(|r| r.dit >= 1).map(|r| {
            (
                format!("dit={}", r.dit),
                dp_dit(r.dit, published).value,
                r.dp_dit,
            )
        }),
    ));
    push(max_gap(
        "DP_RFC",
        Reference::Calibrated,
        rfc_grid.iter().map(|&x| {
            (
                format!("rfc={x}"),
                dp_rfc(x, published).value,
                dp_rfc(x, calibrated).value,
            )
        }),
    ));
    push(max_gap(
        "DP_RFC",
        Reference::Golden,
        rows.iter().map(|r| {
            (
                format!("rfc={}", r.rfc),
                dp_rfc(r.rfc, published).value,
                r.dp_rfc,
            )
        }),
    ));
    push(max_gap(
        "DP_WMC",
        Reference::Calibrated,
        wmc_grid.iter().map(|&x| {
            (
                format!("wmc={x}"),
                dp_wmc(x, published).value,
                dp_wmc(x, calibrated).value,
            )
        }),
    ));
    push(max_gap(
        "DP_WMC",
        Reference::Golden,
        rows.iter().filter(|r| r.wmc_trusted()).map(|r| {
            (
                format!("wmc={}", r.wmc),
                dp_wmc(r.wmc, published).value,
                r.dp_wmc,
            )
        }),
    ));
    for (name, p, c) in [
        ("W_DIT", published.weights.dit, calibrated.weights.dit),
        ("W_RFC", published.weights.rfc, calibrated.weights.rfc),
        ("W_WMC", published.weights.wmc, calibrated.weights.wmc),
    ] {
        push(max_gap(
            name,
            Reference::Calibrated,
            [("weight".to_string(), p, c)],
        ));
    }
    let label = |r: &crate::golden::GoldenRow| format!("{}-{}", r.project, r.class_index);
    let vector = |r: &crate::golden::GoldenRow| MetricVector::new(label(r), r.dit, r.rfc, r.wmc);
    push(max_gap(
        "C_DPR",
        Reference::Calibrated,
        rows.iter().map(|r| {
            (
                label(r),
                class_dpi(&vector(r), published).c_dpr,
                class_dpi(&vector(r), calibrated).c_dpr,
            )
        }),
    ));
    push(max_gap(
        "C_DPR",
        Reference::Golden,
        rows.iter()
            .filter(|r| r.wmc_trusted())
            .map(|r| (label(r), class_dpi(&vector(r), published).c_dpr, r.c_dpr)),
    ));
    DivergenceReport { entries }
}
