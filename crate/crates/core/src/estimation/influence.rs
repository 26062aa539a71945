use super::poly::Evaluation;
use super::Metric;

/// Empirical (metric value, % influence) knots per metric.
pub const DIT_KNOTS: &[(f64, f64)] = &[
    (1.0, 9.0),
    (2.0, 21.0),
    (3.0, 36.0),
    (4.0, 56.0),
    (5.0, 74.0),
    (6.0, 98.0),
];

/// Not monotone: rises to 91 at RFC 80, then falls to 7 at RFC 222.
pub const RFC_KNOTS: &[(f64, f64)] = &[
    (1.0, 3.0),
    (23.0, 31.0),
    (45.0, 56.0),
    (60.0, 80.0),
    (80.0, 91.0),
    (100.0, 78.0),
    (120.0, 62.0),
    (149.0, 51.0),
    (170.0, 40.0),
    (198.0, 26.0),
    (222.0, 7.0),
];

pub const WMC_KNOTS: &[(f64, f64)] = &[
    (1.0, 5.0),
    (5.0, 25.0),
    (10.0, 42.0),
    (12.0, 63.0),
    (16.0, 80.0),
    (20.0, 92.0),
    (30.0, 75.0),
    (50.0, 54.0),
    (60.0, 40.0),
    (70.0, 10.0),
    (96.0, 2.0),
];

pub const RFC_NON_MONOTONIC_NOTE: &str = "RFC influence bands are non-monotonic (peak 91% at RFC 80, \
falling to 7% at RFC 222); they are reported verbatim as a diagnostic and are not used by the DPI model";

pub fn knots(metric: Metric) -> &'static [(f64, f64)] {
    match metric {
        Metric::Dit => DIT_KNOTS,
        Metric::Rfc => RFC_KNOTS,
        Metric::Wmc => WMC_KNOTS,
    }
}

/// Piecewise-linear influence percent. Values outside the knot range take the
/// nearest end knot's influence and are flagged as clamped.
pub fn influence(metric: Metric, value: f64) -> Evaluation {
    let table = knots(metric);
    let (first, last) = (table[0], table[table.len() - 1]);
    if value < first.0 {
        return Evaluation {
            value: first.1,
            clamped: true,
        };
    }
    if value > last.0 {
        return Evaluation {
            value: last.1,
            clamped: true,
        };
    }
    let value = table
        .windows(2)
        .find(|w| value <= w[1].0)
        .map(|w| {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if value == x1 {
                y1
            } else {
                y0 + (y1 - y0) * (value - x0) / (x1 - x0)
            }
        })
        .unwrap_or(first.1);
    Evaluation {
        value,
        clamped: false,
    }
}
