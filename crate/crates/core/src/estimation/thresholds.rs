use std::fmt;

use serde::Serialize;

use super::Metric;
use crate::metrics::MetricVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FlagLevel {
    Warn,
    /// RFC only: at or past its second advisory level.
    SecondaryWarn,
    MaxExceeded,
}

impl fmt::Display for FlagLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlagLevel::Warn => "WARN",
            FlagLevel::SecondaryWarn => "SECONDARY_WARN",
            FlagLevel::MaxExceeded => "MAX_EXCEEDED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub metric: Metric,
    pub level: FlagLevel,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.metric, self.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub warn: u32,
    pub maximum: u32,
    pub secondary: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    pub dit: Threshold,
    pub rfc: Threshold,
    pub wmc: Threshold,
}

impl Default for ThresholdSet {
    /// NASA-Rosenberg values.
    fn default() -> Self {
        Self {
            dit: Threshold {
                warn: 3,
                maximum: 6,
                secondary: None,
            },
            rfc: Threshold {
                warn: 50,
                maximum: 222,
                secondary: Some(100),
            },
            wmc: Threshold {
                warn: 20,
                maximum: 100,
                secondary: None,
            },
        }
    }
}

impl Threshold {
    fn level(&self, value: u32) -> Option<FlagLevel> {
        if value > self.maximum {
            Some(FlagLevel::MaxExceeded)
        } else if self.secondary.is_some_and(|s| value >= s) {
            Some(FlagLevel::SecondaryWarn)
        } else if value >= self.warn {
            Some(FlagLevel::Warn)
        } else {
            None
        }
    }
}

/// At most one flag per metric: the most severe level reached, in DIT, RFC, WMC order.
pub fn threshold_flags(v: &MetricVector, t: &ThresholdSet) -> Vec<Flag> {
    [
        (Metric::Dit, &t.dit, v.dit),
        (Metric::Rfc, &t.rfc, v.rfc),
        (Metric::Wmc, &t.wmc, v.wmc),
    ]
    .into_iter()
    .filter_map(|(metric, th, value)| th.level(value).map(|level| Flag { metric, level }))
    .collect()
}
