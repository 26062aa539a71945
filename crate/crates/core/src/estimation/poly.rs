use serde::{Deserialize, Serialize};

/// A polynomial valid on `[domain_lo, domain_hi]`; inputs outside are clamped
/// to the nearest bound and flagged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialModel {
    /// Highest power first.
    pub coefficients: Vec<f64>,
    pub domain_lo: f64,
    pub domain_hi: f64,
}

/// Result of evaluating a polynomial or table at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    /// The input fell outside the domain and was clamped.
    pub clamped: bool,
}

impl PolynomialModel {
    pub fn new(coefficients: Vec<f64>, domain_lo: f64, domain_hi: f64) -> Self {
        Self {
            coefficients,
            domain_lo,
            domain_hi,
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn check(&self) -> Result<(), String> {
        if self.coefficients.is_empty() {
            return Err("polynomial has no coefficients".into());
        }
        if self.coefficients.iter().any(|c| !c.is_finite()) {
            return Err("polynomial coefficients must be finite".into());
        }
        if self.domain_lo.partial_cmp(&self.domain_hi) != Some(std::cmp::Ordering::Less) {
            return Err(format!(
                "empty domain [{}, {}]",
                self.domain_lo, self.domain_hi
            ));
        }
        Ok(())
    }

    /// Horner evaluation with no domain handling.
    pub fn value_at(&self, x: f64) -> f64 {
        self.coefficients.iter().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: f64) -> Evaluation {
        let clamped_x = x.clamp(self.domain_lo, self.domain_hi);
        Evaluation {
            value: self.value_at(clamped_x),
            clamped: clamped_x != x,
        }
    }
}
