//! Unnormalized Beta log-density used to score normalized properties.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaShape {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaShape {
    pub fn new(alpha: f64, beta: f64) -> Option<BetaShape> {
        (alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()).then_some(BetaShape { alpha, beta })
    }

    /// Interior mode, defined when both shapes exceed 1.
    pub fn mode(&self) -> Option<f64> {
        (self.alpha > 1.0 && self.beta > 1.0).then(|| (self.alpha - 1.0) / (self.alpha + self.beta - 2.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("beta log-density undefined at x = {x} for alpha = {alpha}, beta = {beta}")]
pub struct DomainError {
    pub x: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// `(alpha - 1) ln x + (beta - 1) ln(1 - x)`. At the endpoints a term with a
/// zero exponent vanishes and one with a negative exponent diverges to +inf.
pub fn beta_log_prob(x: f64, shape: BetaShape) -> Result<f64, DomainError> {
    let err = DomainError { x, alpha: shape.alpha, beta: shape.beta };
    if !(0.0..=1.0).contains(&x) {
        return Err(err);
    }
    let term = |exponent: f64, base: f64| -> Result<f64, DomainError> {
        if base > 0.0 {
            Ok(exponent * base.ln())
        } else if exponent == 0.0 {
            Ok(0.0)
        } else if exponent < 0.0 {
            Ok(f64::INFINITY)
        } else {
            Err(err)
        }
    };
    Ok(term(shape.alpha - 1.0, x)? + term(shape.beta - 1.0, 1.0 - x)?)
}
