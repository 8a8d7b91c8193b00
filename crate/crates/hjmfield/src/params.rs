//! Model parameter point.

use serde::{Deserialize, Serialize};

use crate::error::{HjmError, Result};

/// Parameter point `(beta, rho, b_0..b_J)` of the forward-rate model.
///
/// `beta` is the volatility, `rho` the autoregression coefficient of the
/// driving field, and `b` the market-price-of-risk vector of length `J + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub rho: f64,
    pub b: Vec<f64>,
}

impl ModelParams {
    /// Builds a validated parameter point: `beta != 0`, `|rho| < 1`,
    /// non-empty finite `b`.
    pub fn new(beta: f64, rho: f64, b: Vec<f64>) -> Result<Self> {
        let p = Self { beta, rho, b };
        p.validate()?;
        Ok(p)
    }

    /// Risk-parameter order `J` (`b` has `J + 1` entries).
    pub fn j_order(&self) -> usize {
        self.b.len() - 1
    }

    /// Checks the stable-regime constraints.
    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() || self.beta == 0.0 {
            return Err(HjmError::InvalidParameter {
                name: "beta",
                reason: format!("must be finite and non-zero, got {}", self.beta),
            });
        }
        if !self.rho.is_finite() || self.rho.abs() >= 1.0 {
            return Err(HjmError::InvalidParameter {
                name: "rho",
                reason: format!("must lie in (-1, 1), got {}", self.rho),
            });
        }
        if self.b.is_empty() {
            return Err(HjmError::InvalidParameter {
                name: "b",
                reason: "must have at least one entry (J >= 0)".to_string(),
            });
        }
        if let Some(bad) = self.b.iter().find(|v| !v.is_finite()) {
            return Err(HjmError::InvalidParameter {
                name: "b",
                reason: format!("entries must be finite, got {bad}"),
            });
        }
        Ok(())
    }

    /// Flattens to the `(beta, rho, b_0..b_J)` coordinate vector used by the
    /// likelihood derivatives and the optimizer.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.b.len() + 2);
        v.push(self.beta);
        v.push(self.rho);
        v.extend_from_slice(&self.b);
        v
    }

    /// Inverse of [`ModelParams::to_vec`]; `v` must have at least 3 entries.
    pub fn from_vec(v: &[f64]) -> Result<Self> {
        if v.len() < 3 {
            return Err(HjmError::DimensionMismatch(format!(
                "parameter vector needs beta, rho and at least one b entry, got {} values",
                v.len()
            )));
        }
        Ok(Self {
            beta: v[0],
            rho: v[1],
            b: v[2..].to_vec(),
        })
    }
}
