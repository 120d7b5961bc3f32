//! Least-squares machinery shared by decryption and the known-plaintext attack.

mod binarize;
mod cgls;
mod tv;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpiError};

pub use binarize::normalize_binarize;
pub use cgls::{cgd_solve, cgd_solve_many, cgd_solve_traced, MultiSolveOutcome, SolveOutcome};
pub use tv::{tv_reconstruct, tv_reconstruct_traced, TvObjective, TvOutcome, TV_SMOOTHING};

/// A dense system `A x ≈ b` with one row per measurement.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    a: Array2<f64>,
    b: Array1<f64>,
}

impl LinearSystem {
    pub fn new(a: Array2<f64>, b: Array1<f64>) -> Result<Self> {
        let (rows, cols) = a.dim();
        if rows == 0 || cols == 0 {
            return Err(SpiError::InvalidDimensions(format!(
                "system matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if b.len() != rows {
            return Err(SpiError::DimensionMismatch {
                what: "right-hand side length",
                expected: rows,
                got: b.len(),
            });
        }
        if let Some(i) = a.iter().chain(b.iter()).position(|v| !v.is_finite()) {
            return Err(SpiError::NonFinite(i));
        }
        Ok(Self { a, b })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn rhs(&self) -> &Array1<f64> {
        &self.b
    }
}

/// Iteration controls. `tv_weight = 0` selects the plain least-squares path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub residual_tolerance: f64,
    pub tv_weight: f64,
}

impl SolverConfig {
    pub const DEFAULT_MAX_ITERATIONS: usize = 2000;
    pub const DEFAULT_TOLERANCE: f64 = 1e-8;
    pub const DEFAULT_TV_WEIGHT: f64 = 1e-2;

    /// Pattern recovery settings: pure least squares.
    pub fn kpa() -> Self {
        Self {
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            residual_tolerance: Self::DEFAULT_TOLERANCE,
            tv_weight: 0.0,
        }
    }

    /// Image decryption settings: TV-regularized.
    pub fn decrypt() -> Self {
        Self {
            tv_weight: Self::DEFAULT_TV_WEIGHT,
            ..Self::kpa()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(SpiError::InvalidConfig("max_iterations must be >= 1".into()));
        }
        if !(self.residual_tolerance > 0.0 && self.residual_tolerance.is_finite()) {
            return Err(SpiError::InvalidConfig(format!(
                "residual_tolerance must be positive, got {}",
                self.residual_tolerance
            )));
        }
        if !(self.tv_weight >= 0.0 && self.tv_weight.is_finite()) {
            return Err(SpiError::InvalidConfig(format!(
                "tv_weight must be >= 0, got {}",
                self.tv_weight
            )));
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::kpa()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn system_validation() {
        assert!(LinearSystem::new(Array2::zeros((0, 2)), Array1::zeros(0)).is_err());
        assert!(LinearSystem::new(Array2::zeros((2, 2)), Array1::zeros(3)).is_err());
        assert!(matches!(
            LinearSystem::new(array![[1.0, f64::NAN]], array![1.0]),
            Err(SpiError::NonFinite(1))
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::kpa().validate().is_ok());
        assert!(SolverConfig::decrypt().validate().is_ok());
        let bad = [
            SolverConfig { max_iterations: 0, ..SolverConfig::kpa() },
            SolverConfig { residual_tolerance: 0.0, ..SolverConfig::kpa() },
            SolverConfig { tv_weight: -1.0, ..SolverConfig::kpa() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn config_json_fills_defaults() {
        let cfg: SolverConfig = serde_json::from_str(r#"{"tv_weight": 0.5}"#).unwrap();
        assert_eq!(cfg.max_iterations, 2000);
        assert_eq!(cfg.residual_tolerance, 1e-8);
        assert_eq!(cfg.tv_weight, 0.5);
    }
}
