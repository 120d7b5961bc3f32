//! Attack quality measures and the per-run report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpiError};
use crate::system::{ObjectImage, PatternKey, PermutationKey};

/// PSNR reported for a bit-exact reconstruction.
pub const PSNR_CAP_DB: f64 = 99.0;

/// Fraction of key entries on which the two keys agree.
pub fn cracking_correct_rate(true_key: &PatternKey, recovered: &PatternKey) -> Result<f64> {
    if true_key.entries().dim() != recovered.entries().dim() {
        return Err(SpiError::DimensionMismatch {
            what: "key entries",
            expected: true_key.entries().len(),
            got: recovered.entries().len(),
        });
    }
    let agree = true_key
        .entries()
        .iter()
        .zip(recovered.entries().iter())
        .filter(|(a, b)| a == b)
        .count();
    Ok(agree as f64 / true_key.entries().len() as f64)
}

/// Fraction of positions holding the same original pattern index.
pub fn permutation_correct_rate(true_perm: &PermutationKey, recovered: &PermutationKey) -> Result<f64> {
    if true_perm.len() != recovered.len() {
        return Err(SpiError::DimensionMismatch {
            what: "permutation length",
            expected: true_perm.len(),
            got: recovered.len(),
        });
    }
    let hits = true_perm
        .order()
        .iter()
        .zip(recovered.order())
        .filter(|(a, b)| a == b)
        .count();
    Ok(hits as f64 / true_perm.len() as f64)
}

/// Peak signal-to-noise ratio in dB with peak 1.
pub fn psnr(reference: &ObjectImage, candidate: &ObjectImage) -> Result<f64> {
    if (reference.width(), reference.height()) != (candidate.width(), candidate.height()) {
        return Err(SpiError::DimensionMismatch {
            what: "image pixels",
            expected: reference.len(),
            got: candidate.len(),
        });
    }
    let mse = reference
        .pixels()
        .iter()
        .zip(candidate.pixels())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / reference.len() as f64;
    if mse == 0.0 {
        return Ok(PSNR_CAP_DB);
    }
    Ok((10.0 * (1.0 / mse).log10()).min(PSNR_CAP_DB))
}

/// Outcome of one attack run, as written to JSON and CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub attack: String,
    pub regime: String,
    pub n: usize,
    pub m: usize,
    pub q: usize,
    /// Per-entry key agreement (Type I, or Type II patterns after matching).
    pub cracking_correct_rate: Option<f64>,
    /// Fraction of correctly placed patterns (Type II only).
    pub permutation_correct_rate: Option<f64>,
    pub psnr_by_image: Vec<f64>,
    pub run_metadata: RunMetadata,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    /// Seeds by role, e.g. `key`, `plaintexts`, `permutation`.
    pub seeds: BTreeMap<String, String>,
    pub config: serde_json::Value,
    pub elapsed_seconds: f64,
}

impl AttackReport {
    pub fn mean_psnr(&self) -> Option<f64> {
        (!self.psnr_by_image.is_empty())
            .then(|| self.psnr_by_image.iter().sum::<f64>() / self.psnr_by_image.len() as f64)
    }

    pub fn validate(&self) -> Result<()> {
        for rate in [self.cracking_correct_rate, self.permutation_correct_rate].into_iter().flatten() {
            if !(0.0..=1.0).contains(&rate) {
                return Err(SpiError::InvalidConfig(format!("rate {rate} outside [0, 1]")));
            }
        }
        if let Some(db) = self.psnr_by_image.iter().find(|&&db| !(db > 0.0 && db <= PSNR_CAP_DB)) {
            return Err(SpiError::InvalidConfig(format!("PSNR {db} outside (0, {PSNR_CAP_DB}]")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "attack,regime,n,m,q,cracking_correct_rate,permutation_correct_rate,mean_psnr_db,seeds,elapsed_seconds"
    }

    /// One flat CSV line matching [`AttackReport::csv_header`].
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
        let seeds: Vec<String> = self
            .run_metadata
            .seeds
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{:.3}",
            self.attack,
            self.regime,
            self.n,
            self.m,
            self.q,
            opt(self.cracking_correct_rate),
            opt(self.permutation_correct_rate),
            opt(self.mean_psnr()),
            seeds.join(";"),
            self.run_metadata.elapsed_seconds
        )
    }
}
