use crate::error::{Result, SpiError};

const THRESHOLD: f64 = 0.5;

/// Min-max normalizes `v` to `[0, 1]` and thresholds at one half.
///
/// A constant vector carries no pattern information and maps to all zeros.
pub fn normalize_binarize(v: &[f64]) -> Result<Vec<u8>> {
    if v.is_empty() {
        return Err(SpiError::InvalidDimensions("cannot binarize an empty vector".into()));
    }
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(SpiError::NonFinite(i));
    }
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi == lo {
        return Ok(vec![0; v.len()]);
    }
    let span = hi - lo;
    Ok(v.iter()
        .map(|&x| u8::from((x - lo) / span >= THRESHOLD))
        .collect())
}
