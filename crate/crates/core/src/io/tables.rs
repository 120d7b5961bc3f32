//! Comma-separated numeric files: ciphertext sets, histogram dumps and
//! generic matrices.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::coa::IntensityHistogram;
use crate::error::{Result, SpiError};
use crate::system::Ciphertext;

/// Nine significant digits, the precision of the ciphertext CSV format.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{v:.8e}")
}

pub fn encode_ciphertexts(set: &[Ciphertext]) -> String {
    let mut out = String::new();
    for c in set {
        let row: Vec<String> = c.values().iter().map(|&v| format_sig9(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn decode_ciphertexts(text: &str, ctx: &str) -> Result<Vec<Ciphertext>> {
    let rows = decode_rows(text, ctx)?;
    Ok(rows.into_iter().map(Ciphertext::new).collect())
}

/// Parses a rectangular grid of decimal numbers; empty input gives no rows.
pub fn decode_rows(text: &str, ctx: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(col, field)| {
                field.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    SpiError::format(ctx, format!("line {line_no}, field {}", col + 1), format!("not a finite number: {field:?}"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(SpiError::format(
                    ctx,
                    format!("line {line_no}"),
                    format!("row has {} values, first row has {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_ciphertext_csv(set: &[Ciphertext], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_ciphertexts(set)).map_err(|e| SpiError::io(path, e))
}

pub fn read_ciphertext_csv(path: impl AsRef<Path>) -> Result<Vec<Ciphertext>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SpiError::io(path, e))?;
    decode_ciphertexts(&text, &path.display().to_string())
}

/// `bin_low,bin_high,count` rows with a header line.
pub fn encode_histogram(h: &IntensityHistogram) -> String {
    let mut out = String::from("bin_low,bin_high,count\n");
    for (i, &count) in h.counts().iter().enumerate() {
        let (lo, hi) = h.config().bin_edges(i);
        let _ = writeln!(out, "{lo},{hi},{count}");
    }
    out
}

pub fn write_histogram_csv(h: &IntensityHistogram, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_histogram(h)).map_err(|e| SpiError::io(path, e))
}

pub fn encode_matrix(m: &Array2<f64>) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let fields: Vec<String> = row.iter().map(|&v| format_sig9(v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(m: &Array2<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_matrix(m)).map_err(|e| SpiError::io(path, e))
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<Array2<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SpiError::io(path, e))?;
    let rows = decode_rows(&text, &path.display().to_string())?;
    let cols = rows.first().map_or(0, Vec::len);
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Array2::from_shape_vec((rows.len(), cols), flat).map_err(|e| SpiError::InvalidDimensions(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coa::{build_histogram, HistogramConfig};
    use proptest::prelude::*;

    #[test]
    fn empty_file_is_empty_set() {
        assert!(decode_ciphertexts("", "c").unwrap().is_empty());
    }

    #[test]
    fn ragged_rows_rejected() {
        let e = decode_ciphertexts("1,2,3\n4,5\n", "c").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = decode_ciphertexts("1,x\n", "c").unwrap_err().to_string();
        assert!(e.contains("line 1, field 2"), "{e}");
        assert!(decode_ciphertexts("1,inf\n", "c").is_err());
    }

    #[test]
    fn deterministic_encoding() {
        let set = vec![Ciphertext::new(vec![0.0, 1.5, 123.456789012345]), Ciphertext::new(vec![1e-3, 2.0, 3.0])];
        assert_eq!(encode_ciphertexts(&set), encode_ciphertexts(&set));
        assert_eq!(encode_ciphertexts(&set).lines().next().unwrap(), "0,1.50000000e0,1.23456789e2");
    }

    #[test]
    fn histogram_dump() {
        let cfg = HistogramConfig::new(0.0, 20.0, 5.0).unwrap();
        let h = build_histogram(&[1.0, 6.0, 7.0, 19.0], &cfg).unwrap();
        assert_eq!(encode_histogram(&h), "bin_low,bin_high,count\n0,5,1\n5,10,2\n10,15,0\n15,20,1\n");
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let set = vec![Ciphertext::new(vec![3.25, 7.0])];
        let p = dir.path().join("c.csv");
        write_ciphertext_csv(&set, &p).unwrap();
        assert_eq!(read_ciphertext_csv(&p).unwrap(), set);
        let m = Array2::from_shape_vec((2, 2), vec![1.0, 2.0, 3.0, 4.5]).unwrap();
        let mp = dir.path().join("m.csv");
        write_matrix_csv(&m, &mp).unwrap();
        assert_eq!(read_matrix_csv(&mp).unwrap(), m);
    }

    proptest! {
        #[test]
        fn round_trip_within_nine_digits(values in prop::collection::vec(-1e6f64..1e6, 1..20)) {
            let set = vec![Ciphertext::new(values.clone())];
            let back = decode_ciphertexts(&encode_ciphertexts(&set), "p").unwrap();
            for (a, b) in values.iter().zip(back[0].values()) {
                prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(1e-300));
            }
        }
    }
}
