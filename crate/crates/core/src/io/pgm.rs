//! Binary `P5` graymaps with maxval 255.

use std::fs;
use std::path::Path;

use crate::error::{Result, SpiError};
use crate::system::ObjectImage;

pub fn read_pgm(path: impl AsRef<Path>) -> Result<ObjectImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| SpiError::io(path, e))?;
    decode_pgm(&bytes, &path.display().to_string())
}

pub fn write_pgm(image: &ObjectImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(image)).map_err(|e| SpiError::io(path, e))
}

/// Quantizes `[0, 1]` to a byte, rounding halves up.
pub fn quantize(p: f64) -> u8 {
    (p * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8
}

pub fn encode_pgm(image: &ObjectImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(image.pixels().iter().map(|&p| quantize(p)));
    out
}

/// Parses a `P5` file; `source` names the input in diagnostics.
pub fn decode_pgm(bytes: &[u8], source: &str) -> Result<ObjectImage> {
    let err = |offset: usize, msg: &str| SpiError::format(source, format!("byte {offset}"), msg);
    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        // whitespace and comments between header fields
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            pos += 1;
        }
        if start == pos {
            return Err(err(pos, "truncated header"));
        }
        fields.push((start, &bytes[start..pos]));
    }
    if fields[0].1 != b"P5" {
        return Err(err(0, "expected magic P5"));
    }
    let number = |(offset, raw): (usize, &[u8])| -> Result<usize> {
        std::str::from_utf8(raw)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err(offset, "expected a decimal number"))
    };
    let width = number(fields[1])?;
    let height = number(fields[2])?;
    let maxval = number(fields[3])?;
    if width == 0 || height == 0 {
        return Err(err(fields[1].0, "zero image dimension"));
    }
    if maxval != 255 {
        return Err(err(fields[3].0, &format!("unsupported maxval {maxval}, need 255")));
    }
    // exactly one whitespace byte separates the header from the raster
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(err(pos, "missing separator before raster"));
    }
    pos += 1;
    let need = width * height;
    let raster = &bytes[pos..];
    if raster.len() < need {
        return Err(err(
            bytes.len(),
            &format!("truncated raster: {} of {need} bytes", raster.len()),
        ));
    }
    let pixels = raster[..need].iter().map(|&b| f64::from(b) / 255.0).collect();
    ObjectImage::new(width, height, pixels)
}
