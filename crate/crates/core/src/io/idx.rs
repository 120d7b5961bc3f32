//! The IDX container used by the MNIST distribution.
//!
//! Layout: two zero bytes, an element-type code, the rank, then one
//! big-endian `u32` per dimension followed by the raw elements.

use std::fs;
use std::path::Path;

use crate::error::{Result, SpiError};
use crate::system::ObjectImage;

pub const IDX_UBYTE: u8 = 0x08;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxContainer {
    pub element_type: u8,
    pub dims: Vec<usize>,
    pub payload: Vec<u8>,
}

fn element_width(code: u8) -> Option<usize> {
    match code {
        0x08 | 0x09 => Some(1),
        0x0B => Some(2),
        0x0C | 0x0D => Some(4),
        0x0E => Some(8),
        _ => None,
    }
}

impl IdxContainer {
    pub fn parse(bytes: &[u8], source: &str) -> Result<Self> {
        let err = |offset: usize, msg: String| SpiError::format(source, format!("byte {offset}"), msg);
        if bytes.len() < 4 {
            return Err(err(bytes.len(), "truncated magic".into()));
        }
        if bytes[0] != 0 || bytes[1] != 0 {
            return Err(err(0, format!("bad magic {:02x}{:02x}", bytes[0], bytes[1])));
        }
        let element_type = bytes[2];
        let width = element_width(element_type)
            .ok_or_else(|| err(2, format!("unknown element type 0x{element_type:02x}")))?;
        let rank = bytes[3] as usize;
        let header = 4 + 4 * rank;
        if bytes.len() < header {
            return Err(err(bytes.len(), format!("truncated header for rank {rank}")));
        }
        let dims: Vec<usize> = bytes[4..header]
            .chunks_exact(4)
            .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
            .collect();
        let need = dims
            .iter()
            .try_fold(width, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| err(4, "dimension product overflows".into()))?;
        let have = bytes.len() - header;
        if have < need {
            return Err(err(bytes.len(), format!("truncated payload: {have} of {need} bytes")));
        }
        if have > need {
            return Err(err(header + need, format!("{} trailing bytes", have - need)));
        }
        Ok(Self {
            element_type,
            dims,
            payload: bytes[header..].to_vec(),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0, 0, self.element_type, self.dims.len() as u8];
        for &d in &self.dims {
            out.extend((d as u32).to_be_bytes());
        }
        out.extend(&self.payload);
        out
    }

    /// Interprets a rank-3 unsigned-byte container as images scaled by 1/255.
    pub fn into_images(self, source: &str) -> Result<Vec<ObjectImage>> {
        if self.element_type != IDX_UBYTE {
            return Err(SpiError::format(
                source,
                "byte 2",
                format!("expected unsigned-byte images, got type 0x{:02x}", self.element_type),
            ));
        }
        if self.dims.len() != 3 {
            return Err(SpiError::format(
                source,
                "byte 3",
                format!("expected an image stack of rank 3, got rank {}", self.dims.len()),
            ));
        }
        let (rows, cols) = (self.dims[1], self.dims[2]);
        if rows == 0 || cols == 0 {
            return Err(SpiError::format(source, "byte 8", "zero image dimension"));
        }
        self.payload
            .chunks_exact(rows * cols)
            .map(|raw| ObjectImage::new(cols, rows, raw.iter().map(|&b| f64::from(b) / 255.0).collect()))
            .collect()
    }
}

pub fn parse_idx(path: impl AsRef<Path>) -> Result<Vec<ObjectImage>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| SpiError::io(path, e))?;
    let source = path.display().to_string();
    IdxContainer::parse(&bytes, &source)?.into_images(&source)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> Vec<u8> {
        let mut b = vec![0x00, 0x00, 0x08, 0x03];
        b.extend([0, 0, 0, 2]); // count
        b.extend([0, 0, 0, 2]); // rows
        b.extend([0, 0, 0, 2]); // cols
        b.extend([0, 255, 51, 102]);
        b.extend([204, 0, 0, 153]);
        b
    }

    #[test]
    fn hand_built_fixture() {
        let imgs = IdxContainer::parse(&fixture(), "f").unwrap().into_images("f").unwrap();
        assert_eq!(imgs.len(), 2);
        assert_eq!(imgs[0].pixels(), &[0.0, 1.0, 0.2, 0.4]);
        assert_eq!(imgs[1].pixels(), &[0.8, 0.0, 0.0, 0.6]);
        assert_eq!((imgs[1].width(), imgs[1].height()), (2, 2));
    }

    #[test]
    fn byte_round_trip() {
        let c = IdxContainer::parse(&fixture(), "f").unwrap();
        assert_eq!(c.to_bytes(), fixture());
    }

    #[test]
    fn label_file_is_rejected() {
        let mut labels = vec![0x00, 0x00, 0x08, 0x01, 0, 0, 0, 3];
        labels.extend([7, 2, 1]);
        let c = IdxContainer::parse(&labels, "l").unwrap();
        let e = c.into_images("l").unwrap_err().to_string();
        assert!(e.contains("rank 3"), "{e}");
    }

    #[test]
    fn malformed_inputs() {
        let mut bad_magic = fixture();
        bad_magic[0] = 1;
        assert!(IdxContainer::parse(&bad_magic, "f").is_err());

        let mut truncated = fixture();
        truncated.pop();
        let e = IdxContainer::parse(&truncated, "f").unwrap_err().to_string();
        assert!(e.contains("truncated payload"), "{e}");

        let mut trailing = fixture();
        trailing.push(0);
        assert!(IdxContainer::parse(&trailing, "f").is_err());

        assert!(IdxContainer::parse(&[0, 0, 0x08], "f").is_err());
        assert!(IdxContainer::parse(&[0, 0, 0x07, 1, 0, 0, 0, 0], "f").is_err());
        assert!(IdxContainer::parse(&[0, 0, 0x08, 3, 0, 0], "f").is_err());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(parse_idx("/nonexistent/idx"), Err(SpiError::Io { .. })));
    }
}
