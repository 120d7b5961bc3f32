//! Reading and writing the artifacts the attacks consume and produce.

mod idx;
mod keyfile;
mod pgm;
mod resize;
mod synth;
mod tables;

use std::fs;
use std::path::Path;

pub use idx::{parse_idx, IdxContainer, IDX_UBYTE};
pub use keyfile::{format_seed, parse_seed, KeyFile, PermutationFile};
pub use pgm::{decode_pgm, encode_pgm, quantize, read_pgm, write_pgm};
pub use resize::resize_image;
pub use synth::{generate_smooth_images, mean_neighbor_difference};
pub use tables::{
    decode_ciphertexts, decode_rows, encode_ciphertexts, encode_histogram, encode_matrix,
    read_ciphertext_csv, read_matrix_csv, write_ciphertext_csv, write_histogram_csv,
    write_matrix_csv,
};

use crate::error::{Result, SpiError};
use crate::system::ObjectImage;

/// Loads every `.pgm` file of a directory, in file-name order.
pub fn read_pgm_dir(dir: impl AsRef<Path>) -> Result<Vec<ObjectImage>> {
    let dir = dir.as_ref();
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| SpiError::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
        .collect();
    paths.sort();
    paths.iter().map(read_pgm).collect()
}

/// Separator width, in pixels, between mosaic tiles.
pub const GRID_GAP: usize = 2;

/// Tiles equally sized images into a grid with white separators.
///
/// `rows[r][c]` lands at row `r`, column `c`; short rows are padded white.
pub fn grid_mosaic(rows: &[Vec<ObjectImage>]) -> Result<ObjectImage> {
    let first = rows
        .iter()
        .flatten()
        .next()
        .ok_or_else(|| SpiError::InvalidDimensions("mosaic needs at least one tile".into()))?;
    let (tw, th) = (first.width(), first.height());
    if let Some(bad) = rows.iter().flatten().find(|t| (t.width(), t.height()) != (tw, th)) {
        return Err(SpiError::DimensionMismatch {
            what: "mosaic tile pixels",
            expected: tw * th,
            got: bad.len(),
        });
    }
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let width = cols * tw + (cols - 1) * GRID_GAP;
    let height = rows.len() * th + (rows.len() - 1) * GRID_GAP;
    let mut pixels = vec![1.0; width * height];
    for (r, row) in rows.iter().enumerate() {
        for (c, tile) in row.iter().enumerate() {
            let (ox, oy) = (c * (tw + GRID_GAP), r * (th + GRID_GAP));
            for y in 0..th {
                let dst = (oy + y) * width + ox;
                pixels[dst..dst + tw].copy_from_slice(&tile.pixels()[y * tw..(y + 1) * tw]);
            }
        }
    }
    ObjectImage::new(width, height, pixels)
}
