use ndarray::Array2;

use crate::error::{Result, SpiError};
use crate::system::ObjectImage;

/// Bilinear resampling on pixel centers: output pixel `i` samples source
/// position `(i + 0.5)·src/out − 0.5`, clamped to the image.
///
/// When shrinking, the triangle kernel widens to the sample spacing, so every
/// source pixel contributes and the mean intensity is kept. When enlarging it
/// is ordinary two-tap linear interpolation.
pub fn resize_image(image: &ObjectImage, new_width: usize, new_height: usize) -> Result<ObjectImage> {
    if new_width == 0 || new_height == 0 {
        return Err(SpiError::InvalidDimensions(format!(
            "target size must be positive, got {new_width}x{new_height}"
        )));
    }
    let (w, h) = (image.width(), image.height());
    if (w, h) == (new_width, new_height) {
        return Ok(image.clone());
    }
    let src = Array2::from_shape_vec((h, w), image.pixels().to_vec()).expect("image shape");
    let out = axis_weights(new_height, h).dot(&src).dot(&axis_weights(new_width, w).t());
    ObjectImage::from_clamped(new_width, new_height, out.into_iter().collect())
}

/// Row `i` holds the normalized kernel weights of output sample `i`.
fn axis_weights(out: usize, src: usize) -> Array2<f64> {
    let mut weights = Array2::zeros((out, src));
    let scale = src as f64 / out as f64;
    let support = scale.max(1.0);
    let last = (src - 1) as f64;
    for (i, mut row) in weights.rows_mut().into_iter().enumerate() {
        let center = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, last);
        for (j, wgt) in row.iter_mut().enumerate() {
            *wgt = (1.0 - (j as f64 - center).abs() / support).max(0.0);
        }
        let total = row.sum();
        row /= total;
    }
    weights
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_resize() {
        let img = ObjectImage::new(3, 2, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        assert_eq!(resize_image(&img, 3, 2).unwrap(), img);
    }

    #[test]
    fn constant_stays_constant() {
        let img = ObjectImage::filled(7, 5, 0.42).unwrap();
        for (w, h) in [(1, 1), (3, 9), (16, 16)] {
            let out = resize_image(&img, w, h).unwrap();
            assert!(out.pixels().iter().all(|&p| (p - 0.42).abs() < 1e-12));
        }
    }

    #[test]
    fn corners_are_preserved_when_enlarging() {
        let img = ObjectImage::new(2, 2, vec![0.0, 1.0, 0.5, 0.25]).unwrap();
        let out = resize_image(&img, 6, 4).unwrap();
        assert_eq!(out.get(0, 0), 0.0);
        assert_eq!(out.get(5, 0), 1.0);
        assert_eq!(out.get(0, 3), 0.5);
        assert_eq!(out.get(5, 3), 0.25);
        // symmetric about the middle of the top edge
        assert!((out.get(2, 0) + out.get(3, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_ramp_is_reproduced_inside() {
        let img = ObjectImage::new(5, 1, vec![0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        let out = resize_image(&img, 10, 1).unwrap();
        // away from the clamped borders, sample i sits at (i + 0.5) / 2 - 0.5
        for i in 1..9 {
            let expected = ((i as f64 + 0.5) / 2.0 - 0.5) * 0.25;
            assert!((out.pixels()[i] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn shrinking_keeps_the_mean() {
        let pixels: Vec<f64> = (0..28 * 28)
            .map(|i| {
                let (x, y) = ((i % 28) as f64 - 13.5, (i / 28) as f64 - 13.5);
                (1.0 - (x * x + y * y).sqrt() / 10.0).clamp(0.0, 1.0)
            })
            .collect();
        let img = ObjectImage::new(28, 28, pixels).unwrap();
        let small = resize_image(&img, 8, 8).unwrap();
        assert!((small.mean() - img.mean()).abs() < 0.02, "{} vs {}", small.mean(), img.mean());
    }

    #[test]
    fn zero_target_rejected() {
        let img = ObjectImage::filled(2, 2, 0.0).unwrap();
        assert!(resize_image(&img, 0, 2).is_err());
        assert!(resize_image(&img, 2, 0).is_err());
    }
}
