//! Seeded, locally smooth grayscale images that stand in for natural
//! photographs when no image corpus is at hand.
//!
//! Each image sums three layers of uniform noise: a coarse low-pass "shape"
//! layer, a weak finer "texture" layer and a faint unfiltered floor. The sum
//! is min-max normalized to `[0, 1]`. Filter widths are given for a 32-pixel
//! side and scale with the image.
//!
//! The floor keeps the pixel covariance of the ensemble from being exactly
//! band-limited, so a few thousand images determine every pixel of a pattern.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SpiError};
use crate::system::{seeded_rng, ObjectImage};

/// `(sigma at 32 px, amplitude)` for each noise layer; sigma 0 means unfiltered.
const LAYERS: [(f64, f64); 3] = [(4.0, 1.0), (1.0, 0.1), (0.0, 0.001)];

pub fn generate_smooth_images(count: usize, width: usize, height: usize, seed: u64) -> Result<Vec<ObjectImage>> {
    if width == 0 || height == 0 {
        return Err(SpiError::InvalidDimensions(format!(
            "image size must be positive, got {width}x{height}"
        )));
    }
    (0..count)
        .map(|i| {
            let mut rng = seeded_rng(seed);
            // one independent stream per image, so image i does not depend on count
            rng.set_stream(i as u64);
            smooth_image(&mut rng, width, height)
        })
        .collect()
}

fn smooth_image(rng: &mut ChaCha8Rng, width: usize, height: usize) -> Result<ObjectImage> {
    let scale = width.min(height) as f64 / 32.0;
    let mut field = vec![0.0; width * height];
    for (sigma, amplitude) in LAYERS {
        let noise: Vec<f64> = (0..width * height).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let layer = gaussian_blur(&noise, width, height, sigma * scale);
        let rms = (layer.iter().map(|v| v * v).sum::<f64>() / layer.len() as f64).sqrt();
        if rms > 0.0 {
            for (f, l) in field.iter_mut().zip(&layer) {
                *f += amplitude * l / rms;
            }
        }
    }
    let (lo, hi) = field
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    let pixels = if span > 0.0 {
        field.iter().map(|v| (v - lo) / span).collect()
    } else {
        vec![0.0; field.len()]
    };
    ObjectImage::new(width, height, pixels)
}

/// Separable Gaussian filter with mirrored borders; `sigma` in pixels.
pub(crate) fn gaussian_blur(src: &[f64], width: usize, height: usize, sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return src.to_vec();
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let taps: Vec<f64> = (-radius..=radius)
        .map(|t| (-(t * t) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    let taps: Vec<f64> = taps.iter().map(|t| t / total).collect();
    let mirror = |i: isize, n: usize| -> usize {
        let n = n as isize;
        if n == 1 {
            return 0;
        }
        let period = 2 * (n - 1);
        let mut i = i.rem_euclid(period);
        if i >= n {
            i = period - i;
        }
        i as usize
    };
    let mut tmp = vec![0.0; src.len()];
    for y in 0..height {
        for x in 0..width {
            tmp[y * width + x] = taps
                .iter()
                .enumerate()
                .map(|(k, t)| t * src[y * width + mirror(x as isize + k as isize - radius, width)])
                .sum();
        }
    }
    let mut out = vec![0.0; src.len()];
    for y in 0..height {
        for x in 0..width {
            out[y * width + x] = taps
                .iter()
                .enumerate()
                .map(|(k, t)| t * tmp[mirror(y as isize + k as isize - radius, height) * width + x])
                .sum();
        }
    }
    out
}

/// Mean absolute difference between horizontally or vertically adjacent pixels.
pub fn mean_neighbor_difference(image: &ObjectImage) -> f64 {
    let (w, h) = (image.width(), image.height());
    let mut total = 0.0;
    let mut count = 0usize;
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                total += (image.get(x + 1, y) - image.get(x, y)).abs();
                count += 1;
            }
            if y + 1 < h {
                total += (image.get(x, y + 1) - image.get(x, y)).abs();
                count += 1;
            }
        }
    }
    if count == 0 {
        0.0
    } else {
        total / count as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_prefix_stable() {
        let a = generate_smooth_images(5, 32, 32, 11).unwrap();
        let b = generate_smooth_images(5, 32, 32, 11).unwrap();
        assert_eq!(a, b);
        let c = generate_smooth_images(3, 32, 32, 11).unwrap();
        assert_eq!(&a[..3], &c[..]);
        assert_ne!(a[0], a[1]);
        assert_ne!(a[0], generate_smooth_images(1, 32, 32, 12).unwrap()[0]);
    }

    #[test]
    fn spans_unit_interval() {
        for img in generate_smooth_images(20, 32, 32, 3).unwrap() {
            let lo = img.pixels().iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = img.pixels().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!((lo, hi), (0.0, 1.0));
        }
    }

    #[test]
    fn locally_smooth() {
        for img in generate_smooth_images(50, 32, 32, 4).unwrap() {
            let d = mean_neighbor_difference(&img);
            assert!(d < 0.15, "mean neighbor difference {d}");
        }
    }

    #[test]
    fn blur_preserves_constants() {
        let out = gaussian_blur(&[0.3; 20], 5, 4, 1.7);
        assert!(out.iter().all(|v| (v - 0.3).abs() < 1e-12));
    }

    #[test]
    fn rejects_empty_shape() {
        assert!(generate_smooth_images(1, 0, 4, 0).is_err());
        assert!(generate_smooth_images(0, 4, 4, 0).unwrap().is_empty());
    }
}
