//! The encrypted single-pixel imaging cryptosystem.
//!
//! An object image `O` of `N` pixels is illuminated by `M` binary patterns,
//! the rows of the key matrix `K`. The bucket detector records one intensity
//! per pattern, so the ciphertext is the matrix-vector product `C = K · O`.
//! A Type I system keeps `K` secret; a Type II system publishes the original
//! patterns and keeps only their order secret.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpiError};

/// Deterministic generator used for every random draw in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A grayscale plaintext image, pixels in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl ObjectImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(SpiError::InvalidDimensions(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(SpiError::DimensionMismatch {
                what: "pixel count",
                expected: width * height,
                got: pixels.len(),
            });
        }
        if let Some((index, &value)) = pixels
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(SpiError::PixelOutOfRange { index, value });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Like [`ObjectImage::new`] but clamps every finite value into `[0, 1]`.
    pub fn from_clamped(width: usize, height: usize, mut pixels: Vec<f64>) -> Result<Self> {
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(SpiError::NonFinite(i));
        }
        for p in &mut pixels {
            *p = p.clamp(0.0, 1.0);
        }
        Self::new(width, height, pixels)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / self.pixels.len() as f64
    }
}

/// The `M × N` binary illumination-pattern matrix. Row `m` is pattern `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternKey {
    width: usize,
    height: usize,
    entries: Array2<u8>,
}

impl PatternKey {
    pub fn new(width: usize, height: usize, entries: Array2<u8>) -> Result<Self> {
        let (m, n) = entries.dim();
        if m == 0 || n == 0 {
            return Err(SpiError::InvalidDimensions(format!(
                "key must have M >= 1 and N >= 1, got {m}x{n}"
            )));
        }
        if width == 0 || width * height != n {
            return Err(SpiError::InvalidDimensions(format!(
                "pattern shape {width}x{height} does not hold {n} pixels"
            )));
        }
        if let Some(((row, col), &value)) = entries.indexed_iter().find(|(_, &v)| v > 1) {
            return Err(SpiError::NonBinaryKey { row, col, value });
        }
        Ok(Self {
            width,
            height,
            entries,
        })
    }

    pub fn from_rows(width: usize, height: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(SpiError::DimensionMismatch {
                what: "pattern length",
                expected: n,
                got: bad.len(),
            });
        }
        let flat: Vec<u8> = rows.iter().flatten().copied().collect();
        let entries = Array2::from_shape_vec((rows.len(), n), flat)
            .map_err(|e| SpiError::InvalidDimensions(e.to_string()))?;
        Self::new(width, height, entries)
    }

    /// Number of patterns `M`.
    pub fn patterns(&self) -> usize {
        self.entries.nrows()
    }

    /// Pixels per pattern `N`.
    pub fn pixels(&self) -> usize {
        self.entries.ncols()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn row(&self, m: usize) -> ArrayView1<'_, u8> {
        self.entries.row(m)
    }

    pub fn entries(&self) -> ArrayView2<'_, u8> {
        self.entries.view()
    }

    pub fn to_f64(&self) -> Array2<f64> {
        self.entries.mapv(f64::from)
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|&v| v as u64).sum::<u64>() as f64 / self.entries.len() as f64
    }
}

/// Recorded single-pixel intensities, one per pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ciphertext {
    values: Vec<f64>,
}

impl Ciphertext {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Secret pattern order of a Type II system.
///
/// `order()[i]` is the zero-based index of the original pattern placed at
/// position `i`. Text formats use one-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PermutationKey {
    order: Vec<usize>,
}

impl PermutationKey {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if order.is_empty() {
            return Err(SpiError::NotAPermutation("empty order".into()));
        }
        let mut seen = vec![false; order.len()];
        for (pos, &idx) in order.iter().enumerate() {
            if idx >= order.len() {
                return Err(SpiError::NotAPermutation(format!(
                    "position {pos} holds {idx}, outside 0..{}",
                    order.len()
                )));
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(SpiError::NotAPermutation(format!(
                    "index {idx} appears more than once"
                )));
            }
        }
        Ok(Self { order })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            order: (0..m).collect(),
        }
    }

    /// Uniform random permutation (Fisher-Yates) from the seeded generator.
    pub fn random(m: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(SpiError::InvalidDimensions("M must be >= 1".into()));
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut seeded_rng(seed));
        Ok(Self { order })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.order.len()];
        for (pos, &idx) in self.order.iter().enumerate() {
            inv[idx] = pos;
        }
        Self { order: inv }
    }

    /// `self` applied after `first`: position `i` holds `first[self[i]]`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if self.len() != first.len() {
            return Err(SpiError::DimensionMismatch {
                what: "permutation length",
                expected: first.len(),
                got: self.len(),
            });
        }
        Ok(Self {
            order: self.order.iter().map(|&i| first.order[i]).collect(),
        })
    }
}

impl TryFrom<Vec<usize>> for PermutationKey {
    type Error = SpiError;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        Self::new(order)
    }
}

impl From<PermutationKey> for Vec<usize> {
    fn from(p: PermutationKey) -> Self {
        p.order
    }
}

/// Aligned plaintext/ciphertext pairs collected by a known-plaintext attacker.
#[derive(Debug, Clone)]
pub struct PlainCipherCorpus {
    images: Vec<ObjectImage>,
    ciphertexts: Vec<Ciphertext>,
}

impl PlainCipherCorpus {
    pub fn new(images: Vec<ObjectImage>, ciphertexts: Vec<Ciphertext>) -> Result<Self> {
        if images.is_empty() {
            return Err(SpiError::InvalidDimensions(
                "corpus needs at least one pair".into(),
            ));
        }
        if images.len() != ciphertexts.len() {
            return Err(SpiError::DimensionMismatch {
                what: "ciphertext count",
                expected: images.len(),
                got: ciphertexts.len(),
            });
        }
        let (w, h) = (images[0].width(), images[0].height());
        if let Some(img) = images.iter().find(|i| i.width() != w || i.height() != h) {
            return Err(SpiError::DimensionMismatch {
                what: "image pixel count",
                expected: w * h,
                got: img.len(),
            });
        }
        let m = ciphertexts[0].len();
        if let Some(c) = ciphertexts.iter().find(|c| c.len() != m) {
            return Err(SpiError::DimensionMismatch {
                what: "ciphertext length",
                expected: m,
                got: c.len(),
            });
        }
        Ok(Self {
            images,
            ciphertexts,
        })
    }

    /// Encrypts every image under `key` to form the corpus.
    pub fn from_encryption(images: Vec<ObjectImage>, key: &PatternKey) -> Result<Self> {
        let ciphertexts = encrypt_many(&images, key)?;
        Self::new(images, ciphertexts)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Number of patterns `M` seen by the ciphertexts.
    pub fn patterns(&self) -> usize {
        self.ciphertexts[0].len()
    }

    /// Pixels per image `N`.
    pub fn pixels(&self) -> usize {
        self.images[0].len()
    }

    pub fn image_shape(&self) -> (usize, usize) {
        (self.images[0].width(), self.images[0].height())
    }

    pub fn images(&self) -> &[ObjectImage] {
        &self.images
    }

    pub fn ciphertexts(&self) -> &[Ciphertext] {
        &self.ciphertexts
    }

    /// `Q × N` matrix whose rows are the plaintext images.
    pub fn plaintext_matrix(&self) -> Array2<f64> {
        images_to_matrix(&self.images)
    }

    /// `Q × M` matrix whose rows are the ciphertexts.
    pub fn cipher_matrix(&self) -> Array2<f64> {
        let (q, m) = (self.len(), self.patterns());
        Array2::from_shape_fn((q, m), |(i, j)| self.ciphertexts[i].values()[j])
    }
}

pub(crate) fn images_to_matrix(images: &[ObjectImage]) -> Array2<f64> {
    let n = images.first().map_or(0, ObjectImage::len);
    let mut out = Array2::zeros((images.len(), n));
    for (mut row, img) in out.axis_iter_mut(Axis(0)).zip(images) {
        row.assign(&ArrayView1::from(img.pixels()));
    }
    out
}

/// Key regime: which secret the system keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "TYPE1")]
    TypeI,
    #[serde(rename = "TYPE2")]
    TypeII,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::TypeI => "TYPE1",
            Regime::TypeII => "TYPE2",
        })
    }
}

impl FromStr for Regime {
    type Err = SpiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TYPE1" | "TYPEI" | "I" | "1" => Ok(Regime::TypeI),
            "TYPE2" | "TYPEII" | "II" | "2" => Ok(Regime::TypeII),
            other => Err(SpiError::InvalidConfig(format!("unknown regime {other:?}"))),
        }
    }
}

/// Draws an `M × N` key of independent fair coin flips.
pub fn generate_key(m: usize, n: usize, width: usize, seed: u64) -> Result<PatternKey> {
    if m == 0 || n == 0 {
        return Err(SpiError::InvalidDimensions(format!(
            "key needs M >= 1 and N >= 1, got M={m} N={n}"
        )));
    }
    if width == 0 || n % width != 0 {
        return Err(SpiError::InvalidDimensions(format!(
            "width {width} does not divide N={n}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut bits = Vec::with_capacity(m * n);
    let mut word = 0u64;
    for i in 0..m * n {
        if i % 64 == 0 {
            word = rng.next_u64();
        }
        bits.push((word & 1) as u8);
        word >>= 1;
    }
    let entries = Array2::from_shape_vec((m, n), bits).expect("shape matches length");
    PatternKey::new(width, n / width, entries)
}

/// Single-pixel measurement of one image: `C(m) = Σ_n K(m,n) O(n)`.
pub fn encrypt(image: &ObjectImage, key: &PatternKey) -> Result<Ciphertext> {
    if image.len() != key.pixels() {
        return Err(SpiError::DimensionMismatch {
            what: "image pixels vs key N",
            expected: key.pixels(),
            got: image.len(),
        });
    }
    let values = key
        .entries
        .rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .zip(image.pixels())
                .filter(|(&k, _)| k == 1)
                .map(|(_, &o)| o)
                .sum()
        })
        .collect();
    Ok(Ciphertext::new(values))
}

/// Encrypts a batch of images with one matrix product.
pub fn encrypt_many(images: &[ObjectImage], key: &PatternKey) -> Result<Vec<Ciphertext>> {
    if let Some(img) = images.iter().find(|i| i.len() != key.pixels()) {
        return Err(SpiError::DimensionMismatch {
            what: "image pixels vs key N",
            expected: key.pixels(),
            got: img.len(),
        });
    }
    if images.is_empty() {
        return Ok(Vec::new());
    }
    let plain = images_to_matrix(images);
    let cipher = plain.dot(&key.to_f64().t());
    Ok(cipher
        .rows()
        .into_iter()
        .map(|r| Ciphertext::new(r.to_vec()))
        .collect())
}

/// Reorders the published patterns: row `i` of the result is row `perm[i]`.
pub fn permute_key(original: &PatternKey, perm: &PermutationKey) -> Result<PatternKey> {
    if perm.len() != original.patterns() {
        return Err(SpiError::DimensionMismatch {
            what: "permutation length vs M",
            expected: original.patterns(),
            got: perm.len(),
        });
    }
    let entries = original.entries.select(Axis(0), perm.order());
    Ok(PatternKey {
        width: original.width,
        height: original.height,
        entries,
    })
}

/// Exact number of keys in a regime, with its base-2 logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct KeySpace {
    pub count: BigUint,
    pub log2: f64,
}

pub fn key_space_size(m: usize, n: usize, regime: Regime) -> Result<KeySpace> {
    if m == 0 || n == 0 {
        return Err(SpiError::InvalidDimensions(format!(
            "key space needs M >= 1 and N >= 1, got M={m} N={n}"
        )));
    }
    Ok(match regime {
        Regime::TypeI => {
            let bits = m * n;
            KeySpace {
                count: BigUint::one() << bits,
                log2: bits as f64,
            }
        }
        Regime::TypeII => {
            let count = (2..=m as u64).fold(BigUint::one(), |acc, k| acc * k);
            let log2 = (2..=m).map(|k| (k as f64).log2()).sum();
            KeySpace { count, log2 }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn key(rows: &[Vec<u8>], width: usize) -> PatternKey {
        let n = rows[0].len();
        PatternKey::from_rows(width, n / width, rows).unwrap()
    }

    #[test]
    fn generate_key_is_deterministic() {
        let a = generate_key(1, 4, 2, 0xdead).unwrap();
        let b = generate_key(1, 4, 2, 0xdead).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.patterns(), 1);
        assert_eq!(a.pixels(), 4);
        assert_eq!((a.width(), a.height()), (2, 2));
    }

    #[test]
    fn generate_key_is_binary() {
        let k = generate_key(64, 64, 8, 7).unwrap();
        assert_eq!(k.entries().len(), 4096);
        assert!(k.entries().iter().all(|&v| v <= 1));
    }

    #[test]
    fn generate_key_mean_concentrates() {
        // Binomial(2^20, 1/2): sd of the mean is 2^-11 ~ 4.9e-4, so
        // [0.47, 0.53] is a ~61 sigma window.
        let k = generate_key(1024, 1024, 32, 99).unwrap();
        let mean = k.mean();
        assert!((0.47..=0.53).contains(&mean), "mean {mean}");
    }

    #[test]
    fn generate_key_rejects_bad_dims() {
        assert!(generate_key(0, 4, 2, 0).is_err());
        assert!(generate_key(4, 0, 1, 0).is_err());
        assert!(generate_key(4, 6, 4, 0).is_err());
    }

    #[test]
    fn different_seeds_differ() {
        assert_ne!(
            generate_key(8, 64, 8, 1).unwrap(),
            generate_key(8, 64, 8, 2).unwrap()
        );
    }

    #[test]
    fn encrypt_hand_example() {
        let k = key(&[vec![1, 0], vec![1, 1]], 2);
        let o = ObjectImage::new(2, 1, vec![0.5, 0.25]).unwrap();
        assert_eq!(encrypt(&o, &k).unwrap().values(), &[0.5, 0.75]);
    }

    #[test]
    fn encrypt_zero_image_and_sum_row() {
        let k = generate_key(5, 16, 4, 3).unwrap();
        let zero = ObjectImage::filled(4, 4, 0.0).unwrap();
        assert!(encrypt(&zero, &k).unwrap().values().iter().all(|&c| c == 0.0));

        let ones = key(&[vec![1; 4]], 2);
        let o = ObjectImage::new(2, 2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let c = encrypt(&o, &ones).unwrap();
        assert!((c.values()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encrypt_rejects_mismatch() {
        let k = generate_key(3, 16, 4, 3).unwrap();
        let o = ObjectImage::filled(3, 3, 0.5).unwrap();
        assert!(matches!(
            encrypt(&o, &k),
            Err(SpiError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn encrypt_many_matches_single() {
        let k = generate_key(7, 9, 3, 11).unwrap();
        let imgs: Vec<_> = (0..4)
            .map(|i| ObjectImage::new(3, 3, (0..9).map(|p| ((p * 7 + i * 3) % 10) as f64 / 10.0).collect()).unwrap())
            .collect();
        let many = encrypt_many(&imgs, &k).unwrap();
        for (img, c) in imgs.iter().zip(&many) {
            let single = encrypt(img, &k).unwrap();
            for (a, b) in single.values().iter().zip(c.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn permute_identity_swap_inverse() {
        let k = generate_key(6, 4, 2, 5).unwrap();
        assert_eq!(permute_key(&k, &PermutationKey::identity(6)).unwrap(), k);

        let two = key(&[vec![1, 0], vec![0, 1]], 2);
        let swapped = permute_key(&two, &PermutationKey::new(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(swapped.entries(), array![[0u8, 1], [1, 0]]);

        let p = PermutationKey::random(6, 17).unwrap();
        let back = permute_key(&permute_key(&k, &p).unwrap(), &p.inverse()).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn permute_rejects_wrong_length() {
        let k = generate_key(3, 4, 2, 5).unwrap();
        assert!(permute_key(&k, &PermutationKey::identity(4)).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(PermutationKey::new(vec![0, 0]).is_err());
        assert!(PermutationKey::new(vec![0, 2]).is_err());
        assert!(PermutationKey::new(vec![]).is_err());
        let p: PermutationKey = serde_json::from_str("[2,0,1]").unwrap();
        assert_eq!(p.order(), &[2, 0, 1]);
        assert!(serde_json::from_str::<PermutationKey>("[1,1]").is_err());
    }

    #[test]
    fn key_space_reference_values() {
        let ks = key_space_size(16, 64, Regime::TypeII).unwrap();
        assert_eq!(ks.count, BigUint::from(20_922_789_888_000u64));

        let ks32 = key_space_size(32, 64, Regime::TypeII).unwrap();
        let approx: f64 = ks32.count.to_string().parse().unwrap();
        // quoted to two significant figures
        assert!((approx / 2.6e35 - 1.0).abs() < 0.02, "{approx:e}");
        assert!((ks32.log2 - approx.log2()).abs() < 1e-9);

        let one = key_space_size(1, 1, Regime::TypeI).unwrap();
        assert_eq!(one.count, BigUint::from(2u8));
        assert_eq!(one.log2, 1.0);
    }

    #[test]
    fn type_two_space_is_smaller() {
        for &m in &[16usize, 32, 64, 128, 410, 717, 1024] {
            for &n in &[64usize, 256, 1024] {
                let t1 = key_space_size(m, n, Regime::TypeI).unwrap();
                let t2 = key_space_size(m, n, Regime::TypeII).unwrap();
                assert!(t2.count < t1.count, "M={m} N={n}");
                assert!(t2.log2 < t1.log2);
            }
        }
    }

    #[test]
    fn image_validation() {
        assert!(ObjectImage::new(2, 2, vec![0.0; 3]).is_err());
        assert!(ObjectImage::new(1, 1, vec![1.5]).is_err());
        assert!(ObjectImage::new(0, 1, vec![]).is_err());
        let c = ObjectImage::from_clamped(1, 2, vec![-0.5, 2.0]).unwrap();
        assert_eq!(c.pixels(), &[0.0, 1.0]);
        assert!(ObjectImage::from_clamped(1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn regime_parsing() {
        assert_eq!("TYPE1".parse::<Regime>().unwrap(), Regime::TypeI);
        assert_eq!("type2".parse::<Regime>().unwrap(), Regime::TypeII);
        assert!("TYPE3".parse::<Regime>().is_err());
        assert_eq!(Regime::TypeII.to_string(), "TYPE2");
    }
}
