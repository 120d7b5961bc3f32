//! Browser bindings. Each entry point builds a small experiment from a seed,
//! runs it and hands back plain numbers and pixel arrays for the page to draw.

use spi_crack::coa::{recover_permutation_coa, simulate_exemplar_intensities, HistogramConfig};
use spi_crack::io::generate_smooth_images;
use spi_crack::kpa::recover_key_type1;
use spi_crack::metrics::{cracking_correct_rate, permutation_correct_rate, psnr};
use spi_crack::solver::{tv_reconstruct, SolverConfig};
use spi_crack::{encrypt, generate_key, permute_key, ObjectImage, PermutationKey, PlainCipherCorpus};
use wasm_bindgen::prelude::*;

fn js_err(e: spi_crack::SpiError) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct DecryptDemo {
    width: usize,
    original: Vec<f64>,
    right: Vec<f64>,
    wrong: Vec<f64>,
    psnr_right: f64,
    psnr_wrong: f64,
}

#[wasm_bindgen]
impl DecryptDemo {
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.width
    }
    #[wasm_bindgen(getter)]
    pub fn original(&self) -> Vec<f64> {
        self.original.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn right(&self) -> Vec<f64> {
        self.right.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn wrong(&self) -> Vec<f64> {
        self.wrong.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn psnr_right(&self) -> f64 {
        self.psnr_right
    }
    #[wasm_bindgen(getter)]
    pub fn psnr_wrong(&self) -> f64 {
        self.psnr_wrong
    }
}

/// Encrypts one synthetic image and decrypts it with the right key and with
/// an unrelated one.
#[wasm_bindgen]
pub fn decrypt_demo(width: usize, sampling_ratio: f64, tv_weight: f64, seed: u32) -> Result<DecryptDemo, JsError> {
    let n = width * width;
    let m = ((sampling_ratio * n as f64).round() as usize).max(1);
    let seed = u64::from(seed);
    let key = generate_key(m, n, width, seed).map_err(js_err)?;
    let wrong_key = generate_key(m, n, width, seed ^ 0x5eed).map_err(js_err)?;
    let image = generate_smooth_images(1, width, width, seed).map_err(js_err)?.remove(0);
    let cipher = encrypt(&image, &key).map_err(js_err)?;
    let cfg = SolverConfig { tv_weight, ..SolverConfig::decrypt() };
    let right = tv_reconstruct(&key, &cipher, &cfg).map_err(js_err)?;
    let wrong = tv_reconstruct(&wrong_key, &cipher, &cfg).map_err(js_err)?;
    Ok(DecryptDemo {
        width,
        psnr_right: psnr(&image, &right).map_err(js_err)?,
        psnr_wrong: psnr(&image, &wrong).map_err(js_err)?,
        original: image.into_pixels(),
        right: right.into_pixels(),
        wrong: wrong.into_pixels(),
    })
}

#[wasm_bindgen]
pub struct KpaDemo {
    width: usize,
    correct_rate: f64,
    true_pattern: Vec<f64>,
    recovered_pattern: Vec<f64>,
}

#[wasm_bindgen]
impl KpaDemo {
    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.width
    }
    #[wasm_bindgen(getter)]
    pub fn correct_rate(&self) -> f64 {
        self.correct_rate
    }
    #[wasm_bindgen(getter)]
    pub fn true_pattern(&self) -> Vec<f64> {
        self.true_pattern.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn recovered_pattern(&self) -> Vec<f64> {
        self.recovered_pattern.clone()
    }
}

/// Known-plaintext attack on a Type I key from `pairs` synthetic plaintexts.
#[wasm_bindgen]
pub fn kpa_demo(width: usize, patterns: usize, pairs: usize, seed: u32) -> Result<KpaDemo, JsError> {
    let n = width * width;
    let seed = u64::from(seed);
    let key = generate_key(patterns, n, width, seed).map_err(js_err)?;
    let images = generate_smooth_images(pairs, width, width, seed + 1).map_err(js_err)?;
    let corpus = PlainCipherCorpus::from_encryption(images, &key).map_err(js_err)?;
    let result = recover_key_type1(&corpus, &SolverConfig::kpa()).map_err(js_err)?;
    Ok(KpaDemo {
        width,
        correct_rate: cracking_correct_rate(&key, &result.recovered_key).map_err(js_err)?,
        true_pattern: key.row(0).iter().map(|&b| f64::from(b)).collect(),
        recovered_pattern: result.recovered_key.row(0).iter().map(|&b| f64::from(b)).collect(),
    })
}

#[wasm_bindgen]
pub struct CoaDemo {
    correct: usize,
    patterns: usize,
    correct_rate: f64,
}

#[wasm_bindgen]
impl CoaDemo {
    #[wasm_bindgen(getter)]
    pub fn correct(&self) -> usize {
        self.correct
    }
    #[wasm_bindgen(getter)]
    pub fn patterns(&self) -> usize {
        self.patterns
    }
    #[wasm_bindgen(getter)]
    pub fn correct_rate(&self) -> f64 {
        self.correct_rate
    }
}

/// Uniformly random pixels: a different image category from the smooth set.
fn noise_images(count: usize, width: usize, seed: u64) -> Result<Vec<ObjectImage>, spi_crack::SpiError> {
    use rand::Rng;
    let mut rng = spi_crack::system::seeded_rng(seed);
    (0..count)
        .map(|_| ObjectImage::new(width, width, (0..width * width).map(|_| rng.gen::<f64>() * 0.6).collect()))
        .collect()
}

/// Ciphertext-only attack on a Type II order. Exemplars come from the same
/// smooth-image category as the secret plaintexts, or from uniform noise.
#[wasm_bindgen]
pub fn coa_demo(width: usize, patterns: usize, samples: usize, same_category: bool, seed: u32) -> Result<CoaDemo, JsError> {
    let n = width * width;
    let seed = u64::from(seed);
    let originals = generate_key(patterns, n, width, seed).map_err(js_err)?;
    let perm = PermutationKey::random(patterns, seed + 1).map_err(js_err)?;
    let secret = permute_key(&originals, &perm).map_err(js_err)?;
    let plaintexts = generate_smooth_images(samples, width, width, seed + 2).map_err(js_err)?;
    let exemplars = if same_category {
        generate_smooth_images(samples, width, width, seed + 3)
    } else {
        noise_images(samples, width, seed + 3)
    }
    .map_err(js_err)?;
    let actual = simulate_exemplar_intensities(&plaintexts, &secret).map_err(js_err)?;
    let simulated = simulate_exemplar_intensities(&exemplars, &originals).map_err(js_err)?;
    // intensities of half-on patterns over [0, 1] images fall in [0, N/2]
    let high = (n as f64 / 2.0).ceil();
    let hist = HistogramConfig::new(0.0, high, high / 30.0).map_err(js_err)?;
    let result = recover_permutation_coa(actual.view(), simulated.view(), &hist).map_err(js_err)?;
    let rate = permutation_correct_rate(&perm, &result.permutation).map_err(js_err)?;
    Ok(CoaDemo { correct: (rate * patterns as f64).round() as usize, patterns, correct_rate: rate })
}
